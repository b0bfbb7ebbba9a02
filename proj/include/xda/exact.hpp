#pragma once

// Exact scalars: big rationals (GMP), rational intervals, and numbers in a
// real quadratic field Q(sqrt(D)). Every comparison in the library reduces to
// integer arithmetic through this header.

#include <gmpxx.h>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <ostream>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "xda/errors.hpp"

namespace xda {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline BigRational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw InvalidInput("zero denominator");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

inline int sign(const BigInt& v) { return sgn(v); }
inline int sign(const BigRational& v) { return sgn(v); }

inline BigInt floor_of(const BigRational& r) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline BigInt ceil_of(const BigRational& r) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline BigInt ipow(const BigInt& base, unsigned long exp) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exp);
  return out;
}

inline BigRational pow(const BigRational& base, unsigned long exp) {
  BigRational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exp);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exp);
  return out;  // already canonical: powers of coprime integers stay coprime
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

/// floor(n^(1/k)) for n >= 0.
inline BigInt root_floor(const BigInt& n, unsigned long k) {
  if (n < 0) throw InvalidInput("root of a negative integer");
  BigInt out;
  mpz_root(out.get_mpz_t(), n.get_mpz_t(), k);
  return out;
}

inline bool is_perfect_power(const BigInt& n, unsigned long k) {
  const BigInt r = root_floor(n, k);
  return ipow(r, k) == n;
}

/// Nearest integer, ties to even.
inline BigInt round_half_even(const BigRational& r) {
  const BigInt fl = floor_of(r);
  const BigRational frac = r - BigRational(fl);
  const BigRational half(1, 2);
  if (frac < half) return fl;
  if (frac > half) return fl + 1;
  return (fl % 2 == 0) ? fl : BigInt(fl + 1);
}

inline std::string to_string(const BigInt& v) { return v.get_str(); }

inline std::string to_string(const BigRational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

/// Base-10 integer text with an optional sign. (mpz_class(std::string)
/// uses base 0, which would read "0125" as octal.)
inline BigInt parse_integer(std::string text) {
  if (!text.empty() && text[0] == '+') text.erase(0, 1);
  BigInt v;
  if (text.empty() || v.set_str(text, 10) != 0) throw InvalidInput("not an integer: '" + text + "'");
  return v;
}

/// Parses "p", "p/q" or a terminating decimal such as "-0.125".
inline BigRational parse_rational(const std::string& text) {
  static const std::regex frac(R"(^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$)");
  static const std::regex dec(R"(^\s*([+-]?)(\d*)\.(\d+)\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, frac)) {
    const BigInt num = parse_integer(m[1].str());
    const BigInt den = parse_integer(m[2].matched ? m[2].str() : std::string("1"));
    return make_rational(num, den);
  }
  if (std::regex_match(text, m, dec)) {
    const std::string whole = m[2].str().empty() ? "0" : m[2].str();
    const std::string frac_digits = m[3].str();
    BigInt num = parse_integer(whole + frac_digits);
    if (m[1].str() == "-") num = -num;
    return make_rational(num, ipow(10, frac_digits.size()));
  }
  throw InvalidInput("not a rational number: '" + text + "'");
}

/// Splits n > 0 as square^2 * squarefree. Trial division, so only meant for
/// the modest radicands this library meets (norms of small integer vectors).
inline std::pair<BigInt, BigInt> squarefree_split(BigInt n) {
  if (n <= 0) throw InvalidInput("squarefree_split needs a positive integer");
  BigInt square = 1;
  BigInt free = 1;
  for (unsigned long p = 2; BigInt(p) * p <= n; ++p) {
    if (p > 2000000UL) {
      if (n > BigInt("1000000000000000000") && !is_perfect_power(n, 2)) {
        throw InvalidInput("radicand too large to factor: " + n.get_str());
      }
      break;
    }
    unsigned count = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      n /= p;
      ++count;
    }
    if (count >= 2) square *= ipow(BigInt(p), count / 2);
    if (count % 2 == 1) free *= p;
  }
  if (n > 1) {
    if (is_perfect_power(n, 2)) {
      square *= root_floor(n, 2);
    } else {
      free *= n;
    }
  }
  return {square, free};
}

// ---------------------------------------------------------------------------
// RationalInterval

/// Closed interval [lo, hi] with rational endpoints. Arithmetic is exact on
/// the endpoints, so every enclosed value stays enclosed; `rounded` coarsens
/// outward to keep denominators small.
class RationalInterval {
 public:
  RationalInterval() = default;
  explicit RationalInterval(const BigRational& point) : lo_(point), hi_(point) {}
  RationalInterval(const BigRational& lo, const BigRational& hi) : lo_(lo), hi_(hi) {
    if (hi_ < lo_) throw InvalidInput("interval with lo > hi");
  }

  const BigRational& lo() const { return lo_; }
  const BigRational& hi() const { return hi_; }
  BigRational width() const { return hi_ - lo_; }
  BigRational midpoint() const { return (lo_ + hi_) / 2; }
  bool contains(const BigRational& v) const { return lo_ <= v && v <= hi_; }
  bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }
  bool is_point() const { return lo_ == hi_; }

  RationalInterval operator-() const { return {-hi_, -lo_}; }

  friend RationalInterval operator+(const RationalInterval& a, const RationalInterval& b) {
    return {a.lo_ + b.lo_, a.hi_ + b.hi_};
  }
  friend RationalInterval operator-(const RationalInterval& a, const RationalInterval& b) {
    return {a.lo_ - b.hi_, a.hi_ - b.lo_};
  }
  friend RationalInterval operator*(const RationalInterval& a, const RationalInterval& b) {
    const BigRational c[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
    return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
  }
  friend RationalInterval operator/(const RationalInterval& a, const RationalInterval& b) {
    if (b.contains_zero()) throw InvalidInput("interval division by an interval containing 0");
    const BigRational inv_lo = 1 / b.hi_;
    const BigRational inv_hi = 1 / b.lo_;
    return a * RationalInterval(inv_lo, inv_hi);
  }

  friend RationalInterval operator+(const RationalInterval& a, const BigRational& b) {
    return {a.lo_ + b, a.hi_ + b};
  }
  friend RationalInterval operator-(const RationalInterval& a, const BigRational& b) {
    return {a.lo_ - b, a.hi_ - b};
  }
  friend RationalInterval operator*(const RationalInterval& a, const BigRational& b) {
    if (sgn(b) >= 0) return {a.lo_ * b, a.hi_ * b};
    return {a.hi_ * b, a.lo_ * b};
  }

  RationalInterval abs() const {
    if (sgn(lo_) >= 0) return *this;
    if (sgn(hi_) <= 0) return {-hi_, -lo_};
    return {BigRational(0), std::max(BigRational(-lo_), hi_)};
  }

  RationalInterval pow(unsigned long k) const {
    if (k == 0) return RationalInterval(BigRational(1));
    if (k % 2 == 1) return {xda::pow(lo_, k), xda::pow(hi_, k)};
    const RationalInterval a = abs();
    return {xda::pow(a.lo_, k), xda::pow(a.hi_, k)};
  }

  /// Intersection; throws if disjoint (refinements of one value never are).
  RationalInterval intersect(const RationalInterval& o) const {
    return {std::max(lo_, o.lo_), std::min(hi_, o.hi_)};
  }

  /// Outward rounding to denominators 2^bits.
  RationalInterval rounded(unsigned long bits) const {
    const BigInt scale = ipow(2, bits);
    return {make_rational(floor_of(lo_ * scale), scale), make_rational(ceil_of(hi_ * scale), scale)};
  }

  std::string to_string() const {
    return "[" + xda::to_string(lo_) + ", " + xda::to_string(hi_) + "]";
  }

 private:
  BigRational lo_{0};
  BigRational hi_{0};
};

/// Enclosure of n^(1/k) with endpoints on the 2^-bits grid (a point when the
/// root is exact at that grid).
inline RationalInterval enclose_root(const BigInt& n, unsigned long k, unsigned long bits) {
  const BigInt scale = ipow(2, bits);
  const BigInt scaled = n * ipow(scale, k);
  const BigInt r = root_floor(scaled, k);
  if (ipow(r, k) == scaled) return RationalInterval(make_rational(r, scale));
  return {make_rational(r, scale), make_rational(r + 1, scale)};
}

// ---------------------------------------------------------------------------
// QuadScalar

/// A number a + b*sqrt(D) with rational a, b and squarefree D > 1. Pure
/// rationals carry b = 0 and radicand 0; arithmetic between two numbers with
/// different radicals is rejected.
class QuadScalar {
 public:
  QuadScalar() = default;
  QuadScalar(const BigRational& a) : a_(a) { a_.canonicalize(); }  // NOLINT: implicit from rationals
  QuadScalar(long v) : a_(v) {}               // NOLINT
  QuadScalar(int v) : a_(v) {}                // NOLINT

  /// a + b*sqrt(radicand); radicand need not be squarefree.
  QuadScalar(const BigRational& a, BigRational b, const BigInt& radicand) : a_(a) {
    a_.canonicalize();
    b.canonicalize();
    if (radicand <= 0) throw InvalidInput("radicand must be positive");
    if (b == 0) return;
    const auto [square, free] = squarefree_split(radicand);
    if (free == 1) {
      a_ += b * BigRational(square);
      return;
    }
    if (!free.fits_slong_p()) throw InvalidInput("radicand too large");
    b_ = b * BigRational(square);
    d_ = free.get_si();
  }

  /// sqrt(n) for an integer n >= 0.
  static QuadScalar sqrt_of(const BigInt& n) {
    if (n == 0) return QuadScalar();
    return QuadScalar(BigRational(0), BigRational(1), n);
  }

  const BigRational& rational_part() const { return a_; }
  const BigRational& radical_part() const { return b_; }
  long radicand() const { return d_; }
  bool is_rational() const { return d_ == 0; }

  /// Integer form (A + B*sqrt(D))/C with C > 0 and gcd(A, B, C) = 1.
  struct IntegerForm {
    BigInt a, b, c;
    long d;
  };
  IntegerForm integer_form() const {
    const BigInt c = lcm(a_.get_den(), b_.get_den());
    return {BigInt(a_.get_num() * (c / a_.get_den())), BigInt(b_.get_num() * (c / b_.get_den())),
            c, d_};
  }

  QuadScalar conjugate() const { return make(a_, -b_, d_); }
  /// a^2 - b^2 D, the field norm.
  BigRational norm() const { return a_ * a_ - b_ * b_ * BigRational(d_); }

  QuadScalar operator-() const { return make(-a_, -b_, d_); }

  friend QuadScalar operator+(const QuadScalar& x, const QuadScalar& y) {
    return make(x.a_ + y.a_, x.b_ + y.b_, common_radicand(x, y));
  }
  friend QuadScalar operator-(const QuadScalar& x, const QuadScalar& y) {
    return make(x.a_ - y.a_, x.b_ - y.b_, common_radicand(x, y));
  }
  friend QuadScalar operator*(const QuadScalar& x, const QuadScalar& y) {
    const long d = common_radicand(x, y);
    if (d == 0) return QuadScalar(BigRational(x.a_ * y.a_));
    return make(x.a_ * y.a_ + x.b_ * y.b_ * BigRational(d), x.a_ * y.b_ + x.b_ * y.a_, d);
  }
  friend QuadScalar operator/(const QuadScalar& x, const QuadScalar& y) {
    if (y.is_zero()) throw InvalidInput("division by zero");
    if (y.is_rational()) return make(x.a_ / y.a_, x.b_ / y.a_, x.d_);
    const BigRational n = y.norm();
    return x * make(y.a_ / n, -y.b_ / n, y.d_);
  }
  QuadScalar& operator+=(const QuadScalar& o) { return *this = *this + o; }
  QuadScalar& operator-=(const QuadScalar& o) { return *this = *this - o; }
  QuadScalar& operator*=(const QuadScalar& o) { return *this = *this * o; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

  /// Exact sign of the real value: integer squaring, no floating point.
  friend int sign(const QuadScalar& s) {
    const int sa = sgn(s.a_);
    const int sb = sgn(s.b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    const BigRational a2 = s.a_ * s.a_;
    const BigRational b2d = s.b_ * s.b_ * BigRational(s.d_);
    if (a2 > b2d) return sa;
    if (a2 < b2d) return sb;
    return 0;
  }

  friend bool operator==(const QuadScalar& x, const QuadScalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.d_ == y.d_;
  }
  friend std::strong_ordering operator<=>(const QuadScalar& x, const QuadScalar& y) {
    const int s = sign(x - y);
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  QuadScalar abs() const { return sign(*this) < 0 ? -*this : *this; }

  QuadScalar pow(unsigned long k) const {
    QuadScalar result(1);
    QuadScalar base = *this;
    while (k > 0) {
      if (k & 1UL) result = result * base;
      base = base * base;
      k >>= 1;
    }
    return result;
  }

  /// Enclosure with width at most |b| * 2^-bits.
  RationalInterval enclose(unsigned long bits) const {
    if (is_rational()) return RationalInterval(a_);
    const RationalInterval root = enclose_root(BigInt(d_), 2, bits);
    return root * b_ + a_;
  }

  BigInt floor() const {
    if (is_rational()) return floor_of(a_);
    for (unsigned long bits = 32;; bits *= 2) {
      const RationalInterval e = enclose(bits);
      const BigInt lo = floor_of(e.lo());
      if (lo == floor_of(e.hi())) return lo;
    }
  }

  /// A rational approximation within 2^-bits * |b|.
  BigRational approx(unsigned long bits) const { return enclose(bits).midpoint(); }

  double to_double() const { return approx(64).get_d(); }

  /// Rational: "p/q"; otherwise the point-spec body "(A+B*sqrt(D))/C".
  std::string to_string() const {
    if (is_rational()) return xda::to_string(a_);
    const IntegerForm f = integer_form();
    std::string s = "(" + f.a.get_str();
    s += (f.b < 0 ? "-" : "+");
    s += BigInt(abs_int(f.b)).get_str() + "*sqrt(" + std::to_string(f.d) + "))/" + f.c.get_str();
    return s;
  }

  /// Structural order; a strict weak order suitable for map keys.
  struct StructuralLess {
    bool operator()(const QuadScalar& x, const QuadScalar& y) const {
      if (x.d_ != y.d_) return x.d_ < y.d_;
      if (x.a_ != y.a_) return x.a_ < y.a_;
      return x.b_ < y.b_;
    }
  };

 private:
  static BigInt abs_int(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

  static QuadScalar make(const BigRational& a, const BigRational& b, long d) {
    QuadScalar s;
    s.a_ = a;
    if (sgn(b) != 0) {
      s.b_ = b;
      s.d_ = d;
    }
    return s;
  }

  static long common_radicand(const QuadScalar& x, const QuadScalar& y) {
    if (x.d_ == 0) return y.d_;
    if (y.d_ == 0 || y.d_ == x.d_) return x.d_;
    throw InvalidInput("mixed radicals sqrt(" + std::to_string(x.d_) + ") and sqrt(" +
                       std::to_string(y.d_) + ")");
  }

  BigRational a_{0};
  BigRational b_{0};
  long d_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const QuadScalar& s) { return os << s.to_string(); }

/// Parses "(A+B*sqrt(D))/C", "(A+B*sqrt(D))", or a plain rational.
inline QuadScalar parse_quad(const std::string& text) {
  static const std::regex quad(
      R"(^\s*\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*(?:/\s*(\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, quad)) {
    const BigInt a = parse_integer(m[1].str());
    BigInt b = parse_integer(m[3].str());
    if (m[2].str() == "-") b = -b;
    const BigInt d = parse_integer(m[4].str());
    const BigInt c = parse_integer(m[5].matched ? m[5].str() : std::string("1"));
    if (c == 0) throw InvalidInput("zero denominator in '" + text + "'");
    if (d == 0) return QuadScalar(make_rational(a, c));
    return QuadScalar(make_rational(a, c), make_rational(b, c), d);
  }
  return QuadScalar(parse_rational(text));
}

using QuadVector = std::vector<QuadScalar>;

}  // namespace xda
