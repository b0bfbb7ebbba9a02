#pragma once

// Continued fractions x = [0; a1, a2, ...] for x in (0, 1): certified
// partial quotients, convergents and the semiconvergent families
// [0; a1, ..., a_{n-1}, b].

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xda/errors.hpp"
#include "xda/exact.hpp"
#include "xda/target.hpp"

namespace xda {

struct CFExpansion {
  std::vector<BigInt> partials;
  // Precision index at which each partial quotient was certified; 0 when it
  // came from exact arithmetic.
  std::vector<unsigned long> certified_at;
  // True when x is rational and its expansion ended before the requested
  // number of terms.
  bool terminated = false;
};

/// Canonical expansion of a rational r in (0, 1]: last partial > 1 unless r = 1.
inline std::vector<BigInt> rational_partials(const BigRational& r) {
  if (sgn(r) <= 0 || r > 1) throw InvalidInput("rational_partials needs r in (0, 1]");
  std::vector<BigInt> out;
  BigInt num = r.get_den();
  BigInt den = r.get_num();
  while (den != 0) {
    BigInt a;
    BigInt rem;
    mpz_fdiv_qr(a.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    out.push_back(a);
    num = den;
    den = rem;
  }
  return out;
}

namespace detail {

inline CFExpansion expand_exact(const QuadScalar& value, std::size_t n) {
  CFExpansion cf;
  QuadScalar y = value;
  while (cf.partials.size() < n) {
    if (y.is_zero()) {
      cf.terminated = true;
      break;
    }
    y = QuadScalar(1) / y;
    const BigInt a = y.floor();
    y = y - QuadScalar(BigRational(a));
    cf.partials.push_back(a);
    cf.certified_at.push_back(0);
  }
  return cf;
}

}  // namespace detail

/// First n partial quotients of x in (0, 1). Digit streams are certified by
/// expanding both ends of the enclosure and keeping the common prefix; a
/// term is accepted only while both endpoint expansions continue past it, so
/// every point of the enclosure shares it.
inline CFExpansion expand(const Coordinate& x, std::size_t n,
                          unsigned long max_precision = default_max_precision()) {
  if (auto e = x.exact()) {
    if (sign(*e) <= 0 || sign(*e - QuadScalar(1)) >= 0) {
      throw InvalidInput("continued fraction expansion needs x in (0, 1)");
    }
    return detail::expand_exact(*e, n);
  }
  CFExpansion cf;
  for (unsigned long k = 32;; k = std::min(2 * k, max_precision)) {
    const RationalInterval enc = x.enclose(k);
    if (sgn(enc.lo()) > 0 && enc.hi() < 1) {
      const std::vector<BigInt> lo = rational_partials(enc.lo());
      const std::vector<BigInt> hi = rational_partials(enc.hi());
      const std::size_t limit = std::min(lo.size(), hi.size()) - 1;
      std::size_t common = 0;
      while (common < limit && common < n && lo[common] == hi[common]) ++common;
      for (std::size_t i = cf.partials.size(); i < common; ++i) {
        cf.partials.push_back(lo[i]);
        cf.certified_at.push_back(k);
      }
      if (cf.partials.size() >= n) return cf;
    }
    if (k >= max_precision) break;
  }
  throw PrecisionExhausted("partial quotient " + std::to_string(cf.partials.size() + 1) +
                               " not certified at precision cap " + std::to_string(max_precision),
                           cf.partials.size() + 1);
}

struct Convergent {
  BigInt p;
  BigInt q;
};

/// p_k/q_k for k = 1..len, seeded with p_{-1}/q_{-1} = 1/0, p_0/q_0 = 0/1.
inline std::vector<Convergent> convergents(std::span<const BigInt> partials) {
  std::vector<Convergent> out;
  out.reserve(partials.size());
  BigInt p2 = 1, q2 = 0, p1 = 0, q1 = 1;
  for (const BigInt& a : partials) {
    BigInt p = a * p1 + p2;
    BigInt q = a * q1 + q2;
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
    out.push_back({std::move(p), std::move(q)});
  }
  return out;
}

struct Semiconvergent {
  std::size_t n = 0;
  BigInt b;
  BigInt p;
  BigInt q;
};

/// p_{n,b}/q_{n,b} = (p_{n-2} + b p_{n-1}) / (q_{n-2} + b q_{n-1}), i.e.
/// [0; a1, ..., a_{n-1}, b]. Uses a_1..a_{n-1} only; b = a_n gives p_n/q_n.
inline Semiconvergent semiconvergent(std::span<const BigInt> partials, std::size_t n,
                                     const BigInt& b) {
  if (n < 1 || b < 1) throw InvalidInput("semiconvergent needs n >= 1 and b >= 1");
  if (partials.size() + 1 < n) throw InvalidInput("not enough partial quotients");
  BigInt p2 = 1, q2 = 0, p1 = 0, q1 = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    BigInt p = partials[k] * p1 + p2;
    BigInt q = partials[k] * q1 + q2;
    p2 = p1;
    q2 = q1;
    p1 = p;
    q1 = q;
  }
  return {n, b, BigInt(p2 + b * p1), BigInt(q2 + b * q1)};
}

inline Semiconvergent semiconvergent(const CFExpansion& cf, std::size_t n, const BigInt& b) {
  if (cf.partials.size() < n) throw InvalidInput("expansion has fewer than n certified terms");
  return semiconvergent(std::span<const BigInt>(cf.partials), n, b);
}

enum class ConvergentClass { kMustBeConvergent, kIsConvergentQuality, kNeither, kUndecidable };

inline const char* to_string(ConvergentClass c) {
  switch (c) {
    case ConvergentClass::kMustBeConvergent: return "MustBeConvergent";
    case ConvergentClass::kIsConvergentQuality: return "IsConvergentQuality";
    case ConvergentClass::kNeither: return "Neither";
    case ConvergentClass::kUndecidable: return "Undecidable";
  }
  return "?";
}

/// |x - p/q| < 1/(2q^2) forces p/q to be a convergent; every convergent has
/// |x - p/q| < 1/q^2. Undecidable means the distance sits exactly on a
/// threshold.
inline ConvergentClass convergent_filter(const Coordinate& x, const BigInt& p, const BigInt& q) {
  if (q < 1) throw InvalidInput("convergent_filter needs q >= 1");
  const Cmp half = compare_residual_power(x, q, p, 1, make_rational(1, BigInt(2 * q))).result;
  if (half == Cmp::kLess) return ConvergentClass::kMustBeConvergent;
  if (half == Cmp::kEqual) return ConvergentClass::kUndecidable;
  const Cmp full = compare_residual_power(x, q, p, 1, make_rational(1, q)).result;
  if (full == Cmp::kLess) return ConvergentClass::kIsConvergentQuality;
  if (full == Cmp::kEqual) return ConvergentClass::kUndecidable;
  return ConvergentClass::kNeither;
}

}  // namespace xda
