#pragma once

// Target points: coordinates given exactly (rational, quadratic) or as
// digit streams with certified truncation error, and the certified
// comparisons the rest of the library is built on.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "xda/errors.hpp"
#include "xda/exact.hpp"

namespace xda {

/// Refinement cap (digits of the coordinate's base, or bits for quadratic
/// coordinates). Default 4096; XDA_MAX_PRECISION overrides.
inline unsigned long default_max_precision() {
  static const unsigned long cap = [] {
    if (const char* env = std::getenv("XDA_MAX_PRECISION")) {
      try {
        const unsigned long v = std::stoul(env);
        if (v >= 16) return v;
      } catch (...) {
      }
    }
    return 4096UL;
  }();
  return cap;
}

enum class DigitRule { kPeriodic, kThueMorse, kSeeded };

/// x = 0.d1 d2 d3 ... in the given base.
struct DigitStream {
  int base = 10;
  DigitRule rule = DigitRule::kPeriodic;
  // Periodic: the repeating block. Thue-Morse: the two symbols (t_n = 0 ->
  // first). Seeded: the alphabet.
  std::vector<int> symbols;
  std::uint64_t seed = 0;

  std::vector<int> digits(std::size_t count) const {
    std::vector<int> out(count);
    switch (rule) {
      case DigitRule::kPeriodic:
        for (std::size_t i = 0; i < count; ++i) out[i] = symbols[i % symbols.size()];
        break;
      case DigitRule::kThueMorse:
        for (std::size_t i = 0; i < count; ++i) {
          out[i] = symbols[static_cast<std::size_t>(__builtin_popcountll(i) & 1)];
        }
        break;
      case DigitRule::kSeeded: {
        // mt19937_64 output is fully specified by the standard, unlike the
        // distributions, so streams are identical across platforms.
        std::mt19937_64 rng(seed);
        for (std::size_t i = 0; i < count; ++i) out[i] = symbols[rng() % symbols.size()];
        break;
      }
    }
    return out;
  }

  int min_symbol() const { return *std::min_element(symbols.begin(), symbols.end()); }
  int max_symbol() const { return *std::max_element(symbols.begin(), symbols.end()); }

  /// Exact value of a purely periodic expansion.
  std::optional<BigRational> exact_value() const {
    if (rule != DigitRule::kPeriodic) return std::nullopt;
    BigInt block = 0;
    for (int d : symbols) block = block * base + d;
    return make_rational(block, ipow(base, symbols.size()) - 1);
  }
};

/// Certified enclosure x in [lo/den, hi/den].
struct FixedEnclosure {
  BigInt lo;
  BigInt hi;
  BigInt den;
};

/// One coordinate of a target point.
class Coordinate {
 public:
  Coordinate() : value_(BigRational(0)) {}
  Coordinate(BigRational r) : value_(std::move(r)) {}  // NOLINT
  Coordinate(QuadScalar q) {                           // NOLINT
    if (q.is_rational()) {
      value_ = q.rational_part();
    } else {
      value_ = std::move(q);
    }
  }
  Coordinate(DigitStream s) : value_(std::move(s)) {  // NOLINT
    const DigitStream& d = std::get<DigitStream>(value_);
    if (d.base < 2 || d.base > 36) throw InvalidInput("digit base must be in [2, 36]");
    if (d.symbols.empty()) throw InvalidInput("digit stream needs at least one symbol");
    for (int v : d.symbols) {
      if (v < 0 || v >= d.base) throw InvalidInput("digit out of range for base");
    }
    if (d.rule == DigitRule::kThueMorse && d.symbols.size() != 2) {
      throw InvalidInput("Thue-Morse stream needs exactly two symbols");
    }
  }

  bool is_digit_stream() const { return std::holds_alternative<DigitStream>(value_); }
  const DigitStream* digit_stream() const { return std::get_if<DigitStream>(&value_); }

  /// The exact value when one is known: rationals, quadratic numbers and
  /// purely periodic digit streams.
  std::optional<QuadScalar> exact() const {
    if (const auto* r = std::get_if<BigRational>(&value_)) return QuadScalar(*r);
    if (const auto* q = std::get_if<QuadScalar>(&value_)) return *q;
    if (auto v = std::get<DigitStream>(value_).exact_value()) return QuadScalar(*v);
    return std::nullopt;
  }

  bool certified_rational() const {
    const auto e = exact();
    return e && e->is_rational();
  }

  /// Certified enclosure at precision k: the first k digits for streams,
  /// 2^-k scale for quadratic numbers, exact for rationals.
  FixedEnclosure fixed(unsigned long k) const {
    if (const auto* r = std::get_if<BigRational>(&value_)) {
      return {r->get_num(), r->get_num(), r->get_den()};
    }
    if (const auto* q = std::get_if<QuadScalar>(&value_)) {
      const RationalInterval e = q->enclose(k);
      const BigInt den = lcm(e.lo().get_den(), e.hi().get_den());
      return {BigInt(e.lo().get_num() * (den / e.lo().get_den())),
              BigInt(e.hi().get_num() * (den / e.hi().get_den())), den};
    }
    const auto& s = std::get<DigitStream>(value_);
    BigInt prefix = 0;
    for (int d : s.digits(k)) prefix = prefix * s.base + d;
    // Tail lies in [min, max] / (base - 1) * base^-k.
    const BigInt m = s.base - 1;
    return {BigInt(prefix * m + s.min_symbol()), BigInt(prefix * m + s.max_symbol()),
            BigInt(ipow(s.base, k) * m)};
  }

  RationalInterval enclose(unsigned long k) const {
    const FixedEnclosure f = fixed(k);
    return {make_rational(f.lo, f.den), make_rational(f.hi, f.den)};
  }

  /// Truncation x_hat and error bound: (digit prefix, base^-k) for streams,
  /// (value, 0) for exact coordinates (quadratic ones rounded to 2^-k but
  /// carried symbolically by `exact`).
  std::pair<BigRational, BigRational> approx(unsigned long k) const {
    if (const auto* s = std::get_if<DigitStream>(&value_)) {
      BigInt prefix = 0;
      for (int d : s->digits(k)) prefix = prefix * s->base + d;
      const BigInt scale = ipow(s->base, k);
      return {make_rational(prefix, scale), make_rational(1, scale)};
    }
    if (const auto* q = std::get_if<QuadScalar>(&value_)) return {q->approx(k), BigRational(0)};
    return {std::get<BigRational>(value_), BigRational(0)};
  }

  std::string spec() const {
    if (const auto* r = std::get_if<BigRational>(&value_)) {
      return "rat:" + r->get_num().get_str() + "/" + r->get_den().get_str();
    }
    if (const auto* q = std::get_if<QuadScalar>(&value_)) {
      return "quad:" + q->to_string();
    }
    const auto& s = std::get<DigitStream>(value_);
    std::string out = "dig:" + std::to_string(s.base) + ":";
    auto sym = [](int d) { return static_cast<char>(d < 10 ? '0' + d : 'a' + d - 10); };
    switch (s.rule) {
      case DigitRule::kPeriodic:
        out += "per:";
        for (int d : s.symbols) out += sym(d);
        break;
      case DigitRule::kThueMorse:
        out += "tm:";
        for (int d : s.symbols) out += sym(d);
        break;
      case DigitRule::kSeeded:
        out += "seed:" + std::to_string(s.seed) + ":";
        for (int d : s.symbols) out += sym(d);
        break;
    }
    return out;
  }

 private:
  std::variant<BigRational, QuadScalar, DigitStream> value_;
};

/// A point of R^d.
class TargetPoint {
 public:
  TargetPoint() = default;
  explicit TargetPoint(std::vector<Coordinate> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw InvalidInput("target point needs at least one coordinate");
  }

  std::size_t dim() const { return coords_.size(); }
  const Coordinate& operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<Coordinate>& coords() const { return coords_; }

  bool certified_rational() const {
    for (const auto& c : coords_) {
      if (!c.certified_rational()) return false;
    }
    return true;
  }

  struct Approximation {
    std::vector<BigRational> center;
    BigRational error;  // max-norm bound over non-symbolic coordinates
    std::vector<std::optional<QuadScalar>> exact;
  };

  /// ||x - center||_max <= error, with error <= base^-k for digit streams
  /// and 0 when every coordinate is carried exactly.
  Approximation approx(unsigned long k) const {
    Approximation out{{}, BigRational(0), {}};
    for (const auto& c : coords_) {
      auto [center, err] = c.approx(k);
      out.center.push_back(center);
      if (c.is_digit_stream() && !c.exact()) {
        out.error = std::max(out.error, err);
        out.exact.emplace_back(std::nullopt);
      } else {
        out.exact.push_back(c.exact());
      }
    }
    return out;
  }

  std::string spec() const {
    std::string out;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) out += ",";
      out += coords_[i].spec();
    }
    return out;
  }

 private:
  std::vector<Coordinate> coords_;
};

// ---------------------------------------------------------------------------
// Point-spec grammar

inline int parse_digit_char(char c, int base) {
  int v = -1;
  if (c >= '0' && c <= '9') v = c - '0';
  if (c >= 'a' && c <= 'z') v = c - 'a' + 10;
  if (v < 0 || v >= base) throw InvalidInput(std::string("bad digit '") + c + "'");
  return v;
}

/// rat:<p>/<q> | quad:(<a>+<b>*sqrt(<D>))/<c> | dig:<base>:per:<digits> |
/// dig:<base>:tm:<d0><d1> | dig:<base>:seed:<u64>[:<alphabet>]
/// Seeded streams default to the two-symbol alphabet {0, base-1}.
inline Coordinate parse_coordinate(const std::string& text) {
  auto starts = [&](const char* p) { return text.rfind(p, 0) == 0; };
  if (starts("rat:")) return Coordinate(parse_rational(text.substr(4)));
  if (starts("quad:")) return Coordinate(parse_quad(text.substr(5)));
  if (starts("dig:")) {
    std::vector<std::string> parts;
    std::size_t pos = 4;
    while (true) {
      const std::size_t next = text.find(':', pos);
      parts.push_back(text.substr(pos, next - pos));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (parts.size() < 3) throw InvalidInput("digit spec needs dig:<base>:<rule>:<arg>");
    DigitStream s;
    try {
      s.base = std::stoi(parts[0]);
    } catch (...) {
      throw InvalidInput("bad base in '" + text + "'");
    }
    if (s.base < 2 || s.base > 36) throw InvalidInput("digit base must be in [2, 36]");
    if (parts[1] == "per" || parts[1] == "tm") {
      s.rule = parts[1] == "per" ? DigitRule::kPeriodic : DigitRule::kThueMorse;
      for (char c : parts[2]) s.symbols.push_back(parse_digit_char(c, s.base));
      if (parts.size() != 3) throw InvalidInput("unexpected suffix in '" + text + "'");
    } else if (parts[1] == "seed") {
      s.rule = DigitRule::kSeeded;
      try {
        s.seed = std::stoull(parts[2]);
      } catch (...) {
        throw InvalidInput("bad seed in '" + text + "'");
      }
      if (parts.size() == 4) {
        for (char c : parts[3]) s.symbols.push_back(parse_digit_char(c, s.base));
      } else if (parts.size() == 3) {
        s.symbols = {0, s.base - 1};
      } else {
        throw InvalidInput("unexpected suffix in '" + text + "'");
      }
    } else {
      throw InvalidInput("unknown digit rule '" + parts[1] + "'");
    }
    return Coordinate(std::move(s));
  }
  throw InvalidInput("unknown coordinate spec '" + text + "'");
}

/// Comma-separated coordinate specs (commas inside parentheses are kept).
inline TargetPoint parse_point(const std::string& text) {
  std::vector<Coordinate> coords;
  int depth = 0;
  std::string cur;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      coords.push_back(parse_coordinate(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (cur.empty()) throw InvalidInput("empty point spec");
  coords.push_back(parse_coordinate(cur));
  return TargetPoint(std::move(coords));
}

// ---------------------------------------------------------------------------
// Certified comparisons

enum class Cmp { kLess, kEqual, kGreater };

struct CertifiedCmp {
  Cmp result;
  bool exact;                 // decided symbolically
  unsigned long precision;    // refinement index used when not exact
};

inline Cmp cmp_of(int s) { return s < 0 ? Cmp::kLess : (s > 0 ? Cmp::kGreater : Cmp::kEqual); }

/// Enclosure of q*x - p at precision k.
inline RationalInterval residual_enclosure(const Coordinate& x, const BigInt& q, const BigInt& p,
                                           unsigned long k) {
  return x.enclose(k) * BigRational(q) - BigRational(p);
}

/// Compares |q*x - p|^power with `bound`. Exact coordinates are decided
/// symbolically; digit streams by interval refinement up to `max_precision`
/// (PrecisionExhausted beyond it, which for an irrational stream means the
/// cap is too low rather than a tie).
inline CertifiedCmp compare_residual_power(const Coordinate& x, const BigInt& q, const BigInt& p,
                                           unsigned long power, const BigRational& bound,
                                           unsigned long max_precision = default_max_precision()) {
  if (auto e = x.exact()) {
    const QuadScalar v = (*e * QuadScalar(BigRational(q)) - QuadScalar(BigRational(p))).abs();
    return {cmp_of(sign(v.pow(power) - QuadScalar(bound))), true, 0};
  }
  for (unsigned long k = 32;; k = std::min(2 * k, max_precision)) {
    const RationalInterval r = residual_enclosure(x, q, p, k).abs().pow(power);
    if (r.hi() < bound) return {Cmp::kLess, false, k};
    if (r.lo() > bound) return {Cmp::kGreater, false, k};
    if (r.is_point()) return {Cmp::kEqual, false, k};
    if (k >= max_precision) break;
  }
  throw PrecisionExhausted("comparison undecided at precision cap " +
                               std::to_string(max_precision),
                           0);
}

inline bool residual_power_le(const Coordinate& x, const BigInt& q, const BigInt& p,
                              unsigned long power, const BigRational& bound) {
  return compare_residual_power(x, q, p, power, bound).result != Cmp::kGreater;
}

}  // namespace xda
