#pragma once

// Good pairs of simultaneous approximations and the progressions they span.
//
// For a height H, an integer vector r = (p, q) survives when q <= H and
// ||q x - p||_max <= H^{-1/d}; two independent survivors are a good pair with
// q_0 = max q. The scan over q is prefiltered in 64-bit fixed point with a
// slack that never drops a true survivor, then every candidate is certified
// exactly (or by interval refinement for digit streams).

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "xda/errors.hpp"
#include "xda/exact.hpp"
#include "xda/geometry.hpp"
#include "xda/parallel.hpp"
#include "xda/target.hpp"

namespace xda {

struct ApproxVector {
  std::vector<BigInt> p;
  BigInt q;

  bool is_zero() const {
    if (q != 0) return false;
    for (const auto& v : p) {
      if (v != 0) return false;
    }
    return true;
  }

  /// p/q as a rational point; requires q != 0.
  RationalVec point() const {
    if (q == 0) throw InvalidInput("projectivized point needs q != 0");
    RationalVec out;
    out.reserve(p.size());
    for (const auto& v : p) out.push_back(make_rational(v, q));
    return out;
  }

  std::string to_string() const {
    std::string s = "(";
    for (const auto& v : p) s += v.get_str() + ", ";
    return s + q.get_str() + ")";
  }

  friend bool operator==(const ApproxVector& a, const ApproxVector& b) {
    return a.q == b.q && a.p == b.p;
  }
};

/// Linear independence of (p, q) vectors over Q: some 2x2 minor is nonzero.
inline bool independent(const ApproxVector& a, const ApproxVector& b) {
  std::vector<BigInt> u = a.p, v = b.p;
  u.push_back(a.q);
  v.push_back(b.q);
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = i + 1; j < u.size(); ++j) {
      if (u[i] * v[j] != u[j] * v[i]) return true;
    }
  }
  return false;
}

/// One certified inequality |q x_j - p_j|^d <= bound.
struct InequalityRecord {
  std::string vector;  // "r0" or "rInf"
  std::size_t coord = 0;
  BigRational bound;
  bool exact = false;
  unsigned long precision = 0;
};

struct GoodPair {
  ApproxVector r0;
  ApproxVector rinf;
  std::size_t d = 0;
  BigInt height;  // search height at which the pair was found
  std::vector<InequalityRecord> witness;
};

/// Nearest integer to q*x; exact ties go to the even neighbour.
inline BigInt nearest_integer(const Coordinate& x, const BigInt& q,
                              unsigned long max_precision = default_max_precision()) {
  if (auto e = x.exact()) {
    const QuadScalar v = *e * QuadScalar(BigRational(q));
    const BigInt f = v.floor();
    const int s = sign(v - QuadScalar(BigRational(f)) - QuadScalar(make_rational(1, 2)));
    if (s < 0) return f;
    if (s > 0) return f + 1;
    return f % 2 == 0 ? f : BigInt(f + 1);
  }
  const BigRational half(1, 2);
  for (unsigned long k = 32;; k = std::min(2 * k, max_precision)) {
    const RationalInterval r = x.enclose(k) * BigRational(q);
    const BigInt a = floor_of(r.lo() + half);
    if (a == floor_of(r.hi() + half)) return a;
    if (k >= max_precision) break;
  }
  throw PrecisionExhausted("nearest integer undecided at precision cap", 0);
}

/// Checks every coordinate of r against |q x_j - p_j|^d <= bound, appending
/// the certificates; false as soon as one fails.
inline bool certify_residuals(const TargetPoint& x, const ApproxVector& r, const BigRational& bound,
                              const std::string& name, std::vector<InequalityRecord>* out) {
  const auto d = static_cast<unsigned long>(x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j) {
    const CertifiedCmp c = compare_residual_power(x[j], r.q, r.p[j], d, bound);
    if (c.result == Cmp::kGreater) return false;
    if (out) out->push_back({name, j, bound, c.exact, c.precision});
  }
  return true;
}

/// Independent exact re-verification of the good-pair conditions:
/// independence, 0 <= q_inf <= q_0, ||q_i x - p_i|| <= q_0^{-1/d}.
inline bool verify_good_pair(const TargetPoint& x, const GoodPair& g) {
  if (g.r0.p.size() != x.dim() || g.rinf.p.size() != x.dim()) return false;
  if (g.r0.q < 1 || g.rinf.q < 0 || g.rinf.q > g.r0.q) return false;
  if (!independent(g.r0, g.rinf)) return false;
  const BigRational bound = make_rational(1, g.r0.q);
  return certify_residuals(x, g.r0, bound, "r0", nullptr) &&
         certify_residuals(x, g.rinf, bound, "rInf", nullptr);
}

namespace detail {

// x * 2^64 lies in [whole * 2^64 + frac, whole * 2^64 + frac + 2).
struct Fixed64 {
  BigInt whole;
  std::uint64_t frac = 0;
};

inline Fixed64 fixed64(const Coordinate& x) {
  const BigInt scale = ipow(2, 64);
  for (unsigned long k = 64;; k *= 2) {
    const RationalInterval e = x.enclose(k);
    if (e.width() * BigRational(scale) <= 1) {
      const BigInt v = floor_of(e.lo() * BigRational(scale));
      Fixed64 f;
      mpz_fdiv_q_2exp(f.whole.get_mpz_t(), v.get_mpz_t(), 64);
      BigInt rem;
      mpz_fdiv_r_2exp(rem.get_mpz_t(), v.get_mpz_t(), 64);
      mpz_export(&f.frac, nullptr, -1, sizeof(f.frac), 0, 0, rem.get_mpz_t());
      return f;
    }
    if (k > (1UL << 20)) throw PrecisionExhausted("cannot reach 64-bit precision", 0);
  }
}

using u128 = unsigned __int128;

// ceil(2^64 * H^{-1/d}), an upper bound of the survival threshold in units of
// 2^-64, saturated at 2^64.
inline u128 threshold64(const BigInt& height, unsigned long d) {
  const RationalInterval root = enclose_root(height, d, 64);
  const BigInt t = ceil_of(BigRational(ipow(2, 64)) / root.lo());
  if (t >= ipow(2, 64)) return u128(1) << 64;
  return static_cast<u128>(t.get_ui()) | (static_cast<u128>(BigInt(t >> 64).get_ui()) << 64);
}

}  // namespace detail

/// All certified survivors at height H, ordered by q.
inline std::vector<ApproxVector> survivors(const TargetPoint& x, const BigInt& height,
                                           unsigned workers = 1) {
  if (!height.fits_ulong_p()) throw InvalidInput("height too large for enumeration");
  const std::size_t d = x.dim();
  std::vector<detail::Fixed64> fx;
  fx.reserve(d);
  for (const auto& c : x.coords()) fx.push_back(detail::fixed64(c));
  const detail::u128 thr = detail::threshold64(height, d);
  const std::uint64_t hmax = height.get_ui();
  const BigRational bound = make_rational(1, height);

  std::vector<std::vector<ApproxVector>> parts(std::max(1u, workers));
  parallel_chunks(hmax, workers, [&](std::size_t w, std::size_t begin, std::size_t end) {
    for (std::uint64_t q = begin + 1; q <= end; ++q) {
      const detail::u128 slack = thr + 2 * static_cast<detail::u128>(q) + 2;
      bool candidate = true;
      for (std::size_t j = 0; j < d && candidate; ++j) {
        const std::uint64_t t = q * fx[j].frac;  // wraps mod 2^64 by design
        const std::uint64_t dist = std::min(t, static_cast<std::uint64_t>(0) - t);
        candidate = dist <= slack;
      }
      if (!candidate) continue;
      ApproxVector r;
      r.q = BigInt(static_cast<unsigned long>(q));
      for (std::size_t j = 0; j < d; ++j) r.p.push_back(nearest_integer(x[j], r.q));
      if (certify_residuals(x, r, bound, "", nullptr)) parts[w].push_back(std::move(r));
    }
  });
  std::vector<ApproxVector> out;
  for (auto& p : parts) {
    for (auto& r : p) out.push_back(std::move(r));
  }
  return out;
}

struct GoodPairOptions {
  BigRational rho{3, 2};
  BigInt cap{1000000};
  unsigned workers = 1;
};

/// Scans heights H = Q, ceil(rho Q), ... <= cap. At each height r0 is the
/// survivor of largest q (it must have q >= Q); rInf is the survivor at
/// height q0 (q <= q0, residual <= q0^{-1/d}) of largest q independent of r0.
inline GoodPair good_pair_search(const TargetPoint& x, const BigInt& min_q0,
                                 const GoodPairOptions& opt = {}) {
  if (min_q0 < 1) throw InvalidInput("good_pair_search needs Q >= 1");
  if (opt.rho <= 1) throw InvalidInput("height growth factor must exceed 1");
  if (x.certified_rational()) {
    throw RationalPoint("target is rational: no infinite family of good pairs");
  }
  for (BigInt h = min_q0; h <= opt.cap;) {
    const std::vector<ApproxVector> s = survivors(x, h, opt.workers);
    if (!s.empty() && s.back().q >= min_q0) {
      const ApproxVector& r0 = s.back();
      const std::vector<ApproxVector> partners = survivors(x, r0.q, opt.workers);
      for (auto it = partners.rbegin(); it != partners.rend(); ++it) {
        if (!independent(r0, *it)) continue;
        GoodPair g{r0, *it, x.dim(), h, {}};
        const BigRational bound = make_rational(1, r0.q);
        if (!certify_residuals(x, g.r0, bound, "r0", &g.witness) ||
            !certify_residuals(x, g.rinf, bound, "rInf", &g.witness)) {
          throw InvariantViolation("survivor failed re-certification against q0^{-1/d}");
        }
        return g;
      }
    }
    const BigInt next = ceil_of(opt.rho * BigRational(h));
    h = next > h ? next : BigInt(h + 1);
  }
  throw HeightCapExceeded("no good pair with q0 >= " + min_q0.get_str() + " below height " +
                          opt.cap.get_str());
}

// ---------------------------------------------------------------------------
// Progressions r_i = r_0 + i r_inf

inline ApproxVector progression_entry(const GoodPair& g, const BigInt& i) {
  ApproxVector r;
  r.q = g.r0.q + i * g.rinf.q;
  for (std::size_t j = 0; j < g.r0.p.size(); ++j) r.p.push_back(g.r0.p[j] + i * g.rinf.p[j]);
  return r;
}

struct Progression {
  GoodPair pair;
  std::vector<ApproxVector> entries;  // entries[i] = r_i
};

inline Progression make_progression(const GoodPair& g, std::size_t imax) {
  Progression out{g, {}};
  out.entries.reserve(imax + 1);
  for (std::size_t i = 0; i <= imax; ++i) {
    out.entries.push_back(progression_entry(g, BigInt(static_cast<unsigned long>(i))));
  }
  return out;
}

/// ||x - p_i/q_i||_max <= ((1+i)/q_i)^{1+1/d}, checked per coordinate as
/// |q_i x_j - p_j|^d <= (1+i)^{d+1} / q_i.
inline bool progression_bound_certify(const TargetPoint& x, const ApproxVector& r, std::size_t i) {
  if (r.q < 1) throw InvalidInput("progression_bound_certify needs q_i >= 1");
  const auto d = static_cast<unsigned long>(x.dim());
  const BigRational bound =
      make_rational(ipow(BigInt(static_cast<unsigned long>(i + 1)), d + 1), r.q);
  return certify_residuals(x, r, bound, "r_i", nullptr);
}

/// Enclosure of q^{1+1/d} ||x - p/q||_max = q^{1/d} max_j |q x_j - p_j|.
inline RationalInterval quality(const TargetPoint& x, const std::vector<BigInt>& p, const BigInt& q,
                                unsigned long bits = 64) {
  if (q < 1) throw InvalidInput("quality needs q >= 1");
  if (p.size() != x.dim()) throw InvalidInput("dimension mismatch");
  const auto d = static_cast<unsigned long>(x.dim());
  RationalInterval worst(BigRational(0));
  for (std::size_t j = 0; j < x.dim(); ++j) {
    RationalInterval r;
    if (auto e = x[j].exact()) {
      const QuadScalar v = (*e * QuadScalar(BigRational(q)) - QuadScalar(BigRational(p[j]))).abs();
      r = v.enclose(bits + q.get_str().size() * 4);
    } else {
      // base^-k <= 2^-bits once k >= bits, whatever the base.
      r = residual_enclosure(x[j], q, p[j], bits + q.get_str().size() * 4).abs();
    }
    worst = RationalInterval(std::max(worst.lo(), r.lo()), std::max(worst.hi(), r.hi()));
  }
  return enclose_root(q, d, bits) * worst;
}

}  // namespace xda
