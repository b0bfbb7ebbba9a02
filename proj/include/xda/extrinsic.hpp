#pragma once

// Extrinsic approximation: rationals outside the set that still approximate
// its points at the Dirichlet rate, and the algebraic obstructions that stop
// this near rational lines and the unit circle.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xda/contfrac.hpp"
#include "xda/errors.hpp"
#include "xda/exact.hpp"
#include "xda/geometry.hpp"
#include "xda/ifs.hpp"
#include "xda/lattice.hpp"
#include "xda/target.hpp"

namespace xda {

class OnLine : public InvalidInput {
 public:
  explicit OnLine(const std::string& what) : InvalidInput(what) {}
};

class OnCircle : public InvalidInput {
 public:
  explicit OnCircle(const std::string& what) : InvalidInput(what) {}
};

/// Membership oracle on rational points; must be sound for OUT.
using Oracle = std::function<Verdict(const RationalVec&)>;

/// Exact Cantor oracle: anything outside [0, 1] is OUT.
inline Verdict cantor_oracle(const RationalVec& p) {
  if (p.size() != 1) throw InvalidInput("Cantor oracle is one-dimensional");
  if (sgn(p[0]) < 0 || p[0] > 1) return Verdict::kOut;
  return cantor_membership(p[0]) ? Verdict::kIn : Verdict::kOut;
}

inline Oracle ifs_oracle(const IFSystem& ifs, MembershipOptions opt = {}) {
  return [ifs, opt](const RationalVec& p) { return membership(ifs, to_vec(p), opt).verdict; };
}

// ---------------------------------------------------------------------------
// Scale profiles

struct ScaleBucket {
  BigInt lo;  // bucket [lo, hi)
  BigInt hi;
  std::optional<std::size_t> witness;  // index into the caller's witness list
  RationalInterval min_quality;
};

/// Buckets [10^k, 10^{k+1}) covering the witnesses' denominators, each with
/// the witness of smallest quality (compared by enclosure midpoints).
inline std::vector<ScaleBucket> scale_profile(const std::vector<std::pair<BigInt, RationalInterval>>& qs) {
  std::map<std::size_t, ScaleBucket> buckets;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    const std::size_t k = qs[i].first.get_str().size() - 1;
    auto [it, inserted] = buckets.try_emplace(k);
    ScaleBucket& b = it->second;
    if (inserted) {
      b.lo = ipow(10, k);
      b.hi = ipow(10, k + 1);
    }
    if (!b.witness || qs[i].second.midpoint() < b.min_quality.midpoint()) {
      b.witness = i;
      b.min_quality = qs[i].second;
    }
  }
  std::vector<ScaleBucket> out;
  if (buckets.empty()) return out;
  // Fill empty buckets between the extremes so the profile covers the range.
  for (std::size_t k = buckets.begin()->first; k <= buckets.rbegin()->first; ++k) {
    auto it = buckets.find(k);
    if (it != buckets.end()) {
      out.push_back(it->second);
    } else {
      out.push_back({ipow(10, k), ipow(10, k + 1), std::nullopt, RationalInterval()});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cantor semiconvergent search

struct CantorRow {
  std::size_t n = 0;
  BigInt a_n;
  BigInt b;
  BigInt p;
  BigInt q;
  bool out = false;
  RationalInterval quality;  // q^2 |x - p/q|
  bool within_bound = false; // certified quality <= bound
};

struct CantorNResult {
  std::size_t n = 0;
  std::vector<CantorRow> rows;
  std::optional<std::size_t> best;  // row index of the best OUT member
  bool all_intrinsic = false;       // no OUT member in the first window
  std::size_t window_used = 0;
};

struct CantorSearchResult {
  std::vector<CantorNResult> per_n;
  BigRational bound;  // (1 + window)^2
  std::size_t all_intrinsic_events = 0;
  std::size_t convergents_out = 0;  // convergents (b = a_n) landing outside K
  std::size_t convergents_in = 0;
  std::vector<ScaleBucket> profile;
};

/// Checks that x is a ternary digit stream over {0, 2} that is not known to
/// be rational.
inline void require_cantor_target(const Coordinate& x) {
  if (x.certified_rational()) throw RationalPoint("target is rational, not a point of K \\ Q");
  const DigitStream* s = x.digit_stream();
  if (!s || s->base != 3) throw InvalidInput("Cantor target must be a base-3 digit stream");
  for (int d : s->symbols) {
    if (d != 0 && d != 2) throw InvalidInput("Cantor target digits must be 0 or 2");
  }
}

/// For each n, the semiconvergents p_{n,b}/q_{n,b} with a_n <= b <= a_n + window,
/// classified by exact Cantor membership, with certified qualities.
inline CantorSearchResult extrinsic_search_cantor(const Coordinate& x, std::size_t n_lo,
                                                  std::size_t n_hi, std::size_t window) {
  require_cantor_target(x);
  if (n_lo < 1 || n_hi < n_lo) throw InvalidInput("need 1 <= n_lo <= n_hi");
  const CFExpansion cf = expand(x, n_hi);
  const TargetPoint tp({x});
  CantorSearchResult res;
  res.bound = BigRational((1 + static_cast<long>(window)) * (1 + static_cast<long>(window)));
  std::vector<std::pair<BigInt, RationalInterval>> profile_input;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    CantorNResult nr;
    nr.n = n;
    const BigInt& an = cf.partials[n - 1];
    std::size_t width = window;
    std::size_t next_b = 0;
    for (int attempt = 0; attempt < 3; ++attempt) {
      for (std::size_t k = next_b; k <= width; ++k) {
        const BigInt b = an + BigInt(static_cast<unsigned long>(k));
        const Semiconvergent sc = semiconvergent(cf, n, b);
        CantorRow row{n, an, b, sc.p, sc.q, false, {}, false};
        row.out = cantor_oracle({make_rational(sc.p, sc.q)}) == Verdict::kOut;
        row.quality = quality(tp, {sc.p}, sc.q);
        row.within_bound =
            compare_residual_power(x, sc.q, sc.p, 1, res.bound / BigRational(sc.q)).result != Cmp::kGreater;
        if (k == 0) (row.out ? res.convergents_out : res.convergents_in)++;
        if (row.out && (!nr.best || row.quality.midpoint() < nr.rows[*nr.best].quality.midpoint())) {
          nr.best = nr.rows.size();
        }
        nr.rows.push_back(std::move(row));
      }
      nr.window_used = width;
      if (nr.best) break;
      if (attempt == 0) {
        nr.all_intrinsic = true;
        ++res.all_intrinsic_events;
      }
      next_b = width + 1;
      width *= 2;
    }
    if (nr.best) {
      const CantorRow& r = nr.rows[*nr.best];
      profile_input.emplace_back(r.q, r.quality);
    }
    res.per_n.push_back(std::move(nr));
  }
  res.profile = scale_profile(profile_input);
  return res;
}

// ---------------------------------------------------------------------------
// General pipeline: good pair -> progression -> first OUT point in i = N..2N

struct ExtrinsicWitness {
  BigInt min_q0;
  GoodPair pair;
  std::size_t index = 0;  // i in r_i = r_0 + i r_inf
  ApproxVector r;
  RationalInterval quality;  // q^{1+1/d} ||x - p/q||
  bool within_progression_bound = false;      // ||x - p/q|| <= ((1+i)/q)^{1+1/d} certified
};

struct GeneralSearchResult {
  std::vector<ExtrinsicWitness> witnesses;
  std::vector<BigInt> window_exhausted;  // Q values with no OUT point
  std::size_t unknown_skipped = 0;
  std::vector<ScaleBucket> profile;
};

/// Every OUT witness at index i <= 2N has quality <= (1+2N)^{1+1/d}, since
/// the good-pair progression satisfies ||x - p_i/q_i|| <= ((1+i)/q_i)^{1+1/d}.
inline GeneralSearchResult extrinsic_search_general(const TargetPoint& x, const Oracle& oracle, std::size_t n,
                                                    const std::vector<BigInt>& qs,
                                                    const GoodPairOptions& opt = {}) {
  GeneralSearchResult res;
  std::vector<std::pair<BigInt, RationalInterval>> profile_input;
  for (const BigInt& q_min : qs) {
    const GoodPair g = good_pair_search(x, q_min, opt);
    bool found = false;
    for (std::size_t i = n; i <= 2 * n; ++i) {
      const ApproxVector r = progression_entry(g, BigInt(static_cast<unsigned long>(i)));
      const Verdict v = oracle(r.point());
      if (v == Verdict::kUnknown) ++res.unknown_skipped;
      if (v != Verdict::kOut) continue;
      ExtrinsicWitness w{q_min, g, i, r, quality(x, r.p, r.q), progression_bound_certify(x, r, i)};
      if (!w.within_progression_bound) throw InvariantViolation("progression point violates the good-approximation bound");
      profile_input.emplace_back(r.q, w.quality);
      res.witnesses.push_back(std::move(w));
      found = true;
      break;
    }
    if (!found) res.window_exhausted.push_back(q_min);
  }
  res.profile = scale_profile(profile_input);
  return res;
}

/// (1 + 2N)^{1 + 1/d} raised to the d-th power, i.e. the bound B with
/// quality^d <= B, so callers can compare exactly.
inline BigRational general_quality_bound_pow_d(std::size_t n, std::size_t d) {
  return BigRational(ipow(BigInt(static_cast<unsigned long>(1 + 2 * n)), d + 1));
}

// ---------------------------------------------------------------------------
// Rational line obstruction

struct LineObstruction {
  BigInt numerator;  // |n . p - m q| >= 1
  BigInt q;
  QuadScalar distance;     // |n . p - m q| / (q ||n||_2), exact
  QuadScalar lower_bound;  // 1 / (q ||n||_2)
};

inline std::pair<std::vector<BigInt>, BigInt> common_denominator(const RationalVec& pt) {
  BigInt q = 1;
  for (const auto& c : pt) q = lcm(q, c.get_den());
  std::vector<BigInt> p;
  for (const auto& c : pt) p.push_back(c.get_num() * (q / c.get_den()));
  return {p, q};
}

/// Distance from p/q to the line n . x = m (integer data, reduced to
/// primitive form) and the bound 1/(q ||n||_2) it always meets.
inline LineObstruction rational_segment_obstruction(std::vector<BigInt> normal, BigInt m, const RationalVec& pt) {
  if (normal.size() != pt.size()) throw InvalidInput("dimension mismatch");
  BigInt g = abs(m);
  for (const auto& v : normal) g = gcd(g, v);
  if (g == 0) throw InvalidInput("line normal must be nonzero");
  for (auto& v : normal) v /= g;
  m /= g;
  const auto [p, q] = common_denominator(pt);
  BigInt dot = -m * q;
  BigInt n2 = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    dot += normal[j] * p[j];
    n2 += normal[j] * normal[j];
  }
  if (dot == 0) throw OnLine("point lies on the line");
  LineObstruction out;
  out.numerator = abs(dot);
  out.q = q;
  // k / (q sqrt(n2)) = k sqrt(n2) / (q n2)
  out.distance = QuadScalar(BigRational(0), make_rational(out.numerator, q * n2), n2);
  out.lower_bound = QuadScalar(BigRational(0), make_rational(1, q * n2), n2);
  return out;
}

// ---------------------------------------------------------------------------
// Unit circle

struct CirclePoint {
  BigInt a;
  BigInt b;
  BigInt c;

  RationalVec point() const { return {make_rational(a, c), make_rational(b, c)}; }
  friend bool operator<(const CirclePoint& x, const CirclePoint& y) {
    return std::tie(x.c, x.a, x.b) < std::tie(y.c, y.a, y.b);
  }
  friend bool operator==(const CirclePoint& x, const CirclePoint& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
};

/// Every rational point of the unit circle with reduced denominator <= bound:
/// primitive triples (s^2 - t^2, 2st, s^2 + t^2) with coprime s > t >= 1 of
/// opposite parity, their swaps and signs, and the four axis points.
inline std::vector<CirclePoint> pythagorean_points(const BigInt& bound) {
  if (bound < 1) throw InvalidInput("height bound must be >= 1");
  std::set<CirclePoint> pts;
  for (int sa : {1, -1}) {
    pts.insert({BigInt(sa), 0, 1});
    pts.insert({0, BigInt(sa), 1});
  }
  for (BigInt s = 2; s * s + 1 <= bound; ++s) {
    for (BigInt t = 1; t < s; ++t) {
      const BigInt c = s * s + t * t;
      if (c > bound) break;
      if ((s - t) % 2 == 0 || gcd(s, t) != 1) continue;
      const BigInt x = s * s - t * t, y = 2 * s * t;
      for (int sx : {1, -1}) {
        for (int sy : {1, -1}) {
          pts.insert({BigInt(sx * x), BigInt(sy * y), c});
          pts.insert({BigInt(sx * y), BigInt(sy * x), c});
        }
      }
    }
  }
  return {pts.begin(), pts.end()};
}

struct CircleExclusion {
  BigInt numerator;     // | ||p||^2 - q^2 | >= 1
  BigInt q;
  QuadScalar bound;     // numerator / (q^2 (||p/q||_2 + 1))
  QuadScalar weak_bound;  // 1 / (q^2 (||p/q||_2 + 1))
  QuadScalar distance;  // | ||p/q||_2 - 1 |, exact
};

/// |r - 1| = |r^2 - 1| / (r + 1) with r = ||p/q||_2, so the bound is the
/// exact Euclidean distance to the circle.
inline CircleExclusion circle_exclusion(const RationalVec& pt) {
  if (pt.size() != 2) throw InvalidInput("circle_exclusion needs a planar point");
  const auto [p, q] = common_denominator(pt);
  const BigInt s = p[0] * p[0] + p[1] * p[1];
  if (s == q * q) throw OnCircle("point lies on the unit circle");
  CircleExclusion out;
  out.numerator = abs(BigInt(s - q * q));
  out.q = q;
  const QuadScalar root = QuadScalar::sqrt_of(s);  // ||p||_2
  const QuadScalar qq{BigRational(q)};
  // q^2 (||p||/q + 1) = q (||p|| + q)
  const QuadScalar den = qq * (root + qq);
  out.bound = QuadScalar(BigRational(out.numerator)) / den;
  out.weak_bound = QuadScalar(1) / den;
  out.distance = ((root - qq) / qq).abs();
  return out;
}

struct CensusHit {
  std::vector<BigInt> p;
  BigInt q;
  bool intrinsic = false;
  bool beyond_threshold = false;  // q^{c-1} > 3 (only for c > 1)
};

struct CensusResult {
  std::size_t intrinsic = 0;
  std::size_t extrinsic = 0;
  std::size_t extrinsic_beyond_threshold = 0;
  std::size_t intrinsic_from_pythagorean = 0;  // independent recount
  std::vector<CensusHit> hits;                 // all hits, by q
};

namespace detail {

inline bool exact_on_circle(const TargetPoint& x) {
  const auto a = x[0].exact(), b = x[1].exact();
  if (!a || !b) return false;
  try {
    const QuadScalar a2 = a->pow(2), b2 = b->pow(2);
    return (a2 + b2 - QuadScalar(1)).is_zero();
  } catch (const InvalidInput&) {
    return false;
  }
}

// |q x_j - p_j| < q^{-c}, with c = u/v: |q x_j - p_j|^v q^u < 1.
inline bool psi_hit(const TargetPoint& x, const std::vector<BigInt>& p, const BigInt& q, const BigRational& c) {
  const unsigned long u = c.get_num().get_ui(), v = c.get_den().get_ui();
  const BigRational bound = make_rational(1, ipow(q, u));
  for (std::size_t j = 0; j < x.dim(); ++j) {
    if (compare_residual_power(x[j], q, p[j], v, bound).result != Cmp::kLess) return false;
  }
  return true;
}

inline bool is_self(const TargetPoint& x, const std::vector<BigInt>& p, const BigInt& q) {
  for (std::size_t j = 0; j < x.dim(); ++j) {
    const auto e = x[j].exact();
    if (!e || !(*e == QuadScalar(make_rational(p[j], q)))) return false;
  }
  return true;
}

}  // namespace detail

/// Counts rationals p/q (reduced, q <= q_max, p/q != x) with
/// ||x - p/q||_max < q^{-(1+c)}, split into on-circle (intrinsic) and
/// off-circle (extrinsic). The sweep is exhaustive: the threshold is below
/// 1, so only floor(q x_j) and floor(q x_j) + 1 can qualify.
inline CensusResult psi_census(const TargetPoint& x, const BigRational& c, const BigInt& q_max) {
  if (x.dim() != 2) throw InvalidInput("census target must be planar");
  if (sgn(c) <= 0) throw InvalidInput("exponent c must be positive");
  if (!c.get_num().fits_ulong_p() || !c.get_den().fits_ulong_p()) throw InvalidInput("exponent too large");
  if (!detail::exact_on_circle(x)) throw InvalidInput("census target must lie exactly on the unit circle");
  CensusResult res;
  if (q_max < 1) return res;
  const bool has_threshold = c > 1;
  const unsigned long cu = c.get_num().get_ui(), cv = c.get_den().get_ui();
  for (BigInt q = 1; q <= q_max; ++q) {
    std::vector<BigInt> fl(2);
    for (std::size_t j = 0; j < 2; ++j) fl[j] = (*x[j].exact() * QuadScalar(BigRational(q))).floor();
    for (int d0 = 0; d0 <= 1; ++d0) {
      for (int d1 = 0; d1 <= 1; ++d1) {
        const std::vector<BigInt> p = {fl[0] + d0, fl[1] + d1};
        if (gcd(gcd(p[0], p[1]), q) != 1) continue;
        if (detail::is_self(x, p, q)) continue;
        if (!detail::psi_hit(x, p, q, c)) continue;
        CensusHit h{p, q, p[0] * p[0] + p[1] * p[1] == q * q, false};
        if (h.intrinsic) {
          ++res.intrinsic;
        } else {
          ++res.extrinsic;
          // q^{c-1} > 3  <=>  q^{u-v} > 3^v
          h.beyond_threshold = has_threshold && ipow(q, cu - cv) > ipow(3, cv);
          if (h.beyond_threshold) ++res.extrinsic_beyond_threshold;
          // Soundness: dist(p/q, circle) <= ||x - p/q||_2.
          const CircleExclusion ex = circle_exclusion({make_rational(p[0], q), make_rational(p[1], q)});
          RationalInterval d2(BigRational(0));
          for (std::size_t j = 0; j < 2; ++j) {
            const QuadScalar diff = *x[j].exact() - QuadScalar(make_rational(p[j], q));
            d2 = d2 + diff.pow(2).enclose(96);
          }
          if (ex.distance.pow(2).enclose(96).lo() > d2.hi()) {
            throw InvariantViolation("circle exclusion bound exceeds an actual distance");
          }
        }
        res.hits.push_back(std::move(h));
      }
    }
  }
  for (const CirclePoint& cp : pythagorean_points(q_max)) {
    const std::vector<BigInt> p = {cp.a, cp.b};
    if (detail::is_self(x, p, cp.c)) continue;
    if (detail::psi_hit(x, p, cp.c, c)) ++res.intrinsic_from_pythagorean;
  }
  return res;
}

}  // namespace xda
