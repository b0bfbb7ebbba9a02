#pragma once

// Arithmetic and C-roughly arithmetic progressions of rational points.
//
// Points x_0..x_N on a line with increment v form a C-RAP when every
// c_ij = (x_j - x_i)/v satisfies (j-i)/C <= c_ij <= C(j-i). Writing
// x_i = x_0 + t_i u for a fixed direction u and v = s u, a valid s exists iff
// all r_ij = (t_j - t_i)/(j - i) share one sign and max|r|/C <= C min|r|.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "xda/errors.hpp"
#include "xda/exact.hpp"
#include "xda/geometry.hpp"
#include "xda/parallel.hpp"

namespace xda {

struct RAPCertificate {
  std::vector<RationalVec> points;
  RationalVec increment;
  BigRational C;
  // ratios[i][j - i - 1] = c_ij for i < j
  std::vector<std::vector<BigRational>> ratios;

  std::size_t length() const { return points.size(); }
};

enum class RapStatus { kCertified, kNotCollinear, kRatioFailure, kDegenerate };

inline const char* to_string(RapStatus s) {
  switch (s) {
    case RapStatus::kCertified: return "certified";
    case RapStatus::kNotCollinear: return "not-collinear";
    case RapStatus::kRatioFailure: return "ratio-failure";
    case RapStatus::kDegenerate: return "degenerate";
  }
  return "?";
}

struct RapCheck {
  RapStatus status = RapStatus::kDegenerate;
  std::optional<RAPCertificate> certificate;
};

namespace detail {

// Index of a nonzero coordinate of u, or npos.
inline std::size_t pivot(const RationalVec& u) {
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (sgn(u[j]) != 0) return j;
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace detail

/// Direct check of the ratio bounds for a given increment; fills `ratios`.
/// Returns false if some x_j - x_i is not a multiple of v or a bound fails.
inline bool verify_rap(const std::vector<RationalVec>& pts, const RationalVec& v,
                       const BigRational& C, std::vector<std::vector<BigRational>>* ratios = nullptr) {
  if (C < 1) throw InvalidInput("RAP constant C must be >= 1");
  const std::size_t piv = detail::pivot(v);
  if (piv == static_cast<std::size_t>(-1)) return pts.size() <= 1;
  if (ratios) ratios->assign(pts.size(), {});
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const BigRational c = (pts[j][piv] - pts[i][piv]) / v[piv];
      for (std::size_t k = 0; k < v.size(); ++k) {
        if (pts[j][k] - pts[i][k] != c * v[k]) return false;
      }
      const BigRational gap(static_cast<long>(j - i));
      if (c < gap / C || c > C * gap) return false;
      if (ratios) (*ratios)[i].push_back(c);
    }
  }
  return true;
}

inline bool verify_rap(const RAPCertificate& cert) {
  return verify_rap(cert.points, cert.increment, cert.C);
}

/// Searches the one-parameter family of increments v = s u. Tries
/// v = x_1 - x_0 first, then the midpoint of the feasible range of s.
inline RapCheck rap_check(const std::vector<RationalVec>& pts, const BigRational& C) {
  if (pts.size() < 2) throw InvalidInput("rap_check needs at least two points");
  if (C < 1) throw InvalidInput("RAP constant C must be >= 1");
  if (!collinear(pts)) return {RapStatus::kNotCollinear, std::nullopt};
  const std::size_t d = pts[0].size();
  RationalVec u(d);
  for (std::size_t j = 0; j < d; ++j) u[j] = pts[1][j] - pts[0][j];
  const std::size_t piv = detail::pivot(u);
  if (piv == static_cast<std::size_t>(-1)) return {RapStatus::kDegenerate, std::nullopt};

  std::vector<BigRational> t(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) t[i] = (pts[i][piv] - pts[0][piv]) / u[piv];
  BigRational max_abs = 0, min_abs = 0;
  int dir = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const BigRational r = (t[j] - t[i]) / BigRational(static_cast<long>(j - i));
      const int s = sgn(r);
      if (s == 0 || (dir != 0 && s != dir)) return {RapStatus::kRatioFailure, std::nullopt};
      dir = s;
      const BigRational a = abs(r);
      if (i == 0 && j == 1) {
        max_abs = min_abs = a;
      } else {
        max_abs = std::max(max_abs, a);
        min_abs = std::min(min_abs, a);
      }
    }
  }
  const BigRational lo = max_abs / C;
  const BigRational hi = C * min_abs;
  if (lo > hi) return {RapStatus::kRatioFailure, std::nullopt};
  // t_1 - t_0 = 1, so s = 1 is v = x_1 - x_0.
  BigRational s = 1;
  if (dir < 0 || s < lo || s > hi) s = BigRational(dir) * (lo + hi) / 2;
  RAPCertificate cert{pts, {}, C, {}};
  cert.increment.resize(d);
  for (std::size_t j = 0; j < d; ++j) cert.increment[j] = s * u[j];
  if (!verify_rap(cert.points, cert.increment, C, &cert.ratios)) {
    throw InvariantViolation("rap_check produced an increment that fails re-verification");
  }
  return {RapStatus::kCertified, std::move(cert)};
}

// ---------------------------------------------------------------------------
// Projectivized progressions

struct ProgressionFamily {
  std::vector<RationalVec> points;  // p_i/q_i for i = N..2N
  RAPCertificate certificate;
};

/// Points p_i/q_i, i = N..2N, of r_i = r_0 + i r_inf with the C = 2
/// certificate whose increment is v = (q_0 p_inf - q_inf p_0)/(q_N q_2N).
inline ProgressionFamily progression_family(const std::vector<BigInt>& p0, const BigInt& q0,
                                  const std::vector<BigInt>& pinf, const BigInt& qinf,
                                  std::size_t n) {
  if (q0 < 1 || qinf < 1) throw InvalidInput("progression_family needs q0 >= 1 and qInf >= 1");
  if (p0.size() != pinf.size()) throw InvalidInput("dimension mismatch");
  const std::size_t d = p0.size();
  ProgressionFamily out;
  for (std::size_t i = n; i <= 2 * n; ++i) {
    const BigInt k(static_cast<unsigned long>(i));
    const BigInt q = q0 + k * qinf;
    RationalVec pt(d);
    for (std::size_t j = 0; j < d; ++j) pt[j] = make_rational(p0[j] + k * pinf[j], q);
    out.points.push_back(std::move(pt));
  }
  const BigInt k1(static_cast<unsigned long>(n)), k2(static_cast<unsigned long>(2 * n));
  const BigInt den = (q0 + k1 * qinf) * (q0 + k2 * qinf);
  RationalVec v(d);
  bool zero = true;
  for (std::size_t j = 0; j < d; ++j) {
    v[j] = make_rational(q0 * pinf[j] - qinf * p0[j], den);
    if (sgn(v[j]) != 0) zero = false;
  }
  if (zero) throw InvalidInput("r0 and rInf project to the same point");
  out.certificate = {out.points, v, BigRational(2), {}};
  if (!verify_rap(out.points, v, 2, &out.certificate.ratios)) {
    throw InvariantViolation("projectivized progression failed the C = 2 certificate");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normalization and Hausdorff distance to [0, 1]

/// Affine image of the certificate's points on [0, 1]: t_i rescaled so that
/// the first point maps to 0 and the last to 1.
inline std::vector<BigRational> normalize(const RAPCertificate& cert) {
  const auto& pts = cert.points;
  if (pts.size() < 2) throw InvalidInput("normalize needs at least two points");
  const std::size_t piv = detail::pivot(cert.increment);
  const BigRational span = pts.back()[piv] - pts.front()[piv];
  std::vector<BigRational> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back((p[piv] - pts.front()[piv]) / span);
  return out;
}

/// Hausdorff distance between a finite subset of [0, 1] containing 0 and 1
/// and [0, 1] itself: half the largest gap.
inline BigRational hausdorff_to_unit(std::vector<BigRational> pts) {
  if (pts.empty()) throw InvalidInput("empty point set");
  std::sort(pts.begin(), pts.end());
  if (pts.front() != 0 || pts.back() != 1) throw InvalidInput("normalized set must span [0, 1]");
  BigRational gap = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) gap = std::max(gap, BigRational(pts[i] - pts[i - 1]));
  return gap / 2;
}

/// C^2 / (2N) for a progression with N + 1 points.
inline BigRational hausdorff_bound(const BigRational& C, std::size_t points) {
  if (points < 2) throw InvalidInput("bound needs at least two points");
  return C * C / BigRational(static_cast<long>(2 * (points - 1)));
}

// ---------------------------------------------------------------------------
// Searches in finite sets

struct APResult {
  std::vector<RationalVec> points;  // the progression found
  std::size_t length = 0;
  std::size_t count_at_max = 0;     // progressions of maximal length (maximal starts)
};

/// Longest exact AP in a finite set, exhaustive over (start, increment)
/// pairs; starts that extend backwards are skipped. First found wins ties.
inline APResult longest_ap(std::vector<RationalVec> pts, std::size_t max_len = 0) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::set<RationalVec> members(pts.begin(), pts.end());
  APResult best;
  if (!pts.empty()) {
    best.points = {pts[0]};
    best.length = 1;
    best.count_at_max = pts.size();
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      RationalVec step(pts[i].size());
      for (std::size_t k = 0; k < step.size(); ++k) step[k] = pts[j][k] - pts[i][k];
      RationalVec prev(step.size());
      for (std::size_t k = 0; k < step.size(); ++k) prev[k] = pts[i][k] - step[k];
      if (members.count(prev)) continue;
      std::vector<RationalVec> seq = {pts[i], pts[j]};
      while (max_len == 0 || seq.size() < max_len) {
        RationalVec next(step.size());
        for (std::size_t k = 0; k < step.size(); ++k) next[k] = seq.back()[k] + step[k];
        if (!members.count(next)) break;
        seq.push_back(std::move(next));
      }
      if (seq.size() > best.length) {
        best.length = seq.size();
        best.points = seq;
        best.count_at_max = 1;
      } else if (seq.size() == best.length) {
        ++best.count_at_max;
      }
    }
  }
  return best;
}

struct RapSearchOptions {
  BigRational C{2};
  std::size_t max_len = 64;
  std::uint64_t budget = 200000000;  // DFS nodes
  unsigned workers = 1;
};

struct RapSearchResult {
  std::optional<RAPCertificate> certificate;
  std::size_t length = 0;
  bool exhausted = false;  // the whole space was searched: length is the maximum
  bool capped = false;     // max_len was reached
  std::uint64_t nodes = 0;
};

namespace detail {

// Small exact fractions for the integer fast path; no reduction needed since
// numerators stay below 2^50 and denominators below 2^16.
struct Frac {
  __int128 n = 0;
  __int128 d = 1;
  friend bool operator<(const Frac& a, const Frac& b) { return a.n * b.d < b.n * a.d; }
  friend bool operator<=(const Frac& a, const Frac& b) { return a.n * b.d <= b.n * a.d; }
};

struct RapDfs {
  const std::vector<std::vector<__int128>>* cand;  // per anchor: candidate params
  __int128 cn = 2, cd = 1;                          // C = cn/cd
  std::size_t max_len = 0;
  std::atomic<std::uint64_t>* nodes = nullptr;
  std::uint64_t budget = 0;
  bool cut = false;
  std::vector<__int128> seq;
  std::vector<__int128> best;

  // s must satisfy lo <= s <= hi where lo = max diff/(C gap), hi = min C diff/gap.
  void run(const std::vector<__int128>& c, std::size_t from, Frac lo, Frac hi) {
    if (seq.size() > best.size()) best = seq;
    if (seq.size() >= max_len || cut) return;
    if (nodes->fetch_add(1, std::memory_order_relaxed) >= budget) {
      cut = true;
      return;
    }
    const __int128 last = seq.back();
    for (std::size_t k = from; k < c.size(); ++k) {
      const __int128 step = c[k] - last;
      // step <= C s <= C hi, else no later candidate can fit either.
      if (step * cd * hi.d > cn * hi.n) break;
      Frac nlo = lo, nhi = hi;
      bool ok = true;
      const std::size_t m = seq.size();
      for (std::size_t i = 0; i < m && ok; ++i) {
        const __int128 diff = c[k] - seq[i];
        const __int128 gap = static_cast<__int128>(m - i);
        const Frac l{diff * cd, cn * gap};
        const Frac h{diff * cn, cd * gap};
        if (nlo < l) nlo = l;
        if (h < nhi) nhi = h;
        ok = nlo <= nhi;
      }
      if (!ok) continue;
      seq.push_back(c[k]);
      run(c, k + 1, nlo, nhi);
      seq.pop_back();
      if (cut) return;
    }
  }
};

}  // namespace detail

/// Longest C-RAP in a finite set of rational points. Each anchor pair
/// (a, b), a < b, fixes the line and the direction; the sequence is extended
/// depth-first through later points of that line while some increment stays
/// feasible (feasibility is closed under taking prefixes, so pruning is
/// exact). Collinear points are compared through integer parameters along
/// the line when they fit 64 bits.
inline RapSearchResult longest_rap(std::vector<RationalVec> pts, const RapSearchOptions& opt = {}) {
  if (opt.C < 1) throw InvalidInput("RAP constant C must be >= 1");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  RapSearchResult res;
  if (pts.size() < 2) {
    res.exhausted = true;
    res.length = pts.size();
    if (!pts.empty()) res.certificate = RAPCertificate{pts, RationalVec(pts[0].size()), opt.C, {}};
    return res;
  }
  if (!opt.C.get_num().fits_slong_p() || !opt.C.get_den().fits_slong_p()) {
    throw InvalidInput("RAP constant too large");
  }

  struct Anchor {
    std::vector<std::size_t> members;  // indices on the line, ascending along it
    std::vector<__int128> params;      // integer parameters, same order
  };
  const std::size_t n = pts.size();
  const std::size_t d = pts[0].size();
  std::vector<std::pair<std::size_t, std::size_t>> anchors;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) anchors.emplace_back(a, b);
  }

  // Line parameters t = (x - a)[piv] / (b - a)[piv], scaled to integers.
  auto build = [&](std::size_t a, std::size_t b) -> std::optional<Anchor> {
    RationalVec u(d);
    for (std::size_t k = 0; k < d; ++k) u[k] = pts[b][k] - pts[a][k];
    const std::size_t piv = detail::pivot(u);
    std::vector<std::pair<BigRational, std::size_t>> on;
    for (std::size_t c = b; c < n; ++c) {
      if (d > 1 && !collinear({pts[a], pts[b], pts[c]})) continue;
      const BigRational t = (pts[c][piv] - pts[a][piv]) / u[piv];
      if (t >= 1) on.emplace_back(t, c);
    }
    std::sort(on.begin(), on.end());
    BigInt den = 1;
    for (const auto& [t, c] : on) den = lcm(den, t.get_den());
    Anchor out;
    const BigInt limit = ipow(2, 40);
    for (const auto& [t, c] : on) {
      const BigInt v = t.get_num() * (den / t.get_den());
      if (abs(v) >= limit) return std::nullopt;
      out.members.push_back(c);
      out.params.push_back(static_cast<__int128>(v.get_si()));
    }
    out.params.insert(out.params.begin(), 0);
    out.members.insert(out.members.begin(), a);
    return out;
  };

  std::atomic<std::uint64_t> nodes{0};
  std::vector<std::vector<std::size_t>> best_per_anchor(anchors.size());
  std::vector<char> cut_per_anchor(anchors.size(), 0);
  const __int128 cn = opt.C.get_num().get_si();
  const __int128 cd = opt.C.get_den().get_si();

  parallel_chunks(anchors.size(), opt.workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t ai = begin; ai < end; ++ai) {
      const auto [a, b] = anchors[ai];
      const std::optional<Anchor> anc = build(a, b);
      if (!anc) throw InvalidInput("point coordinates too large for the RAP search");
      detail::RapDfs dfs;
      dfs.cn = cn;
      dfs.cd = cd;
      dfs.max_len = opt.max_len;
      dfs.nodes = &nodes;
      dfs.budget = opt.budget;
      // Start from the anchor pair: s in [diff/C, C diff].
      const __int128 diff = anc->params[1] - anc->params[0];
      dfs.seq = {anc->params[0], anc->params[1]};
      dfs.run(anc->params, 2, detail::Frac{diff * cd, cn}, detail::Frac{diff * cn, cd});
      std::vector<std::size_t> idx;
      for (__int128 v : dfs.best) {
        const auto it = std::find(anc->params.begin(), anc->params.end(), v);
        idx.push_back(anc->members[static_cast<std::size_t>(it - anc->params.begin())]);
      }
      best_per_anchor[ai] = std::move(idx);
      cut_per_anchor[ai] = dfs.cut ? 1 : 0;
    }
  });

  res.nodes = nodes.load();
  res.exhausted = std::none_of(cut_per_anchor.begin(), cut_per_anchor.end(), [](char c) { return c; });
  const std::vector<std::size_t>* best = nullptr;
  for (const auto& b : best_per_anchor) {
    if (!best || b.size() > best->size()) best = &b;
  }
  std::vector<RationalVec> seq;
  for (std::size_t i : *best) seq.push_back(pts[i]);
  res.length = seq.size();
  res.capped = res.length >= opt.max_len;
  const RapCheck chk = rap_check(seq, opt.C);
  if (chk.status != RapStatus::kCertified) {
    throw InvariantViolation("longest_rap result failed re-certification");
  }
  res.certificate = chk.certificate;
  return res;
}

}  // namespace xda
