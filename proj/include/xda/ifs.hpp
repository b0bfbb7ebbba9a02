#pragma once

// Iterated function systems of exact similarities with a polytope open set.
// Cylinders u_w(cl W) give outer approximations of the attractor at every
// depth; membership follows exact preimage orbits.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "xda/errors.hpp"
#include "xda/exact.hpp"
#include "xda/geometry.hpp"
#include "xda/parallel.hpp"

namespace xda {

using Word = std::vector<int>;  // 0-based letters

/// Letters printed 1-based; joined with '.' when the alphabet exceeds 9.
inline std::string word_string(const Word& w, std::size_t alphabet) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (alphabet > 9 && i) s += '.';
    s += std::to_string(w[i] + 1);
  }
  return s;
}

inline Word parse_word(const std::string& s) {
  Word w;
  if (s.find('.') != std::string::npos) {
    std::size_t start = 0;
    while (start <= s.size()) {
      const std::size_t dot = std::min(s.find('.', start), s.size());
      w.push_back(std::stoi(s.substr(start, dot - start)) - 1);
      start = dot + 1;
    }
    return w;
  }
  for (char c : s) {
    if (c < '1' || c > '9') throw InvalidInput("bad word '" + s + "'");
    w.push_back(c - '1');
  }
  return w;
}

class IFSystem {
 public:
  IFSystem() = default;
  IFSystem(std::string name, std::vector<Similarity> maps, Polytope open_set)
      : name_(std::move(name)), maps_(std::move(maps)), open_set_(std::move(open_set)) {
    if (maps_.empty()) throw InvalidInput("IFS needs at least one map");
    for (const auto& u : maps_) {
      if (u.dim() != open_set_.dim) throw InvalidInput("map and open set dimensions differ");
      if (sgn(u.ratio) <= 0 || u.ratio >= 1) throw InvalidInput("contraction ratio must be in (0, 1)");
    }
    field_ = 0;
    auto note = [&](const QuadScalar& s) {
      if (s.is_rational()) return;
      if (field_ != 0 && field_ != s.radicand()) throw InvalidInput("IFS mixes radicals");
      field_ = s.radicand();
    };
    for (const auto& u : maps_) {
      for (const auto& row : u.orth) {
        for (const auto& v : row) note(v);
      }
      for (const auto& v : u.translation) note(v);
    }
    for (const auto& v : open_set_.vertices) {
      for (const auto& c : v) note(c);
    }
  }

  const std::string& name() const { return name_; }
  std::size_t dim() const { return open_set_.dim; }
  std::size_t size() const { return maps_.size(); }
  const std::vector<Similarity>& maps() const { return maps_; }
  const Similarity& map(std::size_t a) const { return maps_[a]; }
  /// Closure of the open set W.
  const Polytope& open_set() const { return open_set_; }
  /// Radicand D of the coefficient field Q(sqrt D); 0 for Q.
  long field() const { return field_; }

  BigRational min_ratio() const {
    BigRational m = maps_[0].ratio;
    for (const auto& u : maps_) m = std::min(m, u.ratio);
    return m;
  }
  BigRational max_ratio() const {
    BigRational m = maps_[0].ratio;
    for (const auto& u : maps_) m = std::max(m, u.ratio);
    return m;
  }

  /// Throws FieldMismatch unless every coordinate lies in the system's field.
  void require_field(const Vec& p) const {
    if (p.size() != dim()) throw InvalidInput("point dimension differs from the system");
    for (const auto& c : p) {
      if (!c.is_rational() && c.radicand() != field_) {
        throw FieldMismatch("coordinate " + c.to_string() + " is outside the field of " + name_);
      }
    }
  }

 private:
  std::string name_;
  std::vector<Similarity> maps_;
  Polytope open_set_;
  long field_ = 0;
};

// ---------------------------------------------------------------------------
// Builtin systems

inline IFSystem cantor_system() {
  const BigRational third(1, 3);
  return IFSystem("cantor",
                  {Similarity::linear1(third, false, QuadScalar(0)),
                   Similarity::linear1(third, false, QuadScalar(make_rational(2, 3)))},
                  Polytope::interval(0, 1));
}

/// Koch curve: u1 = z/3, u2 = e^{i pi/3} z/3 + 1/3, u3 = e^{-i pi/3} z/3 + 1/3 + e^{i pi/3}/3,
/// u4 = z/3 + 2/3, with W the open equilateral triangle (0, 1, e^{i pi/3}).
inline IFSystem koch_system() {
  const BigRational third(1, 3);
  const QuadScalar half(make_rational(1, 2));
  const QuadScalar s3_2(BigRational(0), make_rational(1, 2), 3);  // sqrt(3)/2
  const QuadScalar s3_6(BigRational(0), make_rational(1, 6), 3);  // sqrt(3)/6
  const QuadScalar one(1), zero(0);
  return IFSystem(
      "koch",
      {Similarity::planar(third, one, zero, false, {zero, zero}),
       Similarity::planar(third, half, s3_2, false, {QuadScalar(third), zero}),
       Similarity::planar(third, half, -s3_2, false, {half, s3_6}),
       Similarity::planar(third, one, zero, false, {QuadScalar(make_rational(2, 3)), zero})},
      Polytope::polygon({{zero, zero}, {one, zero}, {half, s3_2}}));
}

/// The peak (1/2, sqrt(3)/6) = u2(1) = u3(0): the unique point of the Koch
/// curve on the line Re z = 1/2.
inline Vec koch_peak() {
  return {QuadScalar(make_rational(1, 2)), QuadScalar(BigRational(0), make_rational(1, 6), 3)};
}

inline IFSystem sierpinski_right_system() {
  const BigRational half(1, 2);
  const QuadScalar one(1), zero(0), h(half);
  return IFSystem("sierpinski-right",
                  {Similarity::planar(half, one, zero, false, {zero, zero}),
                   Similarity::planar(half, one, zero, false, {h, zero}),
                   Similarity::planar(half, one, zero, false, {zero, h})},
                  Polytope::polygon({{zero, zero}, {one, zero}, {zero, one}}));
}

inline IFSystem cantor_dust_system() {
  const BigRational third(1, 3);
  const QuadScalar one(1), zero(0), two3(make_rational(2, 3));
  std::vector<Similarity> maps;
  for (const auto& ty : {zero, two3}) {
    for (const auto& tx : {zero, two3}) maps.push_back(Similarity::planar(third, one, zero, false, {tx, ty}));
  }
  return IFSystem("cantor-dust-2d", std::move(maps),
                  Polytope::polygon({{zero, zero}, {one, zero}, {one, one}, {zero, one}}));
}

/// u1 = x/2, u2 = x/2 + 1/2 on (0, 1): the attractor is [0, 1].
inline IFSystem halves_system() {
  const BigRational half(1, 2);
  return IFSystem("halves",
                  {Similarity::linear1(half, false, QuadScalar(0)),
                   Similarity::linear1(half, false, QuadScalar(half))},
                  Polytope::interval(0, 1));
}

// x/2 and x/2 + 1/4 on (0, 1): images overlap, so the open set condition fails.
inline IFSystem overlap_system() {
  const BigRational half(1, 2);
  return IFSystem("overlap",
                  {Similarity::linear1(half, false, QuadScalar(0)),
                   Similarity::linear1(half, false, QuadScalar(make_rational(1, 4)))},
                  Polytope::interval(0, 1));
}

inline std::vector<std::string> builtin_names() {
  return {"cantor", "koch", "sierpinski-right", "cantor-dust-2d", "halves", "overlap"};
}

inline IFSystem builtin_system(const std::string& name) {
  if (name == "cantor") return cantor_system();
  if (name == "koch") return koch_system();
  if (name == "sierpinski-right") return sierpinski_right_system();
  if (name == "cantor-dust-2d") return cantor_dust_system();
  if (name == "halves") return halves_system();
  if (name == "overlap") return overlap_system();
  throw InvalidInput("unknown builtin system '" + name + "'");
}

// ---------------------------------------------------------------------------
// Open set condition

struct OscResult {
  bool verified = false;
  std::string violation;  // empty when verified
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  std::optional<Vec> witness;
};

/// u_a(W) subset of W for all a and u_a(W), u_b(W) disjoint for a != b,
/// decided with exact polytope predicates.
inline OscResult check_osc(const IFSystem& ifs) {
  const Polytope& w = ifs.open_set();
  std::vector<Polytope> images;
  for (std::size_t a = 0; a < ifs.size(); ++a) {
    images.push_back(w.image(ifs.map(a)));
    if (!w.contains(images.back())) {
      OscResult r;
      r.violation = "image of W under map " + std::to_string(a + 1) + " leaves W";
      r.pair = std::make_pair(a, a);
      for (const auto& v : images.back().vertices) {
        if (!w.contains(v)) {
          r.witness = v;
          break;
        }
      }
      return r;
    }
  }
  for (std::size_t a = 0; a < images.size(); ++a) {
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      if (interiors_intersect(images[a], images[b])) {
        OscResult r;
        r.violation = "images under maps " + std::to_string(a + 1) + " and " +
                      std::to_string(b + 1) + " overlap";
        r.pair = std::make_pair(a, b);
        r.witness = overlap_witness(images[a], images[b]);
        return r;
      }
    }
  }
  return {true, "", std::nullopt, std::nullopt};
}

// ---------------------------------------------------------------------------
// Cylinders

struct Cylinder {
  Word word;
  Similarity map;
  Polytope hull;

  const BigRational& ratio() const { return map.ratio; }
};

inline Cylinder root_cylinder(const IFSystem& ifs) {
  return {{}, Similarity::identity(ifs.dim()), ifs.open_set()};
}

inline Cylinder child(const IFSystem& ifs, const Cylinder& c, int a) {
  Cylinder out{c.word, c.map.compose(ifs.map(static_cast<std::size_t>(a))), {}};
  out.word.push_back(a);
  out.hull = ifs.open_set().image(out.map);
  return out;
}

inline Cylinder cylinder(const IFSystem& ifs, const Word& w) {
  Cylinder c = root_cylinder(ifs);
  for (int a : w) c = child(ifs, c, a);
  return c;
}

/// All cylinders of the given depth whose hull satisfies keep(hull); a
/// hull failing keep prunes its subtree, which is sound for predicates that
/// are monotone under hull nesting (such as meeting a fixed set).
template <typename Keep>
std::vector<Cylinder> cylinders_at_depth(const IFSystem& ifs, std::size_t depth, Keep&& keep) {
  std::vector<Cylinder> level;
  Cylinder root = root_cylinder(ifs);
  if (keep(root.hull)) level.push_back(std::move(root));
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<Cylinder> next;
    for (const auto& c : level) {
      for (std::size_t a = 0; a < ifs.size(); ++a) {
        Cylinder ch = child(ifs, c, static_cast<int>(a));
        if (keep(ch.hull)) next.push_back(std::move(ch));
      }
    }
    level = std::move(next);
  }
  return level;
}

// ---------------------------------------------------------------------------
// Cover

struct CoverResult {
  std::vector<Word> words;
  std::vector<BigRational> ratios;
  QuadScalar diameter;
  BigRational gamma;  // min contraction ratio of a single map
};

/// Minimal words w with ||u_w'|| <= diam(S) whose hull meets S. Every point
/// of S n Lambda lies in u_w(Lambda) for some returned w.
inline CoverResult cover(const IFSystem& ifs, const Polytope& region) {
  if (region.dim != ifs.dim()) throw InvalidInput("region dimension differs from the system");
  CoverResult out;
  out.diameter = region.diameter();
  if (out.diameter.is_zero()) throw InvalidInput("cover needs a region of positive diameter");
  out.gamma = ifs.min_ratio();
  std::deque<Cylinder> queue;
  queue.push_back(root_cylinder(ifs));
  while (!queue.empty()) {
    Cylinder c = std::move(queue.front());
    queue.pop_front();
    if (!closed_intersect(c.hull, region)) continue;
    if (QuadScalar(c.ratio()) <= out.diameter) {
      out.words.push_back(c.word);
      out.ratios.push_back(c.ratio());
      continue;
    }
    for (std::size_t a = 0; a < ifs.size(); ++a) queue.push_back(child(ifs, c, static_cast<int>(a)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Membership

enum class Verdict { kIn, kOut, kUnknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kIn: return "IN";
    case Verdict::kOut: return "OUT";
    case Verdict::kUnknown: return "UNKNOWN";
  }
  return "?";
}

struct MembershipVerdict {
  Verdict verdict = Verdict::kUnknown;
  std::size_t depth = 0;  // OUT: separating depth; UNKNOWN: depth explored
  // IN: coding prefix followed by a repeating period; x = pi(prefix period^inf).
  Word prefix;
  Word period;
};

struct MembershipOptions {
  std::size_t max_depth = 64;
  std::size_t max_states = 200000;
};

namespace detail {

struct MembershipSearch {
  const IFSystem& ifs;
  MembershipOptions opt;
  enum class Mark { kOnStack, kDead, kUnknown };
  struct Entry {
    Mark mark;
    std::size_t level;  // dead level
    std::size_t stack_pos;
  };
  std::map<Vec, Entry, VecLess> memo;
  Word letters;
  std::optional<MembershipVerdict> found;
  bool truncated = false;

  // Returns the dead level of s (0: s outside cl W), or nullopt when s has
  // an infinite admissible path (found is set) or the budget ran out.
  std::optional<std::size_t> explore(const Vec& s, std::size_t depth) {
    if (!ifs.open_set().contains(s)) return 0;
    if (auto it = memo.find(s); it != memo.end()) {
      if (it->second.mark == Mark::kDead) return it->second.level;
      if (it->second.mark == Mark::kOnStack) {
        MembershipVerdict v;
        v.verdict = Verdict::kIn;
        v.prefix.assign(letters.begin(), letters.begin() + static_cast<long>(it->second.stack_pos));
        v.period.assign(letters.begin() + static_cast<long>(it->second.stack_pos), letters.end());
        found = v;
      }
      return std::nullopt;
    }
    if (depth >= opt.max_depth || memo.size() >= opt.max_states) {
      truncated = true;
      return std::nullopt;
    }
    memo.emplace(s, Entry{Mark::kOnStack, 0, letters.size()});
    std::size_t level = 0;
    bool unknown = false;
    for (std::size_t a = 0; a < ifs.size(); ++a) {
      letters.push_back(static_cast<int>(a));
      const std::optional<std::size_t> r = explore(ifs.map(a).inverse(s), depth + 1);
      letters.pop_back();
      if (found) return std::nullopt;
      if (!r) {
        unknown = true;
      } else {
        level = std::max(level, *r);
      }
    }
    auto& e = memo.find(s)->second;
    if (unknown) {
      e.mark = Mark::kUnknown;
      return std::nullopt;
    }
    e.mark = Mark::kDead;
    e.level = level + 1;
    return e.level;
  }
};

}  // namespace detail

/// IN when the exact preimage orbit graph of x (states inside cl W) has a
/// cycle, OUT(n) when every admissible preimage path dies within n steps,
/// i.e. x misses every depth-n hull. UNKNOWN when the budget runs out.
inline MembershipVerdict membership(const IFSystem& ifs, const Vec& x, const MembershipOptions& opt = {}) {
  ifs.require_field(x);
  detail::MembershipSearch search{ifs, opt, {}, {}, std::nullopt, false};
  const std::optional<std::size_t> level = search.explore(x, 0);
  if (search.found) return *search.found;
  MembershipVerdict v;
  if (level) {
    v.verdict = Verdict::kOut;
    v.depth = *level;
  } else {
    v.verdict = Verdict::kUnknown;
    v.depth = opt.max_depth;
  }
  return v;
}

/// Re-verifies an IN certificate: the preimage orbit along prefix + period
/// stays in cl W and returns to its starting state.
inline bool verify_in(const IFSystem& ifs, const Vec& x, const Word& prefix, const Word& period) {
  if (period.empty()) return false;
  Vec s = x;
  if (!ifs.open_set().contains(s)) return false;
  for (int a : prefix) {
    s = ifs.map(static_cast<std::size_t>(a)).inverse(s);
    if (!ifs.open_set().contains(s)) return false;
  }
  const Vec start = s;
  for (int a : period) {
    s = ifs.map(static_cast<std::size_t>(a)).inverse(s);
    if (!ifs.open_set().contains(s)) return false;
  }
  return (s - start) == Vec(s.size());
}

/// Re-verifies OUT(n): no preimage state survives n levels.
inline bool verify_out(const IFSystem& ifs, const Vec& x, std::size_t n) {
  std::set<Vec, VecLess> level;
  if (ifs.open_set().contains(x)) level.insert(x);
  for (std::size_t k = 0; k < n && !level.empty(); ++k) {
    std::set<Vec, VecLess> next;
    for (const auto& s : level) {
      for (const auto& u : ifs.maps()) {
        Vec t = u.inverse(s);
        if (ifs.open_set().contains(t)) next.insert(std::move(t));
      }
    }
    level = std::move(next);
  }
  return level.empty();
}

/// Exact Cantor-set membership of a rational in [0, 1] by ternary long
/// division: IN iff some ternary expansion uses only the digits 0 and 2.
/// The only point with two expansions is a terminating one, whose final
/// digit 1 may be rewritten as 0 followed by repeating 2s.
inline bool cantor_membership(const BigRational& r) {
  if (sgn(r) < 0 || r > 1) throw InvalidInput("cantor_membership needs r in [0, 1]");
  if (r == 1) return true;
  const BigInt den = r.get_den();
  BigInt rem = r.get_num();
  std::set<BigInt> seen;
  while (rem != 0 && !seen.count(rem)) {
    seen.insert(rem);
    rem *= 3;
    BigInt digit;
    mpz_fdiv_qr(digit.get_mpz_t(), rem.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t());
    if (digit == 1) return rem == 0;  // a 1 is fine only as the terminating digit
  }
  return true;
}

/// The points k/3^depth, 0 <= k <= 3^depth, that lie in the Cantor set.
inline std::vector<BigRational> cantor_grid_members(std::size_t depth) {
  const BigInt den = ipow(3, depth);
  std::vector<BigRational> out;
  for (BigInt k = 0; k <= den; ++k) {
    BigRational r = make_rational(k, den);
    if (cantor_membership(r)) out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traces on a line

struct Span {
  QuadScalar lo;
  QuadScalar hi;
};

/// Parameter intervals of the depth-n hulls met by the line, merged where
/// they touch or overlap; an outer approximation of Lambda n L.
inline std::vector<Span> line_trace(const IFSystem& ifs, const Line& line, std::size_t depth) {
  std::vector<Span> raw;
  const auto cyls = cylinders_at_depth(ifs, depth, [&](const Polytope& h) { return clip(line, h).has_value(); });
  for (const auto& c : cyls) {
    const auto iv = clip(line, c.hull);
    raw.push_back({iv->first, iv->second});
  }
  std::sort(raw.begin(), raw.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
  std::vector<Span> merged;
  for (auto& s : raw) {
    if (!merged.empty() && s.lo <= merged.back().hi) {
      if (merged.back().hi < s.hi) merged.back().hi = s.hi;
    } else {
      merged.push_back(std::move(s));
    }
  }
  return merged;
}

inline Line default_line(const IFSystem& ifs) {
  if (ifs.dim() != 1) throw InvalidInput("a line must be given for planar systems");
  return Line::through({QuadScalar(0)}, {QuadScalar(1)});
}

// ---------------------------------------------------------------------------
// Porosity relative to a line

struct PorosityTest {
  QuadScalar center;  // parameter on the line
  BigRational radius;
  std::size_t depth = 0;
  std::optional<Span> gap;  // largest certified gap inside the window
  QuadScalar eps_found;     // gap length / (2 r)
};

struct PorosityResult {
  bool certified = false;
  BigRational epsilon;
  QuadScalar best_epsilon;  // min over tests of eps_found
  std::vector<PorosityTest> tests;
  std::optional<PorosityTest> counterexample;  // first test without an eps gap
};

struct PorosityOptions {
  std::size_t samples = 5;
  std::size_t max_depth = 12;
  std::size_t extra_depth = 2;
};

/// For each radius r and sampled centre x on L (midpoints of trace pieces),
/// looks for an open gap of length >= 2 eps r inside [x - r, x + r] that
/// misses the depth-n hull trace; such a gap misses Lambda n L.
inline PorosityResult line_porosity(const IFSystem& ifs, const Line& line, const BigRational& epsilon,
                                    const std::vector<BigRational>& scales,
                                    const PorosityOptions& opt = {}) {
  if (sgn(epsilon) <= 0 || epsilon >= 1) throw InvalidInput("epsilon must lie in (0, 1)");
  PorosityResult out;
  out.epsilon = epsilon;
  out.certified = true;
  const QuadScalar diam = ifs.open_set().diameter();
  const BigRational rmax = ifs.max_ratio();
  bool first = true;
  for (const BigRational& r : scales) {
    if (sgn(r) <= 0) throw InvalidInput("porosity scales must be positive");
    // Hulls no longer than eps r / 4 resolve gaps of length 2 eps r.
    std::size_t depth = 0;
    BigRational size = 1;
    while (QuadScalar(size) * diam > QuadScalar(BigRational(epsilon * r / 4)) && depth < opt.max_depth) {
      size *= rmax;
      ++depth;
    }
    const std::vector<Span> base = line_trace(ifs, line, depth);
    if (base.empty()) continue;
    std::vector<QuadScalar> centers;
    const std::size_t m = base.size();
    const std::size_t k = std::min(opt.samples, m);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t idx = k == 1 ? m / 2 : i * (m - 1) / (k - 1);
      centers.push_back((base[idx].lo + base[idx].hi) * QuadScalar(make_rational(1, 2)));
    }
    for (const auto& x : centers) {
      PorosityTest t{x, r, depth, std::nullopt, QuadScalar()};
      for (std::size_t dd = depth; dd <= std::min(opt.max_depth, depth + opt.extra_depth); ++dd) {
        const std::vector<Span> trace = dd == depth ? base : line_trace(ifs, line, dd);
        const QuadScalar wlo = x - QuadScalar(r), whi = x + QuadScalar(r);
        QuadScalar cursor = wlo;
        std::optional<Span> best;
        auto consider = [&](const QuadScalar& a, const QuadScalar& b) {
          if (a < b && (!best || best->hi - best->lo < b - a)) best = Span{a, b};
        };
        for (const auto& s : trace) {
          if (s.hi < wlo) continue;
          if (whi < s.lo) break;
          consider(cursor, std::min(s.lo, whi));
          if (cursor < s.hi) cursor = s.hi;
        }
        consider(cursor, whi);
        t.depth = dd;
        if (best) {
          t.gap = best;
          t.eps_found = (best->hi - best->lo) / QuadScalar(BigRational(2 * r));
        }
        if (QuadScalar(epsilon) <= t.eps_found) break;
      }
      if (first || t.eps_found < out.best_epsilon) out.best_epsilon = t.eps_found;
      first = false;
      if (t.eps_found < QuadScalar(epsilon)) {
        out.certified = false;
        if (!out.counterexample) out.counterexample = t;
      }
      out.tests.push_back(std::move(t));
    }
  }
  if (out.tests.empty()) throw InvalidInput("the line misses the bounding hull");
  return out;
}

// ---------------------------------------------------------------------------
// Segment scan

struct SegmentFound {
  Line line;
  QuadScalar t0;
  QuadScalar t1;
  Vec a;
  Vec b;
  QuadScalar length;  // max norm
};

struct SegmentScanResult {
  std::vector<SegmentFound> segments;  // longest first
  std::size_t lines_scanned = 0;
  bool found() const { return !segments.empty(); }
};

namespace detail {

// Normalized implicit form (n0, n1, c) of the line, first nonzero normal
// entry scaled to 1, usable as a dedup key.
inline std::vector<QuadScalar> line_key(const Line& l) {
  QuadScalar n0 = -l.direction[1], n1 = l.direction[0];
  QuadScalar c = n0 * l.point[0] + n1 * l.point[1];
  const QuadScalar s = n0.is_zero() ? n1 : n0;
  return {n0 / s, n1 / s, c / s};
}

}  // namespace detail

/// Candidate lines through pairs of depth-2 cylinder vertices; on each, the
/// merged trace of depth-n hulls. Every merged piece of length >= min_len is
/// a segment covered by the depth-n hull union.
inline SegmentScanResult segment_scan(const IFSystem& ifs, std::size_t depth, const BigRational& min_len,
                                      unsigned workers = 1) {
  if (depth < 1) throw InvalidInput("segment_scan needs depth >= 1");
  std::vector<Line> lines;
  if (ifs.dim() == 1) {
    lines.push_back(default_line(ifs));
  } else if (ifs.dim() == 2) {
    std::set<Vec, VecLess> verts;
    for (const auto& c : cylinders_at_depth(ifs, 2, [](const Polytope&) { return true; })) {
      verts.insert(c.hull.vertices.begin(), c.hull.vertices.end());
    }
    const std::vector<Vec> vs(verts.begin(), verts.end());
    std::set<std::vector<QuadScalar>, VecLess> keys;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      for (std::size_t j = i + 1; j < vs.size(); ++j) {
        Line l = Line::through(vs[i], vs[j] - vs[i]);
        if (keys.insert(detail::line_key(l)).second) lines.push_back(std::move(l));
      }
    }
  } else {
    throw InvalidInput("segment_scan supports dimension 1 and 2");
  }
  const QuadScalar need(min_len);
  std::vector<std::vector<SegmentFound>> per_line(lines.size());
  parallel_chunks(lines.size(), workers, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t li = begin; li < end; ++li) {
      for (const auto& s : line_trace(ifs, lines[li], depth)) {
        const QuadScalar len = s.hi - s.lo;
        if (need <= len) {
          per_line[li].push_back({lines[li], s.lo, s.hi, lines[li].at(s.lo), lines[li].at(s.hi), len});
        }
      }
    }
  });
  SegmentScanResult out;
  out.lines_scanned = lines.size();
  for (auto& v : per_line) {
    for (auto& s : v) out.segments.push_back(std::move(s));
  }
  std::stable_sort(out.segments.begin(), out.segments.end(),
                   [](const SegmentFound& a, const SegmentFound& b) { return b.length < a.length; });
  return out;
}

}  // namespace xda
