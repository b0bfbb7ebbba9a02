#pragma once

// Exact geometry in dimension 1 and 2 over Q(sqrt D): similarities, convex
// polytopes (closed intervals, convex polygons) and lines.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xda/errors.hpp"
#include "xda/exact.hpp"

namespace xda {

using Vec = QuadVector;
using RationalVec = std::vector<BigRational>;

inline Vec to_vec(const RationalVec& v) { return Vec(v.begin(), v.end()); }

inline Vec operator+(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec operator-(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec operator*(const QuadScalar& s, const Vec& a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

inline QuadScalar max_norm(const Vec& v) {
  QuadScalar m;
  for (const auto& c : v) m = std::max(m, c.abs());
  return m;
}

inline BigRational max_norm(const RationalVec& v) {
  BigRational m = 0;
  for (const auto& c : v) m = std::max(m, BigRational(abs(c)));
  return m;
}

/// z-component of a x b in the plane.
inline QuadScalar cross(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

inline std::string to_string(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += v[i].to_string();
  }
  return s + ")";
}

struct VecLess {
  bool operator()(const Vec& a, const Vec& b) const {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        QuadScalar::StructuralLess());
  }
};

/// Exact collinearity of rational points: every difference from the first
/// point is parallel to the first nonzero difference (all 2x2 minors vanish).
inline bool collinear(const std::vector<RationalVec>& pts) {
  if (pts.size() <= 2) return true;
  const std::size_t d = pts[0].size();
  std::optional<RationalVec> dir;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    RationalVec diff(d);
    bool zero = true;
    for (std::size_t j = 0; j < d; ++j) {
      diff[j] = pts[k][j] - pts[0][j];
      if (sgn(diff[j]) != 0) zero = false;
    }
    if (zero) continue;
    if (!dir) {
      dir = diff;
      continue;
    }
    for (std::size_t a = 0; a < d; ++a) {
      for (std::size_t b = a + 1; b < d; ++b) {
        if ((*dir)[a] * diff[b] != (*dir)[b] * diff[a]) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Similarities

/// u(x) = ratio * O x + t with O orthogonal.
struct Similarity {
  BigRational ratio;
  std::vector<Vec> orth;  // rows
  Vec translation;

  std::size_t dim() const { return translation.size(); }

  Vec linear(const Vec& v) const {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      QuadScalar s;
      for (std::size_t j = 0; j < v.size(); ++j) s += orth[i][j] * v[j];
      out[i] = QuadScalar(ratio) * s;
    }
    return out;
  }

  Vec apply(const Vec& v) const { return linear(v) + translation; }

  /// u^{-1}(v) = O^T (v - t) / ratio.
  Vec inverse(const Vec& v) const {
    const Vec w = v - translation;
    Vec out(v.size());
    const QuadScalar inv(1 / ratio);
    for (std::size_t i = 0; i < v.size(); ++i) {
      QuadScalar s;
      for (std::size_t j = 0; j < v.size(); ++j) s += orth[j][i] * w[j];
      out[i] = inv * s;
    }
    return out;
  }

  bool reflects() const {
    if (dim() == 1) return sign(orth[0][0]) < 0;
    return sign(orth[0][0] * orth[1][1] - orth[0][1] * orth[1][0]) < 0;
  }

  /// (*this) o other.
  Similarity compose(const Similarity& other) const {
    const std::size_t d = dim();
    Similarity out;
    out.ratio = ratio * other.ratio;
    out.orth.assign(d, Vec(d));
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        QuadScalar s;
        for (std::size_t k = 0; k < d; ++k) s += orth[i][k] * other.orth[k][j];
        out.orth[i][j] = s;
      }
    }
    out.translation = apply(other.translation);
    return out;
  }

  static Similarity identity(std::size_t d) {
    Similarity s;
    s.ratio = 1;
    s.orth.assign(d, Vec(d));
    for (std::size_t i = 0; i < d; ++i) s.orth[i][i] = 1;
    s.translation.assign(d, QuadScalar());
    return s;
  }

  /// Plane map z -> ratio * R(cos, sin) [reflect across the x-axis first] z + t.
  static Similarity planar(const BigRational& ratio, const QuadScalar& cos, const QuadScalar& sin,
                           bool reflect, Vec translation) {
    if (!(cos * cos + sin * sin - QuadScalar(1)).is_zero()) {
      throw InvalidInput("rotation needs cos^2 + sin^2 = 1");
    }
    Similarity s;
    s.ratio = ratio;
    if (reflect) {
      s.orth = {{cos, sin}, {sin, -cos}};
    } else {
      s.orth = {{cos, -sin}, {sin, cos}};
    }
    s.translation = std::move(translation);
    return s;
  }

  static Similarity linear1(const BigRational& ratio, bool reflect, const QuadScalar& t) {
    Similarity s;
    s.ratio = ratio;
    s.orth = {{QuadScalar(reflect ? -1 : 1)}};
    s.translation = {t};
    return s;
  }
};

// ---------------------------------------------------------------------------
// Convex polytopes

/// Closed convex set: an interval [v0, v1] in dimension 1 or a convex polygon
/// with counter-clockwise vertices in dimension 2. Its interior is the open
/// set it stands for.
struct Polytope {
  std::size_t dim = 0;
  std::vector<Vec> vertices;

  static Polytope interval(const QuadScalar& lo, const QuadScalar& hi) {
    if (!(lo < hi)) throw InvalidInput("interval needs lo < hi");
    return {1, {{lo}, {hi}}};
  }

  static Polytope polygon(std::vector<Vec> v) {
    if (v.size() < 3) throw InvalidInput("polygon needs at least three vertices");
    Polytope p{2, std::move(v)};
    if (sign(p.signed_area2()) < 0) std::reverse(p.vertices.begin(), p.vertices.end());
    if (sign(p.signed_area2()) == 0) throw InvalidInput("degenerate polygon");
    const std::size_t n = p.vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec e = p.vertices[(i + 1) % n] - p.vertices[i];
      const Vec f = p.vertices[(i + 2) % n] - p.vertices[(i + 1) % n];
      if (sign(cross(e, f)) < 0) throw InvalidInput("polygon is not convex");
    }
    return p;
  }

  /// Axis-aligned box [lo, hi] (componentwise).
  static Polytope box(const Vec& lo, const Vec& hi) {
    if (lo.size() == 1) return interval(lo[0], hi[0]);
    if (lo.size() != 2) throw InvalidInput("boxes are supported in dimension 1 and 2");
    return polygon({{lo[0], lo[1]}, {hi[0], lo[1]}, {hi[0], hi[1]}, {lo[0], hi[1]}});
  }

  QuadScalar signed_area2() const {
    QuadScalar s;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(vertices[i], vertices[(i + 1) % n]);
    return s;
  }

  const QuadScalar& lo() const { return vertices[0][0]; }
  const QuadScalar& hi() const { return vertices[1][0]; }

  /// Max-norm diameter.
  QuadScalar diameter() const {
    QuadScalar best;
    for (const auto& a : vertices) {
      for (const auto& b : vertices) best = std::max(best, max_norm(a - b));
    }
    return best;
  }

  Polytope image(const Similarity& u) const {
    Polytope out{dim, {}};
    out.vertices.reserve(vertices.size());
    for (const auto& v : vertices) out.vertices.push_back(u.apply(v));
    if (dim == 1) {
      if (out.vertices[1][0] < out.vertices[0][0]) std::swap(out.vertices[0], out.vertices[1]);
    } else if (u.reflects()) {
      std::reverse(out.vertices.begin(), out.vertices.end());
    }
    return out;
  }

  /// Position of p relative to edge i: > 0 inside, 0 on the edge line.
  QuadScalar edge_side(std::size_t i, const Vec& p) const {
    const Vec& a = vertices[i];
    const Vec& b = vertices[(i + 1) % vertices.size()];
    return cross(b - a, p - a);
  }

  bool contains(const Vec& p) const {
    if (dim == 1) return lo() <= p[0] && p[0] <= hi();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (sign(edge_side(i, p)) < 0) return false;
    }
    return true;
  }

  bool contains_in_interior(const Vec& p) const {
    if (dim == 1) return lo() < p[0] && p[0] < hi();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (sign(edge_side(i, p)) <= 0) return false;
    }
    return true;
  }

  bool contains(const Polytope& other) const {
    return std::all_of(other.vertices.begin(), other.vertices.end(),
                       [&](const Vec& v) { return contains(v); });
  }
};

namespace detail {

// True when some edge of `a` has every vertex of `b` on its outer side
// (strictly when `strict`, otherwise allowing contact).
inline bool separated_by_edge_of(const Polytope& a, const Polytope& b, bool strict) {
  for (std::size_t i = 0; i < a.vertices.size(); ++i) {
    bool all = true;
    for (const auto& v : b.vertices) {
      const int s = sign(a.edge_side(i, v));
      if (strict ? s >= 0 : s > 0) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace detail

/// Do the open interiors meet? Separating-axis test on edge normals, exact.
inline bool interiors_intersect(const Polytope& a, const Polytope& b) {
  if (a.dim == 1) return std::max(a.lo(), b.lo()) < std::min(a.hi(), b.hi());
  return !detail::separated_by_edge_of(a, b, false) && !detail::separated_by_edge_of(b, a, false);
}

/// Do the closed sets meet?
inline bool closed_intersect(const Polytope& a, const Polytope& b) {
  if (a.dim == 1) return std::max(a.lo(), b.lo()) <= std::min(a.hi(), b.hi());
  return !detail::separated_by_edge_of(a, b, true) && !detail::separated_by_edge_of(b, a, true);
}

/// A point in both interiors, or in both closures when the interiors are
/// disjoint. Used only to illustrate violations.
inline std::optional<Vec> overlap_witness(const Polytope& a, const Polytope& b) {
  if (a.dim == 1) {
    const QuadScalar lo = std::max(a.lo(), b.lo());
    const QuadScalar hi = std::min(a.hi(), b.hi());
    if (!(lo < hi)) return std::nullopt;
    return Vec{(lo + hi) * QuadScalar(make_rational(1, 2))};
  }
  // Clip b against each edge of a (Sutherland-Hodgman); the vertex average
  // of a convex polygon with positive area lies in its interior.
  std::vector<Vec> poly = b.vertices;
  for (std::size_t i = 0; i < a.vertices.size() && !poly.empty(); ++i) {
    std::vector<Vec> next;
    for (std::size_t j = 0; j < poly.size(); ++j) {
      const Vec& p = poly[j];
      const Vec& q = poly[(j + 1) % poly.size()];
      const QuadScalar sp = a.edge_side(i, p), sq = a.edge_side(i, q);
      if (sign(sp) >= 0) next.push_back(p);
      if (sign(sp) * sign(sq) < 0) next.push_back(p + (sp / (sp - sq)) * (q - p));
    }
    poly = std::move(next);
  }
  if (poly.empty()) return std::nullopt;
  Vec c(2);
  for (const auto& v : poly) c = c + v;
  c = QuadScalar(make_rational(1, BigInt(static_cast<long>(poly.size())))) * c;
  if (a.contains_in_interior(c) && b.contains_in_interior(c)) return c;
  return poly.front();
}

// ---------------------------------------------------------------------------
// Lines

/// { point + t * direction : t real }, direction scaled to max-norm 1 so that
/// parameter differences are max-norm distances.
struct Line {
  Vec point;
  Vec direction;

  static Line through(const Vec& point, const Vec& direction) {
    const QuadScalar n = max_norm(direction);
    if (n.is_zero()) throw InvalidInput("line direction must be nonzero");
    return {point, (QuadScalar(1) / n) * direction};
  }

  Vec at(const QuadScalar& t) const { return point + t * direction; }

  /// Parameter of a point known to lie on the line.
  QuadScalar param(const Vec& p) const {
    for (std::size_t i = 0; i < direction.size(); ++i) {
      if (!direction[i].is_zero()) return (p[i] - point[i]) / direction[i];
    }
    return QuadScalar();
  }

  bool contains(const Vec& p) const {
    if (point.size() == 1) return true;
    return cross(direction, p - point).is_zero();
  }
};

/// Closed parameter interval of line n polytope, if nonempty.
inline std::optional<std::pair<QuadScalar, QuadScalar>> clip(const Line& line, const Polytope& p) {
  if (p.dim == 1) {
    const QuadScalar a = line.param(p.vertices[0]);
    const QuadScalar b = line.param(p.vertices[1]);
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
  std::optional<QuadScalar> lo, hi;
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    // edge_side(line.at(t)) = c0 + c1 t >= 0
    const Vec& a = p.vertices[i];
    const Vec e = p.vertices[(i + 1) % p.vertices.size()] - a;
    const QuadScalar c0 = cross(e, line.point - a);
    const QuadScalar c1 = cross(e, line.direction);
    const int s1 = sign(c1);
    if (s1 == 0) {
      if (sign(c0) < 0) return std::nullopt;
      continue;
    }
    const QuadScalar t = -c0 / c1;
    if (s1 > 0) {
      if (!lo || *lo < t) lo = t;
    } else {
      if (!hi || t < *hi) hi = t;
    }
  }
  if (!lo || !hi) throw InvalidInput("unbounded clip: polygon is not bounded");
  if (*hi < *lo) return std::nullopt;
  return std::make_pair(*lo, *hi);
}

}  // namespace xda
