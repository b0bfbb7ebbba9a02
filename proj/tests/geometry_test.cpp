#include <gtest/gtest.h>

#include <random>

#include "xda/ifs.hpp"

using namespace xda;

namespace {

QuadScalar s3(long num, long den) { return QuadScalar(BigRational(0), BigRational(num, den), 3); }

Vec rv(long a, long b, long den) { return {QuadScalar(BigRational(a, den)), QuadScalar(BigRational(b, den))}; }

}  // namespace

TEST(Similarity, ApplyAndInverse) {
  const IFSystem k = koch_system();
  const Vec z = rv(1, 2, 5);
  for (const auto& u : k.maps()) {
    EXPECT_EQ(u.inverse(u.apply(z)), z);
    EXPECT_FALSE(u.reflects());
  }
  // u2(1) = u3(0) is the peak.
  EXPECT_EQ(k.map(1).apply(rv(1, 0, 1)), koch_peak());
  EXPECT_EQ(k.map(2).apply(rv(0, 0, 1)), koch_peak());
}

TEST(Similarity, RejectsNonRotation) {
  EXPECT_THROW(Similarity::planar(BigRational(1, 2), QuadScalar(1), QuadScalar(1), false, rv(0, 0, 1)),
               InvalidInput);
  const Similarity r = Similarity::planar(BigRational(1, 2), QuadScalar(0), QuadScalar(1), true, rv(0, 0, 1));
  EXPECT_TRUE(r.reflects());
}

TEST(Collinear, Examples) {
  using RV = RationalVec;
  EXPECT_TRUE(collinear({RV{0, 0}, RV{1, 1}, RV{BigRational(5, 2), BigRational(5, 2)}}));
  EXPECT_FALSE(collinear({RV{0, 0}, RV{1, 1}, RV{1, 2}}));
  EXPECT_TRUE(collinear({RV{0, 0, 0}, RV{0, 0, 0}, RV{1, 2, 3}}));
  EXPECT_FALSE(collinear({RV{0, 0, 0}, RV{1, 2, 3}, RV{2, 4, 7}}));
}

TEST(Polytope, ContainmentAndOverlap) {
  const Polytope tri = koch_system().open_set();
  EXPECT_TRUE(tri.contains(koch_peak()));
  EXPECT_TRUE(tri.contains_in_interior(koch_peak()));
  EXPECT_TRUE(tri.contains(rv(0, 0, 1)));
  EXPECT_FALSE(tri.contains_in_interior(rv(0, 0, 1)));
  EXPECT_FALSE(tri.contains(rv(1, 1, 1)));
  EXPECT_EQ(tri.diameter(), QuadScalar(1));
  const Polytope a = Polytope::box(rv(0, 0, 1), rv(1, 1, 2));
  const Polytope b = Polytope::box(rv(1, 0, 2), rv(1, 1, 1));
  EXPECT_FALSE(interiors_intersect(a, b));
  EXPECT_TRUE(closed_intersect(a, b));
  const Polytope c = Polytope::box(rv(1, 1, 4), rv(3, 3, 4));
  EXPECT_TRUE(interiors_intersect(a, c));
  ASSERT_TRUE(overlap_witness(a, c).has_value());
  EXPECT_TRUE(a.contains_in_interior(*overlap_witness(a, c)));
  EXPECT_TRUE(c.contains_in_interior(*overlap_witness(a, c)));
}

TEST(Clip, LineThroughTriangle) {
  const Polytope tri = koch_system().open_set();
  const Line axis = Line::through(rv(0, 0, 1), rv(1, 0, 1));
  const auto c = clip(axis, tri);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->first, QuadScalar(0));
  EXPECT_EQ(c->second, QuadScalar(1));
  const Line above = Line::through({QuadScalar(0), s3(1, 1)}, rv(1, 0, 1));
  EXPECT_FALSE(clip(above, tri).has_value());
}

// (u o v)(x) = u(v(x)) and hull(w a) is inside hull(w), checked exactly.
TEST(SimilarityProperty, CompositionAndHullNesting) {
  std::mt19937_64 rng(2);
  const IFSystem k = koch_system();
  for (int t = 0; t < 200; ++t) {
    Word w;
    for (std::size_t i = 0, n = 1 + rng() % 5; i < n; ++i) w.push_back(static_cast<int>(rng() % 4));
    Similarity s = Similarity::identity(2);
    for (int a : w) s = s.compose(k.map(static_cast<std::size_t>(a)));
    const Vec z = rv(static_cast<long>(rng() % 100), static_cast<long>(rng() % 100), 97);
    Vec direct = z;
    for (auto it = w.rbegin(); it != w.rend(); ++it) direct = k.map(static_cast<std::size_t>(*it)).apply(direct);
    EXPECT_EQ(s.apply(z), direct);
    const Cylinder c = cylinder(k, w);
    EXPECT_EQ(c.ratio(), pow(BigRational(1, 3), w.size()));
    for (int a = 0; a < 4; ++a) {
      EXPECT_TRUE(c.hull.contains(child(k, c, a).hull));
    }
  }
}
