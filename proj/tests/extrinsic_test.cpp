#include <gtest/gtest.h>

#include "xda/extrinsic.hpp"

using namespace xda;

namespace {

RationalVec rv(long a, long b, long c, long d) { return {BigRational(a, b), BigRational(c, d)}; }

QuadScalar s2(long a, long b, long den) { return QuadScalar(BigRational(a, den), BigRational(b, den), 2); }

}  // namespace

TEST(LineObstruction, Examples) {
  const LineObstruction a = rational_segment_obstruction({BigInt(0), BigInt(1)}, 0, rv(1, 3, 1, 5));
  EXPECT_EQ(a.numerator, 3);
  EXPECT_EQ(a.q, 15);
  EXPECT_EQ(a.distance, QuadScalar(BigRational(1, 5)));
  EXPECT_GE(a.distance, a.lower_bound);
  EXPECT_THROW(rational_segment_obstruction({BigInt(0), BigInt(1)}, 0, rv(5, 7, 0, 1)), OnLine);
  const LineObstruction b = rational_segment_obstruction({BigInt(1), BigInt(1)}, 1, rv(1, 2, 1, 3));
  EXPECT_EQ(b.distance, b.lower_bound);
  EXPECT_EQ(b.distance, QuadScalar(BigRational(0), BigRational(1, 12), 2));
}

TEST(LineObstruction, NonPrimitiveNormalReduced) {
  const LineObstruction a = rational_segment_obstruction({BigInt(0), BigInt(4)}, 0, rv(1, 3, 1, 5));
  EXPECT_EQ(a.distance, QuadScalar(BigRational(1, 5)));
}

TEST(Pythagorean, Counts) {
  // Reference counts from an exhaustive a^2 + b^2 = c^2 search.
  EXPECT_EQ(pythagorean_points(1).size(), 4u);
  EXPECT_EQ(pythagorean_points(5).size(), 12u);
  EXPECT_EQ(pythagorean_points(13).size(), 20u);
  EXPECT_EQ(pythagorean_points(100).size(), 132u);
  for (const auto& p : pythagorean_points(100)) {
    EXPECT_EQ(p.a * p.a + p.b * p.b, p.c * p.c);
    EXPECT_EQ(gcd(gcd(p.a, p.b), p.c), 1);
  }
}

TEST(CircleExclusion, Examples) {
  const CircleExclusion a = circle_exclusion(rv(3, 5, 3, 5));
  EXPECT_EQ(a.numerator, 7);
  EXPECT_EQ(a.distance, s2(5, -3, 5));
  EXPECT_EQ(a.bound, a.distance);
  EXPECT_GE(a.bound, a.weak_bound);
  const CircleExclusion b = circle_exclusion(rv(1, 2, 1, 2));
  EXPECT_EQ(b.distance, s2(2, -1, 2));
  EXPECT_EQ(b.bound, b.distance);
  EXPECT_THROW(circle_exclusion(rv(3, 5, 4, 5)), OnCircle);
}

TEST(Census, RationalCirclePoint) {
  // Reference counts from a brute-force floor/floor+1 sweep in exact fractions.
  const TargetPoint x = parse_point("rat:3/5,rat:4/5");
  const CensusResult a = psi_census(x, 2, 2000);
  EXPECT_EQ(a.intrinsic, 2u);
  EXPECT_EQ(a.extrinsic, 2u);
  EXPECT_EQ(a.extrinsic_beyond_threshold, 0u);
  EXPECT_EQ(a.intrinsic_from_pythagorean, a.intrinsic);
  const CensusResult b = psi_census(x, BigRational(1, 10), 100);
  EXPECT_EQ(b.intrinsic, 2u);
  EXPECT_EQ(b.extrinsic, 170u);
}

TEST(Census, EdgeCases) {
  const TargetPoint x = parse_point("quad:(0+1*sqrt(2))/2,quad:(0+1*sqrt(2))/2");
  const CensusResult z = psi_census(x, 2, 0);
  EXPECT_EQ(z.intrinsic + z.extrinsic, 0u);
  EXPECT_THROW(psi_census(parse_point("rat:1/2,rat:1/2"), 2, 10), InvalidInput);
  EXPECT_THROW(psi_census(x, 0, 10), InvalidInput);
  EXPECT_GT(psi_census(x, BigRational(1, 10), 100).extrinsic, 0u);
}

// Beyond q > 3^{1/(c-1)} no extrinsic hit exists, for irrational targets too.
TEST(CensusProperty, NoExtrinsicHitsBeyondThreshold) {
  for (const char* spec : {"quad:(0+1*sqrt(2))/2,quad:(0+1*sqrt(2))/2", "rat:1/2,quad:(0+1*sqrt(3))/2",
                           "quad:(0+1*sqrt(5))/3,rat:2/3", "rat:5/13,rat:12/13"}) {
    for (const BigRational& c : {BigRational(3, 2), BigRational(2), BigRational(3)}) {
      const CensusResult r = psi_census(parse_point(spec), c, 3000);
      EXPECT_EQ(r.extrinsic_beyond_threshold, 0u) << spec;
      EXPECT_EQ(r.intrinsic_from_pythagorean, r.intrinsic) << spec;
    }
  }
}

TEST(CantorSearch, ThueMorseRows) {
  const Coordinate x = parse_coordinate("dig:3:tm:02");
  const CantorSearchResult r = extrinsic_search_cantor(x, 1, 3, 2);
  ASSERT_EQ(r.per_n.size(), 3u);
  EXPECT_EQ(r.bound, 9);
  struct Row {
    long b, p, q;
    bool out;
    const char* quality;
  };
  // Reference rows: exact fractions for membership, 80-digit mpmath for quality.
  const std::vector<std::vector<Row>> want = {
      {{3, 1, 3, false, "0.255562246992928"}, {4, 1, 4, false, "0.87900044979035"}, {5, 1, 5, true, "2.62343820279742"}},
      {{3, 3, 10, false, "0.493752811189686"}, {4, 4, 13, false, "0.465557749089431"}, {5, 5, 16, true, "1.9359928033544"}},
      {{1, 4, 13, false, "0.465557749089431"}, {2, 7, 23, true, "0.311952371193439"}, {3, 10, 33, true, "2.07696811385568"}},
  };
  for (std::size_t n = 0; n < 3; ++n) {
    const auto& rows = r.per_n[n].rows;
    ASSERT_GE(rows.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(rows[i].b, want[n][i].b);
      EXPECT_EQ(rows[i].p, want[n][i].p);
      EXPECT_EQ(rows[i].q, want[n][i].q);
      EXPECT_EQ(rows[i].out, want[n][i].out) << "n=" << n + 1 << " b=" << want[n][i].b;
      const BigRational ref = parse_rational(want[n][i].quality);
      EXPECT_LT(abs(rows[i].quality.midpoint() - ref), BigRational(1, 1000000000000));
    }
  }
}

TEST(CantorSearch, QualityBoundOverManyTerms) {
  const CantorSearchResult r = extrinsic_search_cantor(parse_coordinate("dig:3:tm:02"), 1, 40, 8);
  EXPECT_EQ(r.bound, 81);
  for (const auto& n : r.per_n) {
    if (!n.best) continue;
    EXPECT_LE(n.rows[*n.best].quality.hi(), r.bound);
    EXPECT_TRUE(n.rows[*n.best].out);
  }
}

TEST(CantorSearch, RejectsBadTargets) {
  EXPECT_THROW(extrinsic_search_cantor(parse_coordinate("rat:1/4"), 1, 5, 8), RationalPoint);
  EXPECT_THROW(extrinsic_search_cantor(parse_coordinate("dig:3:per:02"), 1, 5, 8), RationalPoint);
  EXPECT_THROW(extrinsic_search_cantor(parse_coordinate("dig:3:tm:01"), 1, 5, 8), InvalidInput);
  EXPECT_THROW(extrinsic_search_cantor(parse_coordinate("dig:10:tm:02"), 1, 5, 8), InvalidInput);
}

TEST(GeneralSearch, CantorWitnesses) {
  const TargetPoint x = parse_point("dig:3:tm:02");
  const GeneralSearchResult r = extrinsic_search_general(x, cantor_oracle, 8, {BigInt(100), BigInt(1000)});
  ASSERT_EQ(r.witnesses.size(), 2u);
  EXPECT_EQ(general_quality_bound_pow_d(8, 1), 289);
  for (const auto& w : r.witnesses) {
    EXPECT_GE(w.pair.r0.q, w.min_q0);
    EXPECT_GE(w.index, 8u);
    EXPECT_LE(w.index, 16u);
    EXPECT_TRUE(w.within_progression_bound);
    EXPECT_LE(w.quality.hi(), 289);
    EXPECT_EQ(cantor_oracle(w.r.point()), Verdict::kOut);
  }
}

TEST(GeneralSearch, ZeroWindowScansOnlyTheGoodPairPoint) {
  const TargetPoint x = parse_point("dig:3:tm:02");
  const GeneralSearchResult r = extrinsic_search_general(x, cantor_oracle, 0, {BigInt(100), BigInt(1000), BigInt(5000)});
  EXPECT_EQ(r.witnesses.size() + r.window_exhausted.size(), 3u);
  for (const auto& w : r.witnesses) {
    EXPECT_EQ(w.index, 0u);
    EXPECT_EQ(w.r, w.pair.r0);
  }
}

TEST(GeneralSearch, RationalSegmentExhaustsWindow) {
  // Points on the Sierpinski base edge: every progression point near x lies
  // on the rational line y = 0, which is inside the attractor.
  const TargetPoint x = parse_point("quad:(-1+1*sqrt(5))/2,rat:0");
  const GeneralSearchResult r =
      extrinsic_search_general(x, ifs_oracle(sierpinski_right_system()), 4, {BigInt(100), BigInt(1000)});
  EXPECT_TRUE(r.witnesses.empty());
  EXPECT_EQ(r.window_exhausted.size(), 2u);
}

TEST(ScaleProfile, DecadeBuckets) {
  const auto p = scale_profile({{BigInt(5), RationalInterval(BigRational(3))},
                                {BigInt(7), RationalInterval(BigRational(2))},
                                {BigInt(150), RationalInterval(BigRational(9))}});
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[0].lo, 1);
  EXPECT_EQ(p[0].hi, 10);
  EXPECT_EQ(p[0].witness, 1u);
  EXPECT_EQ(p[0].min_quality.lo(), 2);
  EXPECT_FALSE(p[1].witness.has_value());
  EXPECT_EQ(p[2].lo, 100);
  EXPECT_EQ(p[2].witness, 2u);
}
