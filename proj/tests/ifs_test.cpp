#include <gtest/gtest.h>

#include <random>

#include "xda/ifs.hpp"

using namespace xda;

namespace {

Vec r1(long p, long q) { return {QuadScalar(BigRational(p, q))}; }

std::vector<std::string> words_of(const CoverResult& c, std::size_t alphabet) {
  std::vector<std::string> out;
  for (const auto& w : c.words) out.push_back(word_string(w, alphabet));
  return out;
}

}  // namespace

TEST(Osc, BuiltinSystems) {
  EXPECT_TRUE(check_osc(cantor_system()).verified);
  EXPECT_TRUE(check_osc(koch_system()).verified);
  EXPECT_TRUE(check_osc(sierpinski_right_system()).verified);
  EXPECT_TRUE(check_osc(cantor_dust_system()).verified);
  const OscResult o = check_osc(overlap_system());
  EXPECT_FALSE(o.verified);
  ASSERT_TRUE(o.pair.has_value());
  EXPECT_EQ(o.pair->first, 0u);
  EXPECT_EQ(o.pair->second, 1u);
  ASSERT_TRUE(o.witness.has_value());
  const Vec& w = *o.witness;
  EXPECT_TRUE(Polytope::interval(QuadScalar(BigRational(1, 4)), QuadScalar(BigRational(1, 2))).contains_in_interior(w));
}

TEST(Cover, CantorExamples) {
  const IFSystem c = cantor_system();
  const CoverResult a = cover(c, Polytope::interval(0, QuadScalar(BigRational(1, 9))));
  EXPECT_EQ(words_of(a, 2), std::vector<std::string>{"11"});
  EXPECT_EQ(a.ratios[0], BigRational(1, 9));
  const CoverResult b = cover(c, Polytope::interval(0, 1));
  ASSERT_EQ(b.words.size(), 1u);
  EXPECT_TRUE(b.words[0].empty());
}

TEST(Cover, KochBallAroundPeak) {
  const IFSystem k = koch_system();
  const Vec z = koch_peak();
  const QuadScalar r(BigRational(1, 9));
  const Polytope box = Polytope::box({z[0] - r, z[1] - r}, {z[0] + r, z[1] + r});
  const CoverResult c = cover(k, box);
  EXPECT_EQ(words_of(c, 4), (std::vector<std::string>{"23", "24", "31", "32"}));
  for (const auto& ratio : c.ratios) {
    EXPECT_LE(QuadScalar(ratio), c.diameter);
    EXPECT_GT(QuadScalar(ratio), QuadScalar(c.gamma) * c.diameter);
  }
}

TEST(Membership, CantorExamples) {
  const IFSystem c = cantor_system();
  const MembershipVerdict a = membership(c, r1(1, 4));
  ASSERT_EQ(a.verdict, Verdict::kIn);
  EXPECT_TRUE(verify_in(c, r1(1, 4), a.prefix, a.period));
  const MembershipVerdict b = membership(c, r1(1, 2));
  ASSERT_EQ(b.verdict, Verdict::kOut);
  EXPECT_EQ(b.depth, 1u);
  EXPECT_TRUE(verify_out(c, r1(1, 2), 1));
  EXPECT_EQ(membership(c, r1(1, 3)).verdict, Verdict::kIn);
  EXPECT_EQ(membership(c, r1(2, 1)).verdict, Verdict::kOut);
}

TEST(Membership, KochPeakAndExterior) {
  const IFSystem k = koch_system();
  const MembershipVerdict v = membership(k, koch_peak());
  ASSERT_EQ(v.verdict, Verdict::kIn);
  EXPECT_TRUE(verify_in(k, koch_peak(), v.prefix, v.period));
  const Vec outside = {QuadScalar(BigRational(1, 2)), QuadScalar(BigRational(1, 50))};
  const MembershipVerdict o = membership(k, outside);
  ASSERT_EQ(o.verdict, Verdict::kOut);
  EXPECT_TRUE(verify_out(k, outside, o.depth));
}

TEST(Membership, FieldMismatch) {
  const Vec bad = {QuadScalar::sqrt_of(2), QuadScalar(0)};
  EXPECT_THROW(membership(koch_system(), bad), FieldMismatch);
}

TEST(CantorMembership, Examples) {
  EXPECT_TRUE(cantor_membership(BigRational(1, 4)));
  EXPECT_FALSE(cantor_membership(BigRational(1, 2)));
  EXPECT_TRUE(cantor_membership(BigRational(1, 3)));
  EXPECT_TRUE(cantor_membership(BigRational(0)));
  EXPECT_TRUE(cantor_membership(BigRational(1)));
  EXPECT_TRUE(cantor_membership(BigRational(3, 4)));
  EXPECT_FALSE(cantor_membership(BigRational(4, 9)));
  EXPECT_THROW(cantor_membership(BigRational(-1, 3)), InvalidInput);
  EXPECT_EQ(cantor_grid_members(1), (std::vector<BigRational>{0, BigRational(1, 3), BigRational(2, 3), 1}));
}

// The exact ternary test and the generic IFS decision procedure agree on
// every grid point and on random rationals.
TEST(MembershipProperty, CantorOraclesAgree) {
  const IFSystem c = cantor_system();
  std::mt19937_64 rng(23);
  std::vector<BigRational> pts;
  for (long k = 0; k <= 243; ++k) pts.push_back(make_rational(k, 243));
  for (int t = 0; t < 300; ++t) {
    const long q = 1 + static_cast<long>(rng() % 500);
    pts.push_back(make_rational(static_cast<long>(rng() % (q + 1)), q));
  }
  for (const auto& r : pts) {
    const MembershipVerdict v = membership(c, {QuadScalar(r)});
    ASSERT_NE(v.verdict, Verdict::kUnknown) << r;
    EXPECT_EQ(v.verdict == Verdict::kIn, cantor_membership(r)) << r;
    if (v.verdict == Verdict::kIn) {
      EXPECT_TRUE(verify_in(c, {QuadScalar(r)}, v.prefix, v.period));
    } else {
      EXPECT_TRUE(verify_out(c, {QuadScalar(r)}, v.depth));
    }
  }
}

TEST(Porosity, CantorCertified) {
  std::vector<BigRational> scales;
  for (unsigned long k = 1; k <= 6; ++k) scales.push_back(BigRational(1) / BigRational(ipow(3, k)));
  const IFSystem c = cantor_system();
  const PorosityResult p = line_porosity(c, default_line(c), BigRational(1, 10), scales);
  EXPECT_TRUE(p.certified);
  EXPECT_FALSE(p.counterexample.has_value());
  EXPECT_GE(p.best_epsilon, QuadScalar(BigRational(1, 10)));
}

TEST(Porosity, FullIntervalHasNoGaps) {
  const IFSystem h = halves_system();
  const PorosityResult p = line_porosity(h, default_line(h), BigRational(1, 100), {BigRational(1, 4), BigRational(1, 16)});
  EXPECT_FALSE(p.certified);
  EXPECT_TRUE(p.counterexample.has_value());
}

TEST(Porosity, KochOnTheBaseLine) {
  std::vector<BigRational> scales;
  for (unsigned long k = 1; k <= 4; ++k) scales.push_back(BigRational(1) / BigRational(ipow(3, k)));
  const Line axis = Line::through({QuadScalar(0), QuadScalar(0)}, {QuadScalar(1), QuadScalar(0)});
  const PorosityResult p = line_porosity(koch_system(), axis, BigRational(1, 10), scales);
  EXPECT_TRUE(p.certified);
}

TEST(LineTrace, KochBaseLineIsCantorTrace) {
  const Line axis = Line::through({QuadScalar(0), QuadScalar(0)}, {QuadScalar(1), QuadScalar(0)});
  const IFSystem c = cantor_system();
  for (std::size_t depth = 1; depth <= 4; ++depth) {
    const auto k = line_trace(koch_system(), axis, depth);
    const auto t = line_trace(c, default_line(c), depth);
    ASSERT_EQ(k.size(), t.size()) << depth;
    for (std::size_t i = 0; i < k.size(); ++i) {
      EXPECT_EQ(k[i].lo, t[i].lo);
      EXPECT_EQ(k[i].hi, t[i].hi);
    }
  }
}

TEST(SegmentScan, SierpinskiBaseEdge) {
  for (std::size_t depth : {4u, 6u}) {
    const SegmentScanResult r = segment_scan(sierpinski_right_system(), depth, BigRational(1, 20));
    ASSERT_TRUE(r.found()) << depth;
    EXPECT_EQ(r.segments[0].length, QuadScalar(1));
  }
}

TEST(SegmentScan, NoneAtResolution) {
  EXPECT_FALSE(segment_scan(koch_system(), 4, BigRational(1, 20)).found());
  EXPECT_FALSE(segment_scan(cantor_system(), 5, BigRational(1, 100)).found());
  EXPECT_THROW(segment_scan(cantor_system(), 0, BigRational(1, 100)), InvalidInput);
}

TEST(Builtins, NamesResolve) {
  for (const auto& n : builtin_names()) EXPECT_EQ(builtin_system(n).name(), n);
  EXPECT_THROW(builtin_system("nope"), InvalidInput);
}
