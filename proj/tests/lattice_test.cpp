#include <gtest/gtest.h>

#include "xda/lattice.hpp"

using namespace xda;

namespace {

ApproxVector av(std::initializer_list<long> p, long q) { return {{p.begin(), p.end()}, BigInt(q)}; }

GoodPair pair_of(const ApproxVector& r0, const ApproxVector& rinf) { return {r0, rinf, r0.p.size(), 0, {}}; }

}  // namespace

TEST(GoodPair, VerifiesConvergentPairs) {
  const TargetPoint g = parse_point("quad:(-1+1*sqrt(5))/2");
  EXPECT_TRUE(verify_good_pair(g, pair_of(av({5}, 8), av({3}, 5))));
  const TargetPoint s = parse_point("quad:(-1+1*sqrt(2))/1");
  EXPECT_TRUE(verify_good_pair(s, pair_of(av({5}, 12), av({2}, 5))));
  // Dependent vectors and too-large residuals are rejected.
  EXPECT_FALSE(verify_good_pair(g, pair_of(av({5}, 8), av({10}, 16))));
  EXPECT_FALSE(verify_good_pair(g, pair_of(av({5}, 8), av({1}, 2))));
}

TEST(GoodPair, SearchInvariants) {
  for (const char* spec : {"quad:(-1+1*sqrt(5))/2", "quad:(-1+1*sqrt(2))/1", "dig:3:tm:02",
                           "quad:(-1+1*sqrt(2))/1,quad:(-1+1*sqrt(3))/1"}) {
    const TargetPoint x = parse_point(spec);
    for (long Q : {5L, 10L, 100L}) {
      const GoodPair g = good_pair_search(x, Q);
      EXPECT_GE(g.r0.q, Q) << spec;
      EXPECT_LE(g.rinf.q, g.r0.q) << spec;
      EXPECT_TRUE(independent(g.r0, g.rinf)) << spec;
      EXPECT_TRUE(verify_good_pair(x, g)) << spec;
    }
  }
}

TEST(GoodPair, DeterministicAcrossWorkers) {
  const TargetPoint x = parse_point("quad:(-1+1*sqrt(2))/1,quad:(-1+1*sqrt(3))/1");
  GoodPairOptions one, four;
  four.workers = 4;
  for (long Q : {10L, 50L, 200L}) {
    const GoodPair a = good_pair_search(x, Q, one);
    const GoodPair b = good_pair_search(x, Q, four);
    const GoodPair c = good_pair_search(x, Q, one);
    EXPECT_EQ(a.r0, b.r0);
    EXPECT_EQ(a.rinf, b.rinf);
    EXPECT_EQ(a.r0, c.r0);
    EXPECT_EQ(a.rinf, c.rinf);
  }
}

TEST(GoodPair, RationalTargetRejected) {
  EXPECT_THROW(good_pair_search(parse_point("rat:1/3"), 5), RationalPoint);
  EXPECT_THROW(good_pair_search(parse_point("dig:3:per:02"), 5), RationalPoint);
}

TEST(GoodPair, HeightCap) {
  GoodPairOptions opt;
  opt.cap = 50;
  EXPECT_THROW(good_pair_search(parse_point("quad:(-1+1*sqrt(5))/2"), 100, opt), HeightCapExceeded);
}

TEST(Progression, Entries) {
  const Progression pr = make_progression(pair_of(av({5}, 8), av({3}, 5)), 4);
  ASSERT_EQ(pr.entries.size(), 5u);
  EXPECT_EQ(pr.entries[0], av({5}, 8));
  EXPECT_EQ(pr.entries[2], av({11}, 18));
  EXPECT_EQ(make_progression(pair_of(av({0}, 1), av({1}, 1)), 4).entries[4], av({4}, 5));
}

TEST(Progression, BoundExamples) {
  const TargetPoint g = parse_point("quad:(-1+1*sqrt(5))/2");
  EXPECT_TRUE(progression_bound_certify(g, av({11}, 18), 2));
  EXPECT_TRUE(progression_bound_certify(g, av({5}, 8), 0));
  const TargetPoint s = parse_point("quad:(-1+1*sqrt(2))/1");
  EXPECT_TRUE(progression_bound_certify(s, av({7}, 17), 1));
  // |5x - 1| ~ 2.09 exceeds 1/5.
  EXPECT_FALSE(progression_bound_certify(g, av({1}, 5), 0));
}

// Every entry of a verified pair's progression meets the index bound.
TEST(ProgressionProperty, BoundHoldsAlongProgression) {
  for (const char* spec : {"quad:(-1+1*sqrt(5))/2", "dig:3:seed:3", "dig:7:tm:16",
                           "quad:(-1+1*sqrt(2))/1,quad:(-1+1*sqrt(3))/1",
                           "dig:3:tm:02,dig:5:seed:1,quad:(-2+1*sqrt(7))/1"}) {
    const TargetPoint x = parse_point(spec);
    for (long Q : {20L, 300L}) {
      const GoodPair g = good_pair_search(x, Q);
      const Progression pr = make_progression(g, 40);
      for (std::size_t i = 0; i < pr.entries.size(); ++i) {
        EXPECT_TRUE(progression_bound_certify(x, pr.entries[i], i)) << spec << " i=" << i;
      }
    }
  }
}

TEST(Quality, Examples) {
  EXPECT_EQ(quality(parse_point("rat:1/3"), {BigInt(1)}, 3).hi(), 0);
  const RationalInterval q = quality(parse_point("quad:(-1+1*sqrt(5))/2"), {BigInt(5)}, 8);
  // 64 (5/8 - x) = 0.44582472000672971491...
  const BigRational ref = parse_rational("0.44582472000672971491");
  EXPECT_LT(abs(q.midpoint() - ref), BigRational(1, 1000000000000));
  EXPECT_LE(q.lo(), ref + BigRational(1, 100000000000000000));
  EXPECT_GE(q.hi(), ref - BigRational(1, 100000000000000000));
  EXPECT_LT(q.width(), BigRational(1, 1000000000000));
  const RationalInterval q2 = quality(parse_point("rat:0,rat:0"), {BigInt(1), BigInt(1)}, 4);
  EXPECT_TRUE(q2.contains(BigRational(2)));
  EXPECT_TRUE(q2.is_point());
}

TEST(Survivors, AreSortedAndSatisfyBound) {
  const TargetPoint x = parse_point("dig:3:tm:02");
  const auto s = survivors(x, 1000);
  ASSERT_FALSE(s.empty());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) {
      EXPECT_LT(s[i - 1].q, s[i].q);
    }
    EXPECT_LE(s[i].q, 1000);
    EXPECT_TRUE(certify_residuals(x, s[i], BigRational(1, 1000), "s", nullptr));
  }
}
