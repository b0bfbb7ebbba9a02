#include <gtest/gtest.h>

#include <random>

#include "xda/ifs.hpp"
#include "xda/rap.hpp"

using namespace xda;

namespace {

std::vector<RationalVec> line_pts(std::initializer_list<BigRational> v) {
  std::vector<RationalVec> out;
  for (const auto& r : v) out.push_back({r});
  return out;
}

BigRational R(long p, long q) { return make_rational(p, q); }

}  // namespace

TEST(RapCheck, SmallProgressionFamily) {
  const auto pts = line_pts({R(2, 3), R(3, 4), R(4, 5)});
  const RapCheck c = rap_check(pts, 2);
  ASSERT_EQ(c.status, RapStatus::kCertified);
  EXPECT_TRUE(verify_rap(*c.certificate));
  // The increment from the family's formula works as well.
  std::vector<std::vector<BigRational>> ratios;
  ASSERT_TRUE(verify_rap(pts, {R(1, 15)}, 2, &ratios));
  EXPECT_EQ(ratios[0][0], R(5, 4));
  EXPECT_EQ(ratios[0][1], R(2, 1));
  EXPECT_EQ(ratios[1][0], R(3, 4));
}

TEST(RapCheck, ExactApAndFailures) {
  const RapCheck ap = rap_check(line_pts({R(0, 1), R(1, 3), R(2, 3), R(1, 1)}), 1);
  ASSERT_EQ(ap.status, RapStatus::kCertified);
  EXPECT_EQ(ap.certificate->increment[0], R(1, 3));
  EXPECT_EQ(rap_check(line_pts({R(0, 1), R(1, 10), R(1, 1)}), 2).status, RapStatus::kRatioFailure);
  EXPECT_EQ(rap_check({{R(0, 1), R(0, 1)}, {R(1, 1), R(0, 1)}, {R(0, 1), R(1, 1)}}, 2).status,
            RapStatus::kNotCollinear);
  EXPECT_THROW(rap_check(line_pts({R(0, 1), R(1, 1)}), R(1, 2)), InvalidInput);
}

TEST(ProgressionFamily, Examples) {
  const auto f = progression_family({BigInt(0)}, 1, {BigInt(1)}, 1, 2);
  ASSERT_EQ(f.points.size(), 3u);
  EXPECT_EQ(f.points[0][0], R(2, 3));
  EXPECT_EQ(f.points[2][0], R(4, 5));
  EXPECT_EQ(f.certificate.increment[0], R(1, 15));

  const auto g = progression_family({BigInt(1)}, 2, {BigInt(1)}, 3, 3);
  ASSERT_EQ(g.points.size(), 4u);
  EXPECT_EQ(g.points[0][0], R(4, 11));
  EXPECT_EQ(g.points[3][0], R(7, 20));
  EXPECT_EQ(g.certificate.increment[0], R(-1, 220));

  const auto h = progression_family({BigInt(1)}, 2, {BigInt(1)}, 3, 0);
  ASSERT_EQ(h.points.size(), 1u);
  EXPECT_EQ(h.points[0][0], R(1, 2));
}

// Projectivized progressions are 2-RAPs for random integer data.
TEST(ProgressionFamilyProperty, AlwaysTwoRap) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 300; ++t) {
    const std::size_t d = 1 + rng() % 3;
    std::vector<BigInt> p0(d), pinf(d);
    for (std::size_t j = 0; j < d; ++j) {
      p0[j] = static_cast<long>(rng() % 2001) - 1000;
      pinf[j] = static_cast<long>(rng() % 2001) - 1000;
    }
    const BigInt q0 = static_cast<unsigned long>(1 + rng() % 5000);
    const BigInt qinf = static_cast<unsigned long>(1 + rng() % 5000);
    const std::size_t n = 1 + rng() % 32;
    try {
      const auto f = progression_family(p0, q0, pinf, qinf, n);
      EXPECT_EQ(f.points.size(), n + 1);
      EXPECT_TRUE(verify_rap(f.certificate));
      EXPECT_LE(hausdorff_to_unit(normalize(f.certificate)), hausdorff_bound(2, f.points.size()));
    } catch (const InvalidInput&) {
      // r0 and rInf projecting to one point is the only rejected case.
      bool same = true;
      for (std::size_t j = 0; j < d; ++j) same = same && q0 * pinf[j] == qinf * p0[j];
      EXPECT_TRUE(same);
    }
  }
}

TEST(Hausdorff, Examples) {
  std::vector<BigRational> grid;
  for (long i = 0; i <= 8; ++i) grid.push_back(R(i, 8));
  EXPECT_EQ(hausdorff_to_unit(grid), R(1, 16));
  EXPECT_EQ(hausdorff_to_unit({R(0, 1), R(1, 4), R(1, 1)}), R(3, 8));
  EXPECT_EQ(hausdorff_bound(2, 3), R(1, 1));
  const auto f = progression_family({BigInt(0)}, 1, {BigInt(1)}, 1, 8);
  EXPECT_LE(hausdorff_to_unit(normalize(f.certificate)), R(1, 4));
}

TEST(LongestAp, Examples) {
  EXPECT_EQ(longest_ap(line_pts({R(0, 1), R(1, 1), R(2, 1), R(3, 1)})).length, 4u);
  EXPECT_EQ(longest_ap(line_pts({R(0, 1), R(1, 7), R(3, 7)})).length, 2u);
}

TEST(LongestAp, CantorGridHasNoFiveTermProgression) {
  std::vector<RationalVec> pts;
  for (const auto& r : cantor_grid_members(7)) pts.push_back({r});
  ASSERT_EQ(pts.size(), 256u);  // reference: exhaustive fraction enumeration
  const APResult ap = longest_ap(pts);
  EXPECT_EQ(ap.length, 4u);
  const std::set<RationalVec> members(pts.begin(), pts.end());
  for (const auto& p : ap.points) EXPECT_TRUE(members.count(p));
}

TEST(LongestRap, Examples) {
  EXPECT_EQ(longest_rap({{R(0, 1), R(0, 1)}, {R(1, 1), R(0, 1)}, {R(0, 1), R(1, 1)}}).length, 2u);
  const RapSearchResult r = longest_rap(line_pts({R(0, 1), R(1, 5), R(2, 5), R(3, 5), R(9, 10)}));
  EXPECT_GE(r.length, 4u);
  EXPECT_TRUE(r.exhausted);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_TRUE(verify_rap(*r.certificate));
}

TEST(LongestRap, CantorDepthFive) {
  std::vector<RationalVec> pts;
  for (const auto& r : cantor_grid_members(5)) pts.push_back({r});
  RapSearchOptions opt;
  opt.budget = 50000000;
  const RapSearchResult r = longest_rap(pts, opt);
  EXPECT_TRUE(r.exhausted);
  EXPECT_EQ(r.length, 8u);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_TRUE(verify_rap(*r.certificate));
}

TEST(LongestRap, BudgetExhaustionIsReported) {
  std::vector<RationalVec> pts;
  for (const auto& r : cantor_grid_members(5)) pts.push_back({r});
  RapSearchOptions opt;
  opt.budget = 1000;
  const RapSearchResult r = longest_rap(pts, opt);
  EXPECT_FALSE(r.exhausted);
}

// A C-RAP stays a C'-RAP for C' >= C and survives affine maps t -> a t + b.
TEST(RapProperty, MonotoneAndAffineInvariant) {
  std::mt19937_64 rng(17);
  int certified = 0;
  for (int t = 0; t < 400; ++t) {
    std::vector<BigRational> ts = {0};
    const std::size_t n = 3 + rng() % 5;
    for (std::size_t i = 1; i < n; ++i) ts.push_back(ts.back() + R(static_cast<long>(10 + rng() % 20), 10));
    std::vector<RationalVec> pts;
    for (const auto& v : ts) pts.push_back({v});
    const RapCheck c = rap_check(pts, 2);
    if (c.status != RapStatus::kCertified) continue;
    ++certified;
    EXPECT_EQ(rap_check(pts, 3).status, RapStatus::kCertified);
    const BigRational a = R(static_cast<long>(rng() % 19) - 9, 7), b = R(static_cast<long>(rng() % 100), 3);
    if (sgn(a) == 0) continue;
    std::vector<RationalVec> img;
    for (const auto& v : ts) img.push_back({a * v + b, -a * v});
    const RapCheck ci = rap_check(img, 2);
    ASSERT_EQ(ci.status, RapStatus::kCertified);
    EXPECT_TRUE(verify_rap(*ci.certificate));
  }
  EXPECT_GT(certified, 100);
}
