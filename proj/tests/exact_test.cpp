#include <gtest/gtest.h>

#include <random>

#include "xda/exact.hpp"

using namespace xda;

namespace {

QuadScalar q2(long a, long b) { return QuadScalar(BigRational(a), BigRational(b), 2); }

}  // namespace

TEST(QuadSign, SmallExamples) {
  EXPECT_EQ(sign(q2(-1, 1)), 1);
  EXPECT_EQ(sign(q2(17, -12)), 1);
  EXPECT_EQ(sign(q2(7, -5)), -1);
  EXPECT_EQ(sign(QuadScalar(0)), 0);
}

TEST(QuadSign, NearCancellationUsesIntegers) {
  // 665857 / 470832 is a convergent of sqrt 2; the difference is about 1e-12.
  EXPECT_EQ(sign(q2(665857, -470832)), 1);
  EXPECT_EQ(sign(q2(-665857, 470832)), -1);
  EXPECT_EQ(sign(q2(1393, -985)), -1);
}

TEST(QuadScalar, RadicandNormalization) {
  const QuadScalar a = QuadScalar::sqrt_of(8);
  EXPECT_EQ(a, QuadScalar(BigRational(0), BigRational(2), 2));
  EXPECT_TRUE(QuadScalar::sqrt_of(49).is_rational());
  EXPECT_EQ(QuadScalar::sqrt_of(49), QuadScalar(7));
}

TEST(QuadScalar, MixedRadicalsRejected) {
  EXPECT_THROW(QuadScalar::sqrt_of(2) + QuadScalar::sqrt_of(3), InvalidInput);
}

TEST(QuadScalar, FieldArithmetic) {
  const QuadScalar g = parse_quad("(-1+1*sqrt(5))/2");
  EXPECT_EQ(g * g + g, QuadScalar(1));
  EXPECT_EQ(QuadScalar(1) / g, g + QuadScalar(1));
  EXPECT_EQ(g.floor(), 0);
  EXPECT_EQ((g * QuadScalar(100)).floor(), 61);
  EXPECT_EQ(g.to_string(), "(-1+1*sqrt(5))/2");
}

TEST(QuadScalar, ParseRoundTrip) {
  for (const char* s : {"(3-2*sqrt(7))/5", "(0+1*sqrt(2))/2", "(1+3*sqrt(3))"}) {
    const QuadScalar v = parse_quad(s);
    EXPECT_EQ(parse_quad(v.to_string()), v) << s;
  }
  EXPECT_EQ(parse_quad("3/4"), QuadScalar(BigRational(3, 4)));
  EXPECT_THROW(parse_quad("(1+1*sqrt(2))/0"), InvalidInput);
  EXPECT_EQ(parse_quad("(08+1*sqrt(2))/09"), QuadScalar(BigRational(8, 9), BigRational(1, 9), 2));
  // Non-reduced rational inputs are normalized.
  EXPECT_EQ(QuadScalar(BigRational(6, 8)), QuadScalar(BigRational(3, 4)));
  EXPECT_EQ(QuadScalar(BigRational(5, 5), BigRational(-3, 5), 2), QuadScalar(BigRational(1), BigRational(-3, 5), 2));
}

TEST(Rational, ParseForms) {
  EXPECT_EQ(parse_rational("6/8"), BigRational(3, 4));
  EXPECT_EQ(parse_rational("-0.125"), BigRational(-1, 8));
  EXPECT_EQ(parse_rational(" 7 "), BigRational(7));
  EXPECT_THROW(parse_rational("1/0"), InvalidInput);
  EXPECT_THROW(parse_rational("abc"), InvalidInput);
  // Leading zeros are decimal, not octal.
  EXPECT_EQ(parse_rational("010/09"), BigRational(10, 9));
  EXPECT_EQ(parse_rational("0.4458"), BigRational(2229, 5000));
  EXPECT_EQ(parse_rational("+3/6"), BigRational(1, 2));
}

TEST(Integers, Helpers) {
  EXPECT_EQ(floor_of(BigRational(-7, 2)), -4);
  EXPECT_EQ(ceil_of(BigRational(-7, 2)), -3);
  EXPECT_EQ(root_floor(BigInt(1000), 3), 10);
  EXPECT_EQ(root_floor(BigInt(999), 3), 9);
  EXPECT_TRUE(is_perfect_power(BigInt(1024), 5));
  EXPECT_EQ(round_half_even(BigRational(5, 2)), 2);
  EXPECT_EQ(round_half_even(BigRational(7, 2)), 4);
  const auto [s, r] = squarefree_split(BigInt(72));
  EXPECT_EQ(s * s * r, 72);
  EXPECT_EQ(r, 2);
}

TEST(RationalInterval, EncloseRootWidth) {
  for (unsigned long bits : {8UL, 64UL, 200UL}) {
    const RationalInterval r = enclose_root(BigInt(2), 2, bits);
    EXPECT_LT(r.lo() * r.lo(), 2);
    EXPECT_GT(r.hi() * r.hi(), 2);
    EXPECT_LE(r.width(), make_rational(1, ipow(2, bits)));
  }
  EXPECT_TRUE(enclose_root(BigInt(27), 3, 10).is_point());
}

// Interval results must contain the exact result of the same operation on
// any members of the operands.
TEST(RationalIntervalProperty, OperationsAreSound) {
  std::mt19937_64 rng(11);
  auto rnd = [&] { return make_rational(BigInt(static_cast<long>(rng() % 2001) - 1000), BigInt(static_cast<long>(rng() % 97 + 1))); };
  for (int t = 0; t < 500; ++t) {
    BigRational a0 = rnd(), a1 = rnd(), b0 = rnd(), b1 = rnd();
    if (a0 > a1) std::swap(a0, a1);
    if (b0 > b1) std::swap(b0, b1);
    const RationalInterval A(a0, a1), B(b0, b1);
    const BigRational fa = a0 + (a1 - a0) * make_rational(BigInt(static_cast<long>(rng() % 11)), 10);
    const BigRational fb = b0 + (b1 - b0) * make_rational(BigInt(static_cast<long>(rng() % 11)), 10);
    EXPECT_TRUE((A + B).contains(fa + fb));
    EXPECT_TRUE((A - B).contains(fa - fb));
    EXPECT_TRUE((A * B).contains(fa * fb));
    EXPECT_TRUE(A.abs().contains(abs(fa)));
    EXPECT_TRUE(A.pow(3).contains(fa * fa * fa));
    EXPECT_TRUE(A.pow(2).contains(fa * fa));
    EXPECT_TRUE(A.rounded(16).contains(fa));
  }
}

// Exact comparison of a + b sqrt D against c + e sqrt D agrees with
// 300-bit enclosures whenever those separate.
TEST(QuadSignProperty, AgreesWithEnclosures) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 2000; ++t) {
    const long d = std::vector<long>{2, 3, 5, 7, 13}[rng() % 5];
    auto r = [&] { return static_cast<long>(rng() % 2001) - 1000; };
    const QuadScalar x(BigRational(r(), 7), BigRational(r(), 5), d);
    const QuadScalar y(BigRational(r(), 3), BigRational(r(), 11), d);
    const RationalInterval ex = x.enclose(300), ey = y.enclose(300);
    const int s = sign(x - y);
    if (ex.hi() < ey.lo()) {
      EXPECT_EQ(s, -1);
    }
    if (ex.lo() > ey.hi()) {
      EXPECT_EQ(s, 1);
    }
    EXPECT_EQ(s < 0, x < y);
    EXPECT_EQ(sign(x * x) >= 0, true);
    EXPECT_EQ(sign(x) * sign(y), sign(x * y));
  }
}
