#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bbibp/error.hpp"
#include "bbibp/gaussoracle.hpp"

using namespace bbibp;

TEST(BridgeVar, Examples) {
  EXPECT_EQ(bridge_var(0.0), 0.0);
  EXPECT_EQ(bridge_var(0.5), 0.25);
  for (double t : {0.1, 0.3, 0.45}) EXPECT_NEAR(bridge_var(t), bridge_var(1 - t), 1e-16);
  EXPECT_THROW(bridge_var(1.5), DomainError);
}

TEST(GaussParams, RejectsDegenerateVariance) {
  EXPECT_THROW(GaussParams(0.0, 0.0), DomainError);
  EXPECT_THROW(GaussParams(0.0, -1.0), DomainError);
  EXPECT_THROW(GaussParams(NAN, 1.0), DomainError);
}

TEST(SgnMean, Examples) {
  EXPECT_EQ(sgn_mean(GaussParams(0.0, 0.3)), 0.0);
  EXPECT_NEAR(sgn_mean(GaussParams(50.0, 1.0)), 1.0, 1e-15);
  // Oracle: mpmath erf at 30 digits.
  EXPECT_NEAR(sgn_mean(GaussParams(0.125, 0.25)), 0.19741265136584744848, 1e-15);
  const double bp[] = {0.0};
  EXPECT_NEAR(gauss_expect([](double x) { return sgn(x); }, GaussParams(0.125, 0.25), bp),
              sgn_mean(GaussParams(0.125, 0.25)), 1e-8);
  EXPECT_NEAR(sgn_mean(GaussParams(-0.4, 0.2)), -sgn_mean(GaussParams(0.4, 0.2)), 1e-16);
}

TEST(FoldedMean, Examples) {
  EXPECT_NEAR(folded_mean(GaussParams(0.0, 1.0)), std::sqrt(2.0 / std::numbers::pi), 1e-15);
  EXPECT_NEAR(folded_mean(GaussParams(40.0, 1.0)), 40.0, 1e-12);
  EXPECT_EQ(folded_mean(GaussParams(-0.7, 0.3)), folded_mean(GaussParams(0.7, 0.3)));
  // Oracle: mpmath closed form at 30 digits.
  EXPECT_NEAR(folded_mean(GaussParams(0.3, 0.2)), 0.43422992229739465645, 1e-15);
  const double bp[] = {0.0};
  EXPECT_NEAR(gauss_expect([](double x) { return std::abs(x); }, GaussParams(0.3, 0.2), bp),
              folded_mean(GaussParams(0.3, 0.2)), 1e-10);
}

TEST(GaussHermite, RuleProperties) {
  const auto& r = gauss_hermite_200();
  ASSERT_EQ(r.nodes.size(), 200u);
  double w = 0.0;
  for (std::size_t i = 0; i < 200; ++i) {
    w += r.weights[i];
    if (i > 0) EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    EXPECT_NEAR(r.nodes[i], -r.nodes[199 - i], 1e-15);
  }
  EXPECT_NEAR(w, std::sqrt(std::numbers::pi), 1e-13);
  // Oracle: numpy hermgauss(200).
  EXPECT_NEAR(r.nodes[199], 19.33924867, 1e-8);
  EXPECT_NEAR(r.nodes[100], 0.0784419, 1e-7);
  EXPECT_NEAR(r.weights[100], 0.15592224, 1e-8);
  const auto small = gauss_hermite(3);
  EXPECT_NEAR(small.nodes[2], std::sqrt(1.5), 1e-14);
  EXPECT_NEAR(small.weights[1], 2.0 * std::sqrt(std::numbers::pi) / 3.0, 1e-14);
}

TEST(GaussExpect, Moments) {
  const GaussParams p(0.7, 0.3);
  EXPECT_NEAR(gauss_expect([](double x) { return x; }, p), 0.7, 1e-13);
  EXPECT_NEAR(gauss_expect([](double x) { return x * x; }, p), 0.3 + 0.49, 1e-13);
  EXPECT_NEAR(gauss_expect([](double x) { return std::pow(x - 0.7, 4); }, p), 3 * 0.09, 1e-13);
  // Oracle: mpmath quadrature of tanh against N(0.3, 0.2).
  EXPECT_NEAR(gauss_expect([](double x) { return std::tanh(x); }, GaussParams(0.3, 0.2)),
              0.25094067077470932576, 1e-10);
}

TEST(GaussExpect, IntegrationByPartsIdentities) {
  const double v = 0.21;
  const double shift = 0.35;
  const GaussParams y(0.0, v);
  struct Case {
    RealFn f, d1, d2;
  };
  const Case cases[] = {
      {[](double x) { return std::tanh(x); },
       [](double x) { return 1 / std::pow(std::cosh(x), 2); },
       [](double x) { return -2 * std::tanh(x) / std::pow(std::cosh(x), 2); }},
      {[](double x) { return std::sin(2 * x); }, [](double x) { return 2 * std::cos(2 * x); },
       [](double x) { return -4 * std::sin(2 * x); }},
      {[](double x) { return std::exp(-x * x); }, [](double x) { return -2 * x * std::exp(-x * x); },
       [](double x) { return (4 * x * x - 2) * std::exp(-x * x); }},
  };
  for (const auto& c : cases) {
    const double a = v * gauss_expect([&](double u) { return c.d1(u + shift); }, y);
    const double b = gauss_expect([&](double u) { return u * c.f(u + shift); }, y);
    EXPECT_NEAR(a, b, 1e-8);
    const double c1 = gauss_expect([&](double u) { return u * c.d1(u + shift); }, y);
    const double c2 = gauss_expect([&](double u) { return (u * u / v - 1) * c.f(u + shift); }, y);
    EXPECT_NEAR(c1, c2, 1e-8);
    const double d1 = v * v * gauss_expect([&](double u) { return c.d2(u + shift); }, y);
    const double d2 = gauss_expect([&](double u) { return (u * u - v) * c.f(u + shift); }, y);
    EXPECT_NEAR(d1, d2, 1e-8);
  }
}

TEST(GaussExpect, NonFiniteIntegrandThrows) {
  EXPECT_THROW(gauss_expect([](double x) { return 1.0 / (x - x); }, GaussParams(0.0, 1.0)),
               NonFiniteError);
}

TEST(TanhProfile, Derivatives) {
  const auto p = tanh_profile(2.0, -0.5);
  for (double x : {-1.0, 0.0, 0.4, 2.0}) {
    const double d = 1e-6;
    EXPECT_NEAR(p.derivative1(x), (p.value(x + d) - p.value(x - d)) / (2 * d), 1e-8);
    EXPECT_NEAR(p.derivative2(x), (p.derivative1(x + d) - p.derivative1(x - d)) / (2 * d), 1e-7);
  }
}
