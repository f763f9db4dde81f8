#include <gtest/gtest.h>

#include <cmath>

#include "bbibp/error.hpp"
#include "bbibp/mollify.hpp"
#include "bbibp/montecarlo.hpp"
#include "bbibp/quadrature.hpp"

using namespace bbibp;

// Oracle: mpmath quadrature at 30 digits of exp(-1/(1-x^2)) on (-1, 1) and of the
// squared normalized bump.
constexpr double kBumpMass = 0.44399381616807943782;
constexpr double kBumpL2Sq = 0.67511681300969752899;

TEST(Mollifier, BaseConstants) {
  EXPECT_NEAR(1.0 / Mollifier::base_normalization(), kBumpMass, 1e-14);
  EXPECT_NEAR(Mollifier::base_l2_sq(), kBumpL2Sq, 1e-14);
}

TEST(Mollifier, SupportSymmetryAndMass) {
  for (double eps : {0.1, 0.05, 0.0125}) {
    const Mollifier m(eps);
    EXPECT_EQ(rho_eval(m, eps), 0.0);
    EXPECT_EQ(rho_eval(m, -eps), 0.0);
    EXPECT_EQ(rho_eval(m, 2 * eps), 0.0);
    EXPECT_EQ(rho_prime(m, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(rho_eval(m, 0.3 * eps), rho_eval(m, -0.3 * eps));
    EXPECT_GE(rho_eval(m, 0.7 * eps), 0.0);
    const double mass = integrate([&](double x) { return m(x); }, QuadratureMode::regular, -eps, eps);
    EXPECT_NEAR(mass, 1.0, 1e-10);
  }
}

TEST(Mollifier, DerivativeMatchesFiniteDifference) {
  const Mollifier m(0.1);
  for (double x : {-0.08, -0.03, 0.01, 0.05, 0.09}) {
    const double d = 1e-7;
    EXPECT_NEAR(m.derivative(x), (m(x + d) - m(x - d)) / (2 * d), 1e-5 * std::abs(m.derivative(x)) + 1e-6);
  }
}

TEST(Mollifier, RejectsBadEpsilon) {
  EXPECT_THROW(Mollifier(0.0), DomainError);
  EXPECT_THROW(Mollifier(0.5), DomainError);
  EXPECT_THROW(Mollifier(-0.1), DomainError);
}

TEST(SmoothPath, ConstantAndLinear) {
  const Mollifier m(0.05);
  const auto c = GridFunction::sample(1024, [](double) { return 3.0; });
  const auto sc = smooth_path(c, m);
  const auto dc = smooth_path_deriv(c, m);
  const auto id = GridFunction::sample(1024, [](double t) { return t; });
  const auto sid = smooth_path(id, m);
  const auto did = smooth_path_deriv(id, m);
  for (std::size_t i = 0; i <= 1024; ++i) {
    const double t = c.time(i);
    if (t <= 0.05 || t >= 0.95) continue;
    // Trapezoid error of the kernel sums at eps * n = 51: ~1e-9 for rho, ~6e-7 for x rho'.
    EXPECT_NEAR(sc[i], 3.0, 1e-8);
    EXPECT_NEAR(dc[i], 0.0, 1e-8);
    EXPECT_NEAR(did[i], 1.0, 1e-6);
  }
  EXPECT_NEAR(sid[512], 0.5, 1e-8);
}

TEST(SmoothPath, DerivativeConsistentWithDifferences) {
  const Mollifier m(0.05);
  const auto g = GridFunction::sample(2048, [](double t) { return std::sin(7 * t) + t * t; });
  const auto s = smooth_path(g, m);
  const auto d = smooth_path_deriv(g, m);
  const double h = g.step();
  for (std::size_t i = 1; i < 2048; ++i) {
    const double t = g.time(i);
    if (t <= 0.1 || t >= 0.9) continue;
    EXPECT_NEAR((s[i + 1] - s[i - 1]) / (2 * h), d[i], 1e-4);
  }
}

TEST(SmoothPath, BridgePathStaysInRange) {
  const auto e = sample_bridge(4, 1024, 11);
  const Mollifier m(0.05);
  for (std::size_t p = 0; p < 4; ++p) {
    const auto g = e.path(p);
    const auto s = smooth_path(g, m);
    double lo = 1e300, hi = -1e300;
    for (double v : g.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    for (std::size_t i = 0; i <= 1024; ++i) {
      const double t = g.time(i);
      if (t <= 0.05 || t >= 0.95) continue;
      EXPECT_GE(s[i], lo - 1e-12);
      EXPECT_LE(s[i], hi + 1e-12);
    }
  }
}

TEST(SmoothPath, ResolutionError) {
  const auto g = GridFunction::sample(64, [](double t) { return t; });
  EXPECT_THROW(smooth_path(g, Mollifier(0.02)), ResolutionError);
  EXPECT_THROW(smooth_path_deriv(g, Mollifier(0.02)), ResolutionError);
  EXPECT_NO_THROW(smooth_path(g, Mollifier(0.04)));
}

TEST(SmoothPath, ConvergesForLipschitzInput) {
  const auto g = GridFunction::sample(4096, [](double t) { return std::abs(t - 0.43); });
  double prev = 0.0;
  for (double eps : {0.08, 0.04, 0.02}) {
    const auto s = smooth_path(g, Mollifier(eps));
    double err = 0.0;
    for (std::size_t i = 0; i <= 4096; ++i) {
      const double t = g.time(i);
      if (t > 0.2 && t < 0.8) err = std::max(err, std::abs(s[i] - g[i]));
    }
    if (prev > 0.0) EXPECT_NEAR(err / prev, 0.5, 0.02);
    prev = err;
  }
}

TEST(DotKernel, ZeroMeanAndSymmetry) {
  const Mollifier m(0.05);
  for (double t : {0.3, 0.5, 0.7}) {
    const auto k = dot_kernel(m, t, 4096);
    EXPECT_NEAR(k.integral(), 0.0, 1e-9);
  }
  // The kernel is rho_eps(u - t) - 1: even about t, and -1 away from it.
  const auto k = dot_kernel(m, 0.5, 4096);
  for (std::size_t i = 0; i < 4096; i += 97) {
    const double u = k.time(i);
    EXPECT_NEAR(k[i], k[4096 - i], 1e-9) << u;
    if (std::abs(u - 0.5) >= 0.05) EXPECT_NEAR(k[i], -1.0, 1e-12) << u;
    else EXPECT_NEAR(k[i], m(u - 0.5) - 1.0, 1e-9) << u;
  }
}

TEST(RenormConstant, ClosedFormAndScaling) {
  const Mollifier m1(0.1);
  const Mollifier m2(0.05);
  // Oracle: kBumpL2Sq / 0.1 - 1 from the mpmath value above.
  EXPECT_NEAR(renorm_closed_form(m1), 5.7511681300969752899, 1e-12);
  EXPECT_NEAR(renorm_constant(m1, 0.5), renorm_closed_form(m1), 1e-6 * renorm_closed_form(m1));
  EXPECT_NEAR(renorm_constant(m2, 0.5), 2 * renorm_constant(m1, 0.5) + 1,
              1e-6 * renorm_closed_form(m2));
  EXPECT_EQ(renorm_constant(m1, 0.5), dot_kernel(m1, 0.5).norm_sq());
}

TEST(RenormConstant, ConstantOnInteriorAndDiffersNearBoundary) {
  const Mollifier m(0.1);
  const double c = renorm_closed_form(m);
  for (double t : {0.11, 0.25, 0.5, 0.75, 0.89}) {
    EXPECT_NEAR(renorm_constant(m, t), c, 1e-6 * c) << t;
  }
  EXPECT_GT(std::abs(renorm_constant(m, 0.04) - c), 1e-2 * c);
}

TEST(MollifiedFunctions, AnalyticMatchesGrid) {
  const Mollifier m(0.05);
  const RealFn f = [](double t) { return std::cos(3 * t); };
  const auto g = GridFunction::sample(4096, f);
  const auto d = smooth_path_deriv(g, m);
  for (std::size_t i : {1024u, 2048u, 3000u}) {
    EXPECT_NEAR(mollified_derivative(f, m, g.time(i)), d[i], 1e-6);
  }
  EXPECT_NEAR(mollified_value(f, m, 0.5), smooth_path(g, m)[2048], 1e-7);
}
