#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "bbibp/error.hpp"
#include "bbibp/funcspace.hpp"
#include "bbibp/mollify.hpp"
#include "bbibp/montecarlo.hpp"
#include "bbibp/quadrature.hpp"

using namespace bbibp;

namespace {
constexpr double kPi = std::numbers::pi;

double value_at(const GridFunction& p, double t) {
  return p[static_cast<std::size_t>(std::lround(t * static_cast<double>(p.n_intervals())))];
}
}  // namespace

TEST(PathEnsemble, PinningAndShape) {
  const auto e = sample_bridge(500, 128, 1);
  EXPECT_TRUE(e.materialized());
  std::vector<double> buf(129);
  for (std::size_t i = 0; i < 500; ++i) {
    e.fill_path(i, buf);
    EXPECT_EQ(buf.front(), 0.0);
    EXPECT_EQ(buf.back(), 0.0);
  }
  EXPECT_LE(std::abs(e.gate_mean()), e.gate_bound());
}

TEST(PathEnsemble, Validation) {
  EXPECT_THROW(sample_bridge(0, 64, 0), InvalidArgument);
  EXPECT_THROW(sample_bridge(10, 1, 0), InvalidArgument);
  EnsembleOptions o;
  o.antithetic = true;
  EXPECT_THROW(sample_bridge(11, 64, 0, o), InvalidArgument);
}

TEST(PathEnsemble, MemoryBudget) {
  EnsembleOptions o;
  o.memory_budget_bytes = 1024;
  o.storage = Storage::materialized;
  EXPECT_THROW(sample_bridge(1000, 64, 0, o), ResourceError);
  o.storage = Storage::automatic;
  const auto e = sample_bridge(1000, 64, 0, o);
  EXPECT_FALSE(e.materialized());
  const auto m = sample_bridge(1000, 64, 0);
  for (std::size_t i : {0u, 17u, 999u}) {
    const auto a = e.path(i);
    const auto b = m.path(i);
    for (std::size_t j = 0; j <= 64; ++j) EXPECT_EQ(a[j], b[j]);
  }
}

TEST(PathEnsemble, SameSeedIsBitwiseIdentical) {
  const auto a = sample_bridge(300, 64, 42);
  const auto b = sample_bridge(300, 64, 42);
  const auto c = sample_bridge(300, 64, 43);
  bool differs = false;
  for (std::size_t i = 0; i < 300; ++i) {
    const auto pa = a.path(i), pb = b.path(i), pc = c.path(i);
    for (std::size_t j = 0; j <= 64; ++j) {
      EXPECT_EQ(pa[j], pb[j]);
      differs = differs || pa[j] != pc[j];
    }
  }
  EXPECT_TRUE(differs);
}

TEST(PathEnsemble, Antithetic) {
  EnsembleOptions o;
  o.antithetic = true;
  const auto e = sample_bridge(100, 64, 5, o);
  for (std::size_t i = 0; i < 100; i += 2) {
    const auto a = e.path(i), b = e.path(i + 1);
    for (std::size_t j = 0; j <= 64; ++j) EXPECT_EQ(a[j], -b[j]);
  }
  const auto est = estimate([](const GridFunction& p) { return p[32]; }, e);
  EXPECT_NEAR(est.mean, 0.0, 1e-15);
  EXPECT_EQ(est.n, 50u);
}

TEST(PathEnsemble, VarianceAndCovariance) {
  const auto e = sample_bridge(100000, 64, 0);
  const auto v = estimate([](const GridFunction& p) { return p[32] * p[32]; }, e);
  EXPECT_NEAR(v.mean, 0.25, 4 * v.std_error);
  const auto c = estimate([](const GridFunction& p) { return p[16] * p[48]; }, e);
  EXPECT_NEAR(c.mean, 0.0625, 4 * c.std_error);
}

TEST(Estimate, ConstantAndCentered) {
  const auto e = sample_bridge(2000, 64, 3);
  const auto one = estimate([](const GridFunction&) { return 1.0; }, e);
  EXPECT_EQ(one.mean, 1.0);
  EXPECT_EQ(one.std_error, 0.0);
  EXPECT_EQ(one.n, 2000u);
  const auto mid = estimate([](const GridFunction& p) { return p[32]; }, e);
  EXPECT_NEAR(mid.mean, 0.0, 4 * mid.std_error);
}

TEST(Estimate, NonFiniteReportsPathIndex) {
  const auto e = sample_bridge(3000, 64, 3);
  try {
    estimate(
        [&e](const GridFunction& p) {
          return p[10] == e.path(2077)[10] ? std::numeric_limits<double>::infinity() : 0.0;
        },
        e);
    FAIL() << "expected NonFinitePathError";
  } catch (const NonFinitePathError& err) {
    EXPECT_EQ(err.path_index(), 2077u);
  }
}

TEST(Estimate, FoldedIntegralMatchesOracle) {
  const auto h = DirectionFunction::bump(0.25, 0.75);
  const std::size_t n = 256;
  const auto e = sample_bridge(50000, n, 9);
  const auto est = estimate(
      [&](const GridFunction& p) {
        double s = 0.0;
        for (std::size_t i = 1; i < n; ++i) s += h.derivative2(p.time(i)) * std::abs(p[i]);
        return s / static_cast<double>(n);
      },
      e);
  double oracle = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    oracle += h.derivative2(t) * std::sqrt(2 * (t - t * t) / kPi);
  }
  oracle /= static_cast<double>(n);
  EXPECT_NEAR(est.mean, oracle, 3 * est.std_error);
}

TEST(Estimate, VectorMatchesScalar) {
  const auto e = sample_bridge(3000, 64, 8);
  const PathFunctional fs[] = {[](const GridFunction& p) { return p[20]; },
                               [](const GridFunction& p) { return p[40] * p[40]; }};
  const auto many = estimate_many(fs, e);
  for (int k = 0; k < 2; ++k) {
    const auto one = estimate(fs[k], e);
    EXPECT_DOUBLE_EQ(many[k].mean, one.mean);
    EXPECT_DOUBLE_EQ(many[k].std_error, one.std_error);
  }
}

TEST(McSTransform, Examples) {
  const auto e = sample_bridge(20000, 128, 4);
  const auto one = mc_s_transform([](const GridFunction&) { return 1.0; }, family::sine(1), e);
  EXPECT_EQ(one.mean, 1.0);
  EXPECT_EQ(one.std_error, 0.0);
  const auto phi = family::monomial(2);
  const auto pt = mc_s_transform([](const GridFunction& p) { return value_at(p, 0.375); }, phi, e);
  EXPECT_NEAR(pt.mean, h_transform(phi, 0.375), 3 * pt.std_error);
}

TEST(McSTransform, DonskerDiracSequence) {
  const double t = 0.5;
  const double kappa = 1e-3;
  const auto e = sample_bridge(100000, 64, 6);
  const auto d = mc_s_transform(
      [&](const GridFunction& p) { return dirac_sequence(kappa, value_at(p, t)); },
      family::constant(0.0), e);
  const double v = t - t * t;
  const double limit = 1 / std::sqrt(2 * kPi * v);
  const double bias = 1 / std::sqrt(2 * kPi * (v + kappa)) - limit;
  EXPECT_NEAR(d.mean, limit, 3 * d.std_error + std::abs(bias));
}

TEST(LocalTime, ExactDiscreteExpectation) {
  // Oracle: mpmath sum of trapezoid weights times erf(w / sqrt(2 v)) divided by w.
  EXPECT_NEAR(local_time_expectation(4096, 1.0, 0.01), 2.490318543765015957, 1e-12);
  EXPECT_NEAR(local_time_expectation(256, 1.0, 1.0 / 32), 2.475325764499197728, 1e-12);
  EXPECT_NEAR(local_time_expectation(256, 0.5, 1.0 / 32), 1.237662882249598864, 1e-12);
  EXPECT_NEAR(local_time_expectation(256, 1.0, 1.0 / 32, LocalTimeWindow::central),
              0.5 * 2.475325764499197728, 1e-12);
}

TEST(LocalTime, MonteCarloAgreesWithExpectation) {
  const auto e = sample_bridge(20000, 256, 12);
  const auto m = mc_local_time(e, 1.0, 1.0 / 32);
  EXPECT_NEAR(m.mean, local_time_expectation(256, 1.0, 1.0 / 32), 3 * m.std_error);
  const auto small = mc_local_time(e, 1.0 / 256, 1.0 / 32);
  EXPECT_LT(small.mean, 0.1);
  EXPECT_GE(small.mean, 0.0);
}

TEST(LocalTime, ResolutionAndDomain) {
  const auto e = sample_bridge(100, 64, 0);
  EXPECT_THROW(mc_local_time(e, 1.0, 0.01), ResolutionError);
  EXPECT_THROW(mc_local_time(e, 0.0, 0.1), DomainError);
  EXPECT_THROW(mc_local_time(e, 1.5, 0.1), DomainError);
}

TEST(RegularizedPairing, Errors) {
  const auto e = sample_bridge(100, 256, 0);
  const auto one = [](const GridFunction&) { return 1.0; };
  EXPECT_THROW(mc_regularized_pairing(Mollifier(0.1), 1e-2, DirectionFunction::bump(0.05, 0.5),
                                      one, e),
               SupportError);
  EXPECT_THROW(mc_regularized_pairing(Mollifier(0.1), 0.0, DirectionFunction::bump(0.25, 0.75),
                                      one, e),
               DomainError);
  const auto coarse = sample_bridge(100, 64, 0);
  EXPECT_THROW(mc_regularized_pairing(Mollifier(0.02), 1e-2, DirectionFunction::bump(0.25, 0.75),
                                      one, coarse),
               ResolutionError);
}

TEST(RegularizedPairing, SweepMatchesSingle) {
  const auto e = sample_bridge(500, 256, 2);
  const Mollifier m(0.1);
  const auto h = DirectionFunction::bump(0.25, 0.75);
  const double ks[] = {1e-2, 5e-3};
  const PathFunctional gs[] = {[](const GridFunction&) { return 1.0; },
                               [](const GridFunction& p) { return p[100]; }};
  const auto sweep = mc_regularized_pairing_sweep(m, ks, h, gs, e);
  ASSERT_EQ(sweep.size(), 4u);
  EXPECT_DOUBLE_EQ(sweep[3].mean, mc_regularized_pairing(m, 5e-3, h, gs[1], e).mean);
  EXPECT_DOUBLE_EQ(sweep[0].mean, mc_regularized_pairing(m, 1e-2, h, gs[0], e).mean);
}

TEST(SmoothedDerivative, SecondMomentIsRenormConstant) {
  const Mollifier m(0.1);
  const std::size_t n = 1024;
  const auto e = sample_bridge(20000, n, 21);
  const GridSmoother sm(m, n);
  const auto est = estimate(
      [&](const GridFunction& p) {
        const double d = sm.derivative_at(p.values(), 512);
        return d * d;
      },
      e);
  EXPECT_NEAR(est.mean, renorm_constant(m, 0.5), 3 * est.std_error);
}

TEST(WickExponential, ShiftApproximatesQ) {
  const auto eta = family::cosine(1);
  const WickExponential w(eta, 1024);
  for (std::size_t i = 0; i <= 1024; i += 64) {
    const double t = i / 1024.0;
    EXPECT_NEAR(w.shift()[i], q_apply(eta, t), 1e-6);
  }
  const double qe = integrate([&](double t) { return q_apply(eta, t) * eta(t); });
  EXPECT_NEAR(w.variance(), qe, 1e-6);
}

TEST(WickExponential, GridMismatch) {
  const WickExponential w(family::constant(1.0), 64);
  std::vector<double> path(33, 0.0);
  EXPECT_THROW(w.pairing(path), InvalidArgument);
}

TEST(KsStatistic, Basic) {
  EXPECT_THROW(ks_statistic_normal({}), InvalidArgument);
  EXPECT_NEAR(ks_statistic_normal({0.0}), 0.5, 1e-15);
}
