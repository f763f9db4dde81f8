#include <benchmark/benchmark.h>

#include <cmath>

#include "bbibp/funcspace.hpp"
#include "bbibp/gaussoracle.hpp"
#include "bbibp/mollify.hpp"
#include "bbibp/montecarlo.hpp"
#include "bbibp/stransform.hpp"

using namespace bbibp;

static void BM_SampleBridge(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    auto e = sample_bridge(10000, n, 1);
    benchmark::DoNotOptimize(e.gate_mean());
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SampleBridge)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

static void BM_EstimateAbsIntegral(benchmark::State& state) {
  const auto e = sample_bridge(10000, 1024, 2);
  for (auto _ : state) {
    const auto est = estimate(
        [](const GridFunction& p) {
          double s = 0.0;
          for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i]);
          return s;
        },
        e);
    benchmark::DoNotOptimize(est.mean);
  }
}
BENCHMARK(BM_EstimateAbsIntegral)->Unit(benchmark::kMillisecond);

static void BM_SPhiHEval(benchmark::State& state) {
  const auto u = s_phi_h(DirectionFunction::bump(0.25, 0.75));
  const auto phi = family::sine(1);
  for (auto _ : state) benchmark::DoNotOptimize(u.eval(phi, Complex(0.3, 0.7)));
}
BENCHMARK(BM_SPhiHEval)->Unit(benchmark::kMicrosecond);

static void BM_GaussExpect(benchmark::State& state) {
  const GaussParams p(0.3, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauss_expect([](double x) { return std::tanh(x); }, p));
  }
}
BENCHMARK(BM_GaussExpect);

static void BM_SmoothPathDeriv(benchmark::State& state) {
  const Mollifier m(0.05);
  const auto e = sample_bridge(1, 4096, 3);
  const auto g = e.path(0);
  for (auto _ : state) benchmark::DoNotOptimize(smooth_path_deriv(g, m)[2048]);
}
BENCHMARK(BM_SmoothPathDeriv)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
