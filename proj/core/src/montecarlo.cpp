#include "bbibp/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "bbibp/error.hpp"
#include "bbibp/gaussoracle.hpp"
#include "bbibp/philox.hpp"

namespace bbibp {
namespace {

// Fixed reduction granularity; independent of the worker count.
constexpr std::size_t kBlock = 1024;

struct Welford {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const Welford& o) noexcept {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    const double total = static_cast<double>(n + o.n);
    const double d = o.mean - mean;
    mean += d * static_cast<double>(o.n) / total;
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }

  MCEstimate result() const noexcept {
    MCEstimate e{mean, 0.0, n};
    if (n > 1) {
      e.std_error = std::sqrt(std::max(0.0, m2 / static_cast<double>(n - 1)) /
                              static_cast<double>(n));
    }
    return e;
  }
};

// Runs body(block) for blocks 0..n_blocks-1 on `workers` threads, round-robin.
// The exception from the lowest-numbered failing block is rethrown.
template <class Body>
void for_each_block(std::size_t n_blocks, std::size_t workers, const Body& body) {
  workers = std::max<std::size_t>(1, std::min(workers, n_blocks));
  std::vector<std::exception_ptr> errors(n_blocks);
  auto run = [&](std::size_t w) {
    for (std::size_t b = w; b < n_blocks; b += workers) {
      try {
        body(b);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  for (auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
}

std::vector<double> trapezoid_weights(std::size_t n) {
  std::vector<double> w(n + 1, 1.0 / static_cast<double>(n));
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

}  // namespace

// PathEnsemble

PathEnsemble::PathEnsemble(std::size_t n_paths, std::size_t n_intervals, std::uint64_t seed,
                           EnsembleOptions options)
    : n_paths_(n_paths), n_intervals_(n_intervals), seed_(seed), options_(options) {
  if (n_paths == 0) throw InvalidArgument("sample_bridge needs n_paths >= 1");
  if (n_intervals < 2) throw InvalidArgument("sample_bridge needs n_intervals >= 2");
  if (options_.antithetic && n_paths % 2 != 0) {
    throw InvalidArgument("antithetic ensembles need an even number of paths");
  }
  const std::size_t width = n_intervals + 1;
  const double bytes = static_cast<double>(n_paths) * static_cast<double>(width) * sizeof(double);
  const bool fits = bytes <= static_cast<double>(options_.memory_budget_bytes);
  if (options_.storage == Storage::materialized && !fits) {
    throw ResourceError("ensemble of " + std::to_string(n_paths) + " x " +
                        std::to_string(width) + " values exceeds the memory budget of " +
                        std::to_string(options_.memory_budget_bytes) + " bytes");
  }
  const bool keep = options_.storage == Storage::materialized ||
                    (options_.storage == Storage::automatic && fits);

  const std::size_t gate_index = (n_intervals + 1) / 2;
  const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
  std::vector<Welford> gate(n_blocks);
  std::vector<double> stored;
  if (keep) stored.resize(n_paths * width);
  for_each_block(n_blocks, options_.workers, [&](std::size_t b) {
    std::vector<double> buf(width);
    for (std::size_t i = b * kBlock; i < std::min(n_paths, (b + 1) * kBlock); ++i) {
      std::span<double> out = keep ? std::span<double>(stored.data() + i * width, width)
                                   : std::span<double>(buf);
      generate(i, out);
      gate[b].add(out[gate_index]);
    }
  });
  storage_ = std::move(stored);
  Welford all;
  for (const auto& g : gate) all.merge(g);
  gate_mean_ = all.mean;
  gate_bound_ = 4.0 / std::sqrt(static_cast<double>(n_paths)) *
                std::sqrt(bridge_var(time(gate_index)));
  if (!(std::abs(gate_mean_) <= gate_bound_)) {
    throw Error("bridge ensemble failed the construction gate: mean at t = " +
                std::to_string(time(gate_index)) + " is " + std::to_string(gate_mean_));
  }
}

void PathEnsemble::generate(std::size_t i, std::span<double> out) const {
  if (options_.antithetic && i % 2 == 1) {
    generate(i - 1, out);
    for (double& v : out) v = -v;
    return;
  }
  const std::size_t n = n_intervals_;
  const double dt = 1.0 / static_cast<double>(n);
  const double sd = std::sqrt(dt);
  PathStream stream(seed_, i);
  out[0] = 0.0;
  if (options_.construction == Construction::pinning) {
    double b = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      b += sd * stream.normal();
      out[j] = b;
    }
    const double b1 = out[n];
    for (std::size_t j = 1; j < n; ++j) out[j] -= time(j) * b1;
  } else {
    double x = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) {
      x += -x / (1.0 - time(j)) * dt + sd * stream.normal();
      out[j + 1] = x;
    }
  }
  out[n] = 0.0;
}

void PathEnsemble::fill_path(std::size_t i, std::span<double> out) const {
  if (i >= n_paths_) throw InvalidArgument("path index out of range");
  const std::size_t width = n_intervals_ + 1;
  if (out.size() != width) throw InvalidArgument("path buffer has the wrong size");
  if (!storage_.empty()) {
    std::copy_n(storage_.begin() + static_cast<std::ptrdiff_t>(i * width), width, out.begin());
  } else {
    generate(i, out);
  }
}

GridFunction PathEnsemble::path(std::size_t i) const {
  std::vector<double> v(n_intervals_ + 1);
  fill_path(i, v);
  return GridFunction(std::move(v));
}

PathEnsemble sample_bridge(std::size_t n_paths, std::size_t n_intervals, std::uint64_t seed,
                           EnsembleOptions options) {
  return PathEnsemble(n_paths, n_intervals, seed, options);
}

// Estimation

std::vector<MCEstimate> estimate_vector(std::size_t dim, const VectorFunctional& f,
                                        const PathEnsemble& e) {
  const bool anti = e.options().antithetic;
  const std::size_t units = anti ? e.n_paths() / 2 : e.n_paths();
  const std::size_t n_blocks = (units + kBlock - 1) / kBlock;
  const std::size_t width = e.n_intervals() + 1;
  std::vector<std::vector<Welford>> partial(n_blocks, std::vector<Welford>(dim));

  for_each_block(n_blocks, e.options().workers, [&](std::size_t b) {
    std::vector<double> buf(width);
    std::vector<double> a(dim);
    std::vector<double> c(dim);
    auto eval_path = [&](std::size_t i, std::vector<double>& out) {
      e.fill_path(i, buf);
      f(GridFunction(buf), out);
      for (double v : out) {
        if (!std::isfinite(v)) throw NonFinitePathError(i, "path functional is not finite");
      }
    };
    for (std::size_t u = b * kBlock; u < std::min(units, (b + 1) * kBlock); ++u) {
      if (anti) {
        eval_path(2 * u, a);
        eval_path(2 * u + 1, c);
        for (std::size_t k = 0; k < dim; ++k) partial[b][k].add(0.5 * (a[k] + c[k]));
      } else {
        eval_path(u, a);
        for (std::size_t k = 0; k < dim; ++k) partial[b][k].add(a[k]);
      }
    }
  });

  std::vector<Welford> total(dim);
  for (const auto& blk : partial) {
    for (std::size_t k = 0; k < dim; ++k) total[k].merge(blk[k]);
  }
  std::vector<MCEstimate> out(dim);
  for (std::size_t k = 0; k < dim; ++k) out[k] = total[k].result();
  return out;
}

MCEstimate estimate(const PathFunctional& f, const PathEnsemble& e) {
  return estimate_vector(
      1, [&f](const GridFunction& p, std::span<double> out) { out[0] = f(p); }, e)[0];
}

std::vector<MCEstimate> estimate_many(std::span<const PathFunctional> fs, const PathEnsemble& e) {
  return estimate_vector(
      fs.size(),
      [fs](const GridFunction& p, std::span<double> out) {
        for (std::size_t k = 0; k < fs.size(); ++k) out[k] = fs[k](p);
      },
      e);
}

MCEstimate mc_s_transform(const PathFunctional& g, const SmoothTestFunction& phi,
                          const PathEnsemble& e) {
  const GridFunction shift = h_transform_grid(phi, e.n_intervals());
  return estimate(
      [&](const GridFunction& p) {
        std::vector<double> v(p.values().begin(), p.values().end());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += shift[i];
        return g(GridFunction(std::move(v)));
      },
      e);
}

// Local time

namespace {

void check_local_time_args(std::size_t n_intervals, double t, double window) {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("local time requires 0 < t <= 1");
  if (!(window * static_cast<double>(n_intervals) >= 2.0)) {
    throw ResolutionError("local-time window must cover at least two grid steps");
  }
}

// Weights of the time integral over [0, t] on the grid; last entry holds the partial cell.
std::vector<double> occupation_weights(std::size_t n, double t) {
  const double dt = 1.0 / static_cast<double>(n);
  const auto m = std::min(n, static_cast<std::size_t>(std::floor(t * static_cast<double>(n) + 1e-9)));
  std::vector<double> w(m + 1, dt);
  w.front() = 0.5 * dt;
  w.back() = 0.5 * dt;
  if (m == 0) w[0] = 0.0;
  w.back() += std::max(0.0, t - static_cast<double>(m) * dt);
  return w;
}

}  // namespace

std::vector<MCEstimate> mc_local_time_sweep(const PathEnsemble& e, double t,
                                            std::span<const double> windows,
                                            LocalTimeWindow kind) {
  for (double w : windows) check_local_time_args(e.n_intervals(), t, w);
  const std::vector<double> weights = occupation_weights(e.n_intervals(), t);
  const double factor = kind == LocalTimeWindow::right ? 1.0 : 0.5;
  std::vector<double> ws(windows.begin(), windows.end());
  return estimate_vector(
      ws.size(),
      [&](const GridFunction& p, std::span<double> out) {
        for (std::size_t k = 0; k < ws.size(); ++k) {
          double s = 0.0;
          for (std::size_t i = 0; i < weights.size(); ++i) {
            if (std::abs(p[i]) < ws[k]) s += weights[i];
          }
          out[k] = factor * s / ws[k];
        }
      },
      e);
}

MCEstimate mc_local_time(const PathEnsemble& e, double t, double window, LocalTimeWindow kind) {
  const double w[] = {window};
  return mc_local_time_sweep(e, t, w, kind)[0];
}

double local_time_expectation(std::size_t n_intervals, double t, double window,
                              LocalTimeWindow kind) {
  check_local_time_args(n_intervals, t, window);
  const std::vector<double> weights = occupation_weights(n_intervals, t);
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double ti = static_cast<double>(i) / static_cast<double>(n_intervals);
    const double v = ti - ti * ti;
    const double p = v > 0.0 ? std::erf(window / std::sqrt(2.0 * v)) : 1.0;
    s += weights[i] * p;
  }
  return (kind == LocalTimeWindow::right ? 1.0 : 0.5) * s / window;
}

// Regularized pairing

double dirac_sequence(double kappa, double x) {
  return std::exp(-x * x / (2.0 * kappa)) / std::sqrt(2.0 * std::numbers::pi * kappa);
}

std::vector<MCEstimate> mc_regularized_pairing_sweep(const Mollifier& m,
                                                     std::span<const double> kappas,
                                                     const DirectionFunction& h,
                                                     std::span<const PathFunctional> gs,
                                                     const PathEnsemble& e) {
  if (!(h.support_lo() > m.epsilon() && h.support_hi() < 1.0 - m.epsilon())) {
    throw SupportError("supp(h) must lie inside (eps, 1 - eps)");
  }
  for (double k : kappas) {
    if (!(k > 0.0)) throw DomainError("kappa must be positive");
  }
  const std::size_t n = e.n_intervals();
  const GridSmoother smoother(m, n);
  // Constant on (eps, 1 - eps), which contains supp(h).
  const double c = renorm_constant(m, 0.5);
  const double dt = 1.0 / static_cast<double>(n);
  std::vector<std::size_t> idx;
  std::vector<double> hw;
  for (std::size_t i = 1; i < n; ++i) {
    const double hv = h(e.time(i));
    if (hv != 0.0) {
      idx.push_back(i);
      hw.push_back(hv * dt);
    }
  }
  std::vector<double> ks(kappas.begin(), kappas.end());
  const std::size_t nk = ks.size();
  return estimate_vector(
      gs.size() * nk,
      [&](const GridFunction& p, std::span<double> out) {
        std::vector<double> acc(nk, 0.0);
        for (std::size_t j = 0; j < idx.size(); ++j) {
          const double d = smoother.derivative_at(p.values(), idx[j]);
          const double base = hw[j] * (d * d - c - 1.0);
          const double x = p[idx[j]];
          for (std::size_t k = 0; k < nk; ++k) acc[k] += base * dirac_sequence(ks[k], x);
        }
        for (std::size_t q = 0; q < gs.size(); ++q) {
          const double gv = gs[q](p);
          for (std::size_t k = 0; k < nk; ++k) out[q * nk + k] = gv * acc[k];
        }
      },
      e);
}

MCEstimate mc_regularized_pairing(const Mollifier& m, double kappa, const DirectionFunction& h,
                                  const PathFunctional& g, const PathEnsemble& e) {
  const double k[] = {kappa};
  const PathFunctional gs[] = {g};
  return mc_regularized_pairing_sweep(m, k, h, gs, e)[0];
}

// Wick exponential

WickExponential::WickExponential(const SmoothTestFunction& eta, std::size_t n_intervals) {
  if (n_intervals < 2) throw InvalidArgument("WickExponential needs n_intervals >= 2");
  const std::size_t n = n_intervals;
  weights_ = trapezoid_weights(n);
  for (std::size_t i = 0; i <= n; ++i) {
    weights_[i] *= eta(static_cast<double>(i) / static_cast<double>(n));
  }
  // (C a)_i with C_ij = t_i ^ t_j - t_i t_j, via prefix and suffix sums.
  shift_.assign(n + 1, 0.0);
  std::vector<double> suffix(n + 2, 0.0);
  for (std::size_t j = n + 1; j-- > 0;) {
    const double tj = static_cast<double>(j) / static_cast<double>(n);
    suffix[j] = suffix[j + 1] + (1.0 - tj) * weights_[j];
  }
  double prefix = 0.0;
  variance_ = 0.0;
  for (std::size_t i = 0; i <= n; ++i) {
    const double ti = static_cast<double>(i) / static_cast<double>(n);
    prefix += ti * weights_[i];
    shift_[i] = (1.0 - ti) * prefix + ti * suffix[i + 1];
    variance_ += weights_[i] * shift_[i];
  }
}

double WickExponential::pairing(std::span<const double> path) const {
  if (path.size() != weights_.size()) throw InvalidArgument("WickExponential: grid mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) s += weights_[i] * path[i];
  return s;
}

double WickExponential::operator()(const GridFunction& path) const {
  return std::exp(pairing(path.values()) - 0.5 * variance_);
}

double ks_statistic_normal(std::vector<double> samples) {
  if (samples.empty()) throw InvalidArgument("ks_statistic_normal needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = 0.5 * std::erfc(-samples[i] / std::numbers::sqrt2);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace bbibp
