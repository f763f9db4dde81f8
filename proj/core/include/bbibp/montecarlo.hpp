#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bbibp/funcspace.hpp"
#include "bbibp/mollify.hpp"

namespace bbibp {

enum class Construction {
  /// B from Gaussian increments, then BB_t = B_t - t B_1. Exact on the grid.
  pinning,
  /// Euler steps of dX = -X/(1-t) dt + dB. Diagnostic only.
  sde_euler,
};

enum class Storage { automatic, materialized, streaming };

struct EnsembleOptions {
  /// Path 2k+1 is the negation of path 2k; estimators average each pair.
  bool antithetic = false;
  std::size_t workers = 1;
  std::size_t memory_budget_bytes = std::size_t{256} << 20;
  /// automatic keeps paths in memory when they fit the budget, else regenerates them.
  Storage storage = Storage::automatic;
  Construction construction = Construction::pinning;
};

/// Seeded bridge paths on a uniform grid. Path i depends only on (seed, i).
class PathEnsemble {
 public:
  PathEnsemble(std::size_t n_paths, std::size_t n_intervals, std::uint64_t seed,
               EnsembleOptions options = {});

  std::size_t n_paths() const noexcept { return n_paths_; }
  std::size_t n_intervals() const noexcept { return n_intervals_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const EnsembleOptions& options() const noexcept { return options_; }
  bool materialized() const noexcept { return !storage_.empty(); }
  double time(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(n_intervals_);
  }

  void fill_path(std::size_t i, std::span<double> out) const;
  GridFunction path(std::size_t i) const;

  /// Sample mean of BB at the grid point nearest 1/2 and its 4-sigma gate.
  double gate_mean() const noexcept { return gate_mean_; }
  double gate_bound() const noexcept { return gate_bound_; }

 private:
  void generate(std::size_t i, std::span<double> out) const;

  std::size_t n_paths_;
  std::size_t n_intervals_;
  std::uint64_t seed_;
  EnsembleOptions options_;
  std::vector<double> storage_;
  double gate_mean_ = 0.0;
  double gate_bound_ = 0.0;
};

PathEnsemble sample_bridge(std::size_t n_paths, std::size_t n_intervals, std::uint64_t seed,
                           EnsembleOptions options = {});

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

using PathFunctional = std::function<double(const GridFunction&)>;
using VectorFunctional = std::function<void(const GridFunction&, std::span<double>)>;

/// One pass over the ensemble for a vector of functionals. Blocks of paths are
/// reduced in index order, so results do not depend on the worker count.
std::vector<MCEstimate> estimate_vector(std::size_t dim, const VectorFunctional& f,
                                        const PathEnsemble& e);
MCEstimate estimate(const PathFunctional& f, const PathEnsemble& e);
std::vector<MCEstimate> estimate_many(std::span<const PathFunctional> fs, const PathEnsemble& e);

/// Mean of g(BB + H^phi), the Cameron-Martin form of S(g(BB))(phi).
MCEstimate mc_s_transform(const PathFunctional& g, const SmoothTestFunction& phi,
                          const PathEnsemble& e);

enum class LocalTimeWindow {
  /// (1/w) int_0^t 1_[0,w)(|BB_s|) ds
  right,
  /// (1/2w) int_0^t 1_(-w,w)(BB_s) ds
  central,
};

MCEstimate mc_local_time(const PathEnsemble& e, double t, double window,
                         LocalTimeWindow kind = LocalTimeWindow::right);
std::vector<MCEstimate> mc_local_time_sweep(const PathEnsemble& e, double t,
                                            std::span<const double> windows,
                                            LocalTimeWindow kind = LocalTimeWindow::right);
/// Exact expectation of the discrete occupation estimator on an n-interval grid.
double local_time_expectation(std::size_t n_intervals, double t, double window,
                              LocalTimeWindow kind = LocalTimeWindow::right);

/// Mean of g(BB) int h_t (Dot_t^2 - c - 1) phi_kappa(BB_t) dt, Dot from smooth_path_deriv.
MCEstimate mc_regularized_pairing(const Mollifier& m, double kappa, const DirectionFunction& h,
                                  const PathFunctional& g, const PathEnsemble& e);
/// Estimates for every (g, kappa) pair from one pass, ordered g-major.
std::vector<MCEstimate> mc_regularized_pairing_sweep(const Mollifier& m,
                                                     std::span<const double> kappas,
                                                     const DirectionFunction& h,
                                                     std::span<const PathFunctional> gs,
                                                     const PathEnsemble& e);

/// Heat kernel phi_kappa(x) = exp(-x^2/(2 kappa)) / sqrt(2 pi kappa).
double dirac_sequence(double kappa, double x);

/// exp((eta, BB) - s^2/2) with trapezoid pairing and s^2 its exact grid variance.
/// Its expectation is one and it tilts the grid law by the shift C a.
class WickExponential {
 public:
  WickExponential(const SmoothTestFunction& eta, std::size_t n_intervals);

  double pairing(std::span<const double> path) const;
  double operator()(const GridFunction& path) const;
  double variance() const noexcept { return variance_; }
  /// Discrete image (C a)_i with a the trapezoid-weighted eta; approximates Q eta.
  const std::vector<double>& shift() const noexcept { return shift_; }

 private:
  std::vector<double> weights_;
  std::vector<double> shift_;
  double variance_;
};

/// Kolmogorov-Smirnov distance of the samples from N(0, 1).
double ks_statistic_normal(std::vector<double> samples);

}  // namespace bbibp
