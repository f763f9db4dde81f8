#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bbibp/funcspace.hpp"
#include "bbibp/gaussoracle.hpp"
#include "bbibp/report.hpp"

namespace bbibp {

struct ScenarioConfig {
  std::uint64_t seed = 0;
  std::size_t n_paths = 100000;
  std::size_t n_intervals = 1024;
  std::size_t local_time_intervals = 4096;
  double local_time_window = 1e-2;
  std::vector<double> epsilons{0.1, 0.05, 0.025, 0.0125};
  std::vector<double> kappas{1e-2, 5e-3, 2.5e-3};
  /// Worker threads for path-block parallelism inside a scenario.
  std::size_t workers = 1;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& key, double fallback) const;
};

/// Deterministic closed-form side of the IBP identity for the Wick exponential of eta.
struct IbpClosedForm {
  double lhs = 0.0;         // int h eta E sgn(BB + Q eta)
  double drift = 0.0;       // -int h'' E|BB + Q eta|
  double reflection = 0.0;  // 2 S(Phi_h)(K eta)
  double closure = 0.0;     // |lhs - drift - reflection| / scale
};

IbpClosedForm ibp_closed_form(const SmoothTestFunction& eta, const DirectionFunction& h);

struct IbpCase {
  SmoothTestFunction eta;
  DirectionFunction h;
};

/// Default 6-pair matrix: eta in {0, 1, sin 2 pi s} times two bumps.
std::vector<IbpCase> default_ibp_matrix();

// Deterministic scenarios.
VerificationReport run_operator_identities(std::span<const SmoothTestFunction> etas,
                                           const ScenarioConfig& cfg = {},
                                           std::size_t n_grid = 4096);
VerificationReport run_lambda_equivalence(std::size_t n_samples, std::uint64_t seed,
                                          const ScenarioConfig& cfg = {});
VerificationReport run_heat_identity(std::span<const SmoothProfile> profiles,
                                     std::span<const SmoothTestFunction> etas,
                                     std::span<const double> t_set,
                                     const ScenarioConfig& cfg = {}, double dt = 1e-3);
VerificationReport run_eps_convergence(const DirectionFunction& h,
                                       std::span<const SmoothTestFunction> phis,
                                       std::span<const double> epsilons,
                                       const ScenarioConfig& cfg = {});
VerificationReport run_renorm(std::span<const double> epsilons, std::span<const double> t_set,
                              const ScenarioConfig& cfg = {});
VerificationReport run_bn_modulus(std::span<const int> n_set, const ScenarioConfig& cfg = {});

// Monte Carlo scenarios.
VerificationReport run_ibp_exponential(const SmoothTestFunction& eta, const DirectionFunction& h,
                                       const ScenarioConfig& cfg = {});
/// One report per case, all cases evaluated in a single pass over a shared ensemble.
std::vector<VerificationReport> run_ibp_matrix(std::span<const IbpCase> cases,
                                               const ScenarioConfig& cfg = {});
VerificationReport run_trig_pairing(const SmoothTestFunction& eta, const DirectionFunction& h,
                                    const ScenarioConfig& cfg = {});
VerificationReport run_local_time(const ScenarioConfig& cfg = {});
VerificationReport run_wick_formula(const ScenarioConfig& cfg = {});
VerificationReport run_continuity_bounds(const ScenarioConfig& cfg = {});

struct ScenarioEntry {
  std::string name;
  std::string summary;
  std::function<std::vector<VerificationReport>(const ScenarioConfig&)> run;
};

/// Scenarios in canonical order, with their default parameters.
const std::vector<ScenarioEntry>& scenario_catalog();
const ScenarioEntry* find_scenario(const std::string& name);

/// Runs the named scenarios (all when empty) and returns reports in catalog order.
/// Up to scenario_workers scenarios run concurrently.
std::vector<VerificationReport> run_scenarios(const std::vector<std::string>& names,
                                              const ScenarioConfig& cfg,
                                              std::size_t scenario_workers = 1);

}  // namespace bbibp
