#include "bbibp/verify.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "bbibp/error.hpp"
#include "bbibp/stransform.hpp"

namespace bbibp {

double ScenarioConfig::tolerance(const std::string& key, double fallback) const {
  const auto it = tolerances.find(key);
  return it == tolerances.end() ? fallback : it->second;
}

namespace {

std::vector<VerificationReport> one(VerificationReport r) { return {std::move(r)}; }

std::vector<ScenarioEntry> build_catalog() {
  std::vector<ScenarioEntry> c;
  c.push_back({"operator-identities", "H K = Q, (Q eta)'' = -eta, (Q eta, eta) = |K eta|^2",
               [](const ScenarioConfig& cfg) {
                 const auto etas = family::all();
                 return one(run_operator_identities(etas, cfg));
               }});
  c.push_back({"lambda-equivalence", "six-term expansion against lambda on random triples",
               [](const ScenarioConfig& cfg) {
                 return one(run_lambda_equivalence(10000, cfg.seed, cfg));
               }});
  c.push_back({"heat-identity", "second time derivative of E phi(BB_t + Q eta_t)",
               [](const ScenarioConfig& cfg) {
                 const SmoothProfile profiles[] = {tanh_profile(1.0, 0.3),
                                                   tanh_profile(2.0, -0.5)};
                 const SmoothTestFunction etas[] = {family::constant(0.0), family::constant(1.0),
                                                    family::sine(1)};
                 const double ts[] = {0.2, 0.35, 0.5, 0.65, 0.8};
                 return one(run_heat_identity(profiles, etas, ts, cfg));
               }});
  c.push_back({"ibp-exponential", "integration by parts for Wick exponentials, 6 cases",
               [](const ScenarioConfig& cfg) {
                 const auto cases = default_ibp_matrix();
                 return run_ibp_matrix(cases, cfg);
               }});
  c.push_back({"trig-pairing", "sin and cos pairings with the reflection term",
               [](const ScenarioConfig& cfg) {
                 return one(run_trig_pairing(family::constant(3.0),
                                             DirectionFunction::bump(0.2, 0.8), cfg));
               }});
  c.push_back({"eps-convergence", "regularized S-transform converges as eps -> 0",
               [](const ScenarioConfig& cfg) {
                 const SmoothTestFunction phis[] = {family::sine(1), family::monomial(2),
                                                    family::gaussian_bump()};
                 return one(run_eps_convergence(DirectionFunction::bump(0.25, 0.75), phis,
                                                cfg.epsilons, cfg));
               }});
  c.push_back({"renorm", "renormalization constant against its closed form",
               [](const ScenarioConfig& cfg) {
                 const double eps[] = {0.1, 0.05};
                 const double ts[] = {0.3, 0.5, 0.7};
                 return one(run_renorm(eps, ts, cfg));
               }});
  c.push_back({"local-time", "expected local time at zero of the bridge",
               [](const ScenarioConfig& cfg) { return one(run_local_time(cfg)); }});
  c.push_back({"wick-formula", "regularized pairing against the product of S-transforms",
               [](const ScenarioConfig& cfg) { return one(run_wick_formula(cfg)); }});
  c.push_back({"bn-modulus", "C^1 approximation of the modulus",
               [](const ScenarioConfig& cfg) {
                 const int ns[] = {1, 10, 100};
                 return one(run_bn_modulus(ns, cfg));
               }});
  c.push_back({"continuity-bounds", "gradient and drift bounds for trigonometric functionals",
               [](const ScenarioConfig& cfg) { return one(run_continuity_bounds(cfg)); }});
  return c;
}

VerificationReport error_report(const std::string& name, const Error& e) {
  VerificationReport r;
  r.scenario = name;
  r.add_note(std::string("scenario error: ") + e.what());
  r.finalize();
  return r;
}

}  // namespace

const std::vector<ScenarioEntry>& scenario_catalog() {
  static const std::vector<ScenarioEntry> catalog = build_catalog();
  return catalog;
}

const ScenarioEntry* find_scenario(const std::string& name) {
  for (const auto& e : scenario_catalog()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

std::vector<VerificationReport> run_scenarios(const std::vector<std::string>& names,
                                              const ScenarioConfig& cfg,
                                              std::size_t scenario_workers) {
  std::vector<const ScenarioEntry*> selected;
  if (names.empty()) {
    for (const auto& e : scenario_catalog()) selected.push_back(&e);
  } else {
    for (const auto& e : scenario_catalog()) {
      if (std::find(names.begin(), names.end(), e.name) != names.end()) selected.push_back(&e);
    }
    for (const auto& n : names) {
      if (!find_scenario(n)) throw InvalidArgument("unknown scenario: " + n);
    }
  }

  std::vector<std::vector<VerificationReport>> slots(selected.size());
  std::vector<std::exception_ptr> failures(selected.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < selected.size(); i = next++) {
      try {
        slots[i] = selected[i]->run(cfg);
      } catch (const Error& e) {
        slots[i] = {error_report(selected[i]->name, e)};
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(std::max<std::size_t>(scenario_workers, 1), selected.size());
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  std::vector<VerificationReport> out;
  for (auto& s : slots) {
    for (auto& r : s) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace bbibp
