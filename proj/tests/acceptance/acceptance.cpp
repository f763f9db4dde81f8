#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include "bbibp/report.hpp"
#include "bbibp/verify.hpp"

namespace {

using bbibp::VerificationReport;

struct Criterion {
  int id;
  const char* scenario;
  // Wall-clock budget in seconds for the whole criterion.
  double budget_s;
  const char* statement;
};

// ibp-exponential shares one ensemble across its 6 pairs; 60 s per pair.
const Criterion kCriteria[] = {
    {1, "operator-identities", 5, "H K eta = Q eta, (Q eta)'' = -eta, (Q eta, eta) = |K eta|^2"},
    {2, "lambda-equivalence", 1, "six-term expansion equals lambda on 1e4 triples to 1e-10"},
    {3, "heat-identity", 10, "heat identity with Richardson differences, O(dt^2) order"},
    {4, "ibp-exponential", 6 * 60, "Wick exponential IBP: closure 1e-6, MC within 3 SE"},
    {5, "trig-pairing", 60, "sin pairing vanishes, cos pairing matches one normalization"},
    {6, "eps-convergence", 10, "eps errors nonincreasing, halved overall, growth bound"},
    {7, "renorm", 5, "dot kernel norm equals |rho|^2/eps - 1 to 1e-6"},
    {8, "local-time", 120, "E L_1^0 = 2 sqrt(pi/2) within 3 SE + window bias"},
    {9, "wick-formula", 120, "regularized pairing against S-transform product"},
    {10, "bn-modulus", 1, "B_n error 1/(2n) at 0 and in sup, |B_n| <= |x|"},
    {11, "continuity-bounds", 30, "gradient and drift continuity bounds"},
};

void print_report(const VerificationReport& r) {
  for (const auto& c : r.checks) {
    std::printf("    [%s] %s: %s (tol %s)\n", c.pass ? "ok" : "FAIL", c.label.c_str(),
                bbibp::format_double(c.discrepancy).c_str(),
                bbibp::format_double(c.tolerance).c_str());
  }
  for (const auto& n : r.notes) std::printf("    note: %s\n", n.c_str());
}

bool run_criterion(const Criterion& c, const bbibp::ScenarioConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<VerificationReport> reports;
  std::string error;
  try {
    reports = bbibp::run_scenarios({c.scenario}, cfg);
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool pass = error.empty() && !reports.empty();
  double worst = 0.0;
  for (const auto& r : reports) {
    pass = pass && r.pass;
    worst = std::max(worst, r.discrepancy);
  }
  const bool in_budget = seconds <= c.budget_s;
  std::printf("%s criterion %d %s  discrepancy=%s tolerance=1 runtime=%.2fs budget=%.0fs%s\n",
              pass && in_budget ? "PASS" : "FAIL", c.id, c.scenario,
              bbibp::format_double(worst).c_str(), seconds, c.budget_s,
              in_budget ? "" : " (over budget)");
  std::printf("  %s\n", c.statement);
  if (!error.empty()) std::printf("    error: %s\n", error.c_str());
  for (const auto& r : reports) print_report(r);
  std::fflush(stdout);
  return pass && in_budget;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      if (only < 1 || only > 11) {
        std::fprintf(stderr, "criterion must be in 1..11\n");
        return 2;
      }
    } else {
      std::fprintf(stderr, "usage: bbibp_acceptance [--criterion N]\n");
      return 2;
    }
  }
  const bbibp::ScenarioConfig cfg;  // seed 0, 1e5 paths, 2^10 grid, 2^12 for local time
  int failures = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    if (!run_criterion(c, cfg)) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
