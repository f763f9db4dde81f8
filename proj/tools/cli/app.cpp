#include "app.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>

#include "bbibp/error.hpp"
#include "bbibp/verify.hpp"
#include "config.hpp"
#include "output.hpp"

namespace bbibp::cli {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

int code(ExitCode c) { return static_cast<int>(c); }

}  // namespace

int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical verification of the bridge integration-by-parts identities"};
  std::string config_file;
  std::vector<std::string> scenarios;
  bool list = false;
  std::string seed, paths, grid, epsilon, kappa, out_path, format, workers;
  std::vector<std::string> tolerances;
  app.add_option("--config", config_file, "flat key = value config file");
  app.add_option("--scenario", scenarios, "scenario names, comma lists, or 'all'")
      ->delimiter(',');
  app.add_flag("--list", list, "print the scenario catalog and exit");
  app.add_option("--seed", seed, "base seed");
  app.add_option("--paths", paths, "Monte Carlo paths per scenario");
  app.add_option("--grid", grid, "grid intervals for Monte Carlo scenarios");
  app.add_option("--epsilon", epsilon, "comma-separated mollifier scales");
  app.add_option("--kappa", kappa, "comma-separated Dirac-sequence variances");
  app.add_option("--out", out_path, "report file");
  app.add_option("--format", format, "json or csv");
  app.add_option("--workers", workers, "scenarios run concurrently");
  app.add_option("--tolerance", tolerances, "KEY=VAL tolerance override (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "bbibp: " << e.what() << '\n';
    return code(ExitCode::config_error);
  }

  if (list) {
    for (const auto& s : scenario_catalog()) out << s.name << "  " << s.summary << '\n';
    return 0;
  }

  RunConfig cfg;
  try {
    if (!config_file.empty()) apply_config_file(cfg, config_file);
    if (!scenarios.empty()) apply_setting(cfg, "scenario", join(scenarios));
    if (!seed.empty()) apply_setting(cfg, "seed", seed);
    if (!paths.empty()) apply_setting(cfg, "n_paths", paths);
    if (!grid.empty()) apply_setting(cfg, "n_intervals", grid);
    if (!epsilon.empty()) apply_setting(cfg, "epsilon_list", epsilon);
    if (!kappa.empty()) apply_setting(cfg, "kappa_list", kappa);
    if (!out_path.empty()) apply_setting(cfg, "output_path", out_path);
    if (!format.empty()) apply_setting(cfg, "output_format", format);
    if (!workers.empty()) apply_setting(cfg, "workers", workers);
    for (const auto& t : tolerances) {
      const auto eq = t.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ConfigError(ExitCode::config_error, "--tolerance expects KEY=VAL, got " + t);
      }
      apply_setting(cfg, "tolerance." + t.substr(0, eq), t.substr(eq + 1));
    }
    validate(cfg);
  } catch (const ConfigError& e) {
    err << "bbibp: " << e.what() << '\n';
    return code(e.code());
  }

  const char* env_dir = std::getenv("BBIBP_OUTPUT_DIR");
  const auto path = resolve_output_path(cfg, env_dir ? env_dir : "");

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "bbibp: infrastructure error: cannot write " << path.string() << '\n';
    return code(ExitCode::infrastructure_error);
  }

  std::vector<VerificationReport> reports;
  try {
    reports = run_scenarios(cfg.scenarios, cfg.scenario, cfg.workers);
  } catch (const std::exception& e) {
    err << "bbibp: infrastructure error: " << e.what() << '\n';
    return code(ExitCode::infrastructure_error);
  }

  bool all_pass = true;
  for (const auto& r : reports) {
    out << summary_line(r) << '\n';
    all_pass = all_pass && r.pass;
  }

  if (cfg.format == OutputFormat::json) {
    write_json(file, cfg, reports);
  } else {
    write_csv(file, reports);
  }
  file.flush();
  if (!file) {
    err << "bbibp: infrastructure error: write to " << path.string() << " failed\n";
    return code(ExitCode::infrastructure_error);
  }
  out << "report: " << path.string() << '\n';
  return code(all_pass ? ExitCode::ok : ExitCode::scenario_failure);
}

}  // namespace bbibp::cli
