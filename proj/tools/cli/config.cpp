#include "config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bbibp::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void malformed(const std::string& key, const std::string& value) {
  throw ConfigError(ExitCode::config_error, "malformed value for " + key + ": '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size()) malformed(key, value);
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    // A negative integer is well-formed but out of range.
    long long neg = 0;
    const auto r2 = std::from_chars(v.data(), v.data() + v.size(), neg);
    if (!v.empty() && r2.ec == std::errc{} && r2.ptr == v.data() + v.size()) {
      throw ConfigError(ExitCode::range_error, key + " must be a nonnegative integer");
    }
    malformed(key, value);
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_double(key, item));
  if (out.empty()) malformed(key, value);
  return out;
}

}  // namespace

void apply_setting(RunConfig& cfg, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  auto& s = cfg.scenario;
  if (key == "scenario") {
    cfg.scenarios.clear();
    for (const auto& name : split_list(value)) {
      if (name == "all") {
        cfg.scenarios.clear();
        return;
      }
      if (!find_scenario(name)) {
        throw ConfigError(ExitCode::config_error, "unknown scenario: " + name);
      }
      cfg.scenarios.push_back(name);
    }
  } else if (key == "seed") {
    s.seed = parse_uint(key, value);
  } else if (key == "n_paths") {
    s.n_paths = parse_uint(key, value);
  } else if (key == "n_intervals") {
    s.n_intervals = parse_uint(key, value);
  } else if (key == "local_time_intervals") {
    s.local_time_intervals = parse_uint(key, value);
  } else if (key == "local_time_window") {
    s.local_time_window = parse_double(key, value);
  } else if (key == "epsilon_list") {
    s.epsilons = parse_list(key, value);
  } else if (key == "kappa_list") {
    s.kappas = parse_list(key, value);
  } else if (key == "output_path") {
    cfg.output_path = trim(value);
  } else if (key == "output_format") {
    const std::string f = trim(value);
    if (f == "json") {
      cfg.format = OutputFormat::json;
    } else if (f == "csv") {
      cfg.format = OutputFormat::csv;
    } else {
      malformed(key, value);
    }
  } else if (key == "workers") {
    cfg.workers = parse_uint(key, value);
  } else if (key == "path_workers") {
    s.workers = parse_uint(key, value);
  } else if (key.rfind("tolerance.", 0) == 0 && key.size() > 10) {
    s.tolerances[key.substr(10)] = parse_double(key, value);
  } else {
    throw ConfigError(ExitCode::config_error, "unknown key: " + key);
  }
}

void apply_config_stream(RunConfig& cfg, std::istream& in) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || trim(line.substr(0, eq)).empty()) {
      throw ConfigError(ExitCode::config_error,
                        "line " + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void apply_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(ExitCode::infrastructure_error,
                      "cannot read config file " + path.string());
  }
  apply_config_stream(cfg, in);
}

void validate(const RunConfig& cfg) {
  const auto& s = cfg.scenario;
  auto range = [](const std::string& what) {
    throw ConfigError(ExitCode::range_error, what);
  };
  if (s.n_paths < 100) range("n_paths must be >= 100");
  if (s.n_intervals < 64) range("n_intervals must be >= 64");
  if (s.local_time_intervals < 64) range("local_time_intervals must be >= 64");
  if (!(s.local_time_window > 0.0 && s.local_time_window <= 0.25)) {
    range("local_time_window must lie in (0, 0.25]");
  }
  for (double e : s.epsilons) {
    if (!(e > 0.0 && e <= 0.25)) range("epsilon values must lie in (0, 0.25]");
  }
  for (double k : s.kappas) {
    if (!(k > 0.0 && k <= 0.25)) range("kappa values must lie in (0, 0.25]");
  }
  if (cfg.workers < 1) range("workers must be >= 1");
  if (s.workers < 1) range("path_workers must be >= 1");
  for (const auto& [k, v] : s.tolerances) {
    if (!(v >= 0.0) || !std::isfinite(v)) range("tolerance." + k + " must be finite and >= 0");
  }
}

std::filesystem::path resolve_output_path(const RunConfig& cfg, const std::string& output_dir) {
  std::filesystem::path p = cfg.output_path;
  if (p.empty()) p = cfg.format == OutputFormat::json ? "bbibp_report.json" : "bbibp_report.csv";
  if (p.is_relative() && !output_dir.empty()) p = std::filesystem::path(output_dir) / p;
  return p;
}

}  // namespace bbibp::cli
