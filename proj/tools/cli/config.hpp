#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbibp/verify.hpp"

namespace bbibp::cli {

enum class ExitCode : int {
  ok = 0,
  scenario_failure = 1,
  config_error = 2,
  infrastructure_error = 3,
  range_error = 4,
};

enum class OutputFormat { json, csv };

/// Raised for configuration problems; carries the exit status to report.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

struct RunConfig {
  /// Empty selects every scenario.
  std::vector<std::string> scenarios;
  ScenarioConfig scenario;
  std::string output_path;
  OutputFormat format = OutputFormat::json;
  std::size_t workers = 1;
};

/// Applies one key=value setting. Keys follow the config file names.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Flat "key = value" lines; '#' starts a comment; lists are comma separated.
void apply_config_stream(RunConfig& cfg, std::istream& in);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Throws ConfigError(range_error) when a value is outside its documented range.
void validate(const RunConfig& cfg);

/// Report file location: output_path if set, else bbibp_report.<ext>; a relative
/// location is placed under output_dir when that is non-empty.
std::filesystem::path resolve_output_path(const RunConfig& cfg, const std::string& output_dir);

}  // namespace bbibp::cli
