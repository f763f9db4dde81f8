#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bbibp {

struct RouteValue {
  std::string label;
  double value = 0.0;
  double uncertainty = 0.0;
};

struct CheckResult {
  std::string label;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Outcome of one scenario. With several checks, discrepancy is the largest
/// discrepancy/tolerance ratio and tolerance is 1.
struct VerificationReport {
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<RouteValue> routes;
  std::vector<CheckResult> checks;
  std::vector<std::string> notes;
  double discrepancy = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::int64_t runtime_ms = 0;

  void add_input(std::string key, std::string value);
  void add_input(std::string key, double value);
  void add_input(std::string key, long long value);
  void add_route(std::string label, double value, double uncertainty = 0.0);
  const CheckResult& add_check(std::string label, double discrepancy, double tolerance);
  void add_note(std::string note);
  /// Computes the aggregate fields. Fails when fewer than two routes were recorded.
  void finalize();
};

/// Shortest round-trip decimal form of v.
std::string format_double(double v);

}  // namespace bbibp
