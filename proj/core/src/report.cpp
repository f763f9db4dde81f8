#include "bbibp/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace bbibp {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void VerificationReport::add_input(std::string key, std::string value) {
  inputs.emplace_back(std::move(key), std::move(value));
}

void VerificationReport::add_input(std::string key, double value) {
  inputs.emplace_back(std::move(key), format_double(value));
}

void VerificationReport::add_input(std::string key, long long value) {
  inputs.emplace_back(std::move(key), std::to_string(value));
}

void VerificationReport::add_route(std::string label, double value, double uncertainty) {
  routes.push_back(RouteValue{std::move(label), value, uncertainty});
}

const CheckResult& VerificationReport::add_check(std::string label, double discrepancy,
                                                 double tolerance) {
  const bool ok = std::isfinite(discrepancy) && discrepancy <= tolerance;
  checks.push_back(CheckResult{std::move(label), discrepancy, tolerance, ok});
  return checks.back();
}

void VerificationReport::add_note(std::string note) { notes.push_back(std::move(note)); }

void VerificationReport::finalize() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  pass = !checks.empty();
  for (const auto& c : checks) pass = pass && c.pass;
  if (checks.size() == 1) {
    discrepancy = checks.front().discrepancy;
    tolerance = checks.front().tolerance;
  } else {
    double worst = checks.empty() ? inf : 0.0;
    for (const auto& c : checks) {
      double r = 0.0;
      if (!std::isfinite(c.discrepancy)) {
        r = inf;
      } else if (c.tolerance > 0.0) {
        r = c.discrepancy / c.tolerance;
      } else if (c.discrepancy > 0.0) {
        r = inf;
      }
      worst = std::max(worst, r);
    }
    discrepancy = worst;
    tolerance = 1.0;
  }
  if (routes.size() < 2) {
    pass = false;
    discrepancy = inf;
    notes.emplace_back("fewer than two independent routes recorded");
  }
}

}  // namespace bbibp
