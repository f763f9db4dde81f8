#include "output.hpp"

#include <cmath>
#include <json.hpp>

namespace bbibp::cli {

namespace {

using nlohmann::ordered_json;

/// JSON has no infinities; non-finite numbers are written as strings.
ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_json(std::ostream& out, const RunConfig& cfg,
                const std::vector<VerificationReport>& reports) {
  ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  ordered_json c;
  c["seed"] = cfg.scenario.seed;
  c["n_paths"] = cfg.scenario.n_paths;
  c["n_intervals"] = cfg.scenario.n_intervals;
  c["local_time_intervals"] = cfg.scenario.local_time_intervals;
  c["local_time_window"] = cfg.scenario.local_time_window;
  c["epsilon_list"] = cfg.scenario.epsilons;
  c["kappa_list"] = cfg.scenario.kappas;
  ordered_json tol = ordered_json::object();
  for (const auto& [k, v] : cfg.scenario.tolerances) tol[k] = v;
  c["tolerances"] = tol;
  doc["config"] = c;
  std::size_t passed = 0;
  ordered_json list = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j;
    j["scenario"] = r.scenario;
    ordered_json inputs = ordered_json::object();
    for (const auto& [k, v] : r.inputs) inputs[k] = v;
    j["inputs"] = inputs;
    ordered_json routes = ordered_json::array();
    for (const auto& rv : r.routes) {
      routes.push_back(
          {{"label", rv.label}, {"value", number(rv.value)}, {"uncertainty", number(rv.uncertainty)}});
    }
    j["routes"] = routes;
    ordered_json checks = ordered_json::array();
    for (const auto& ch : r.checks) {
      checks.push_back({{"label", ch.label},
                        {"discrepancy", number(ch.discrepancy)},
                        {"tolerance", number(ch.tolerance)},
                        {"pass", ch.pass}});
    }
    j["checks"] = checks;
    j["notes"] = r.notes;
    j["discrepancy"] = number(r.discrepancy);
    j["tolerance"] = number(r.tolerance);
    j["pass"] = r.pass;
    j["runtime_ms"] = r.runtime_ms;
    passed += r.pass ? 1 : 0;
    list.push_back(std::move(j));
  }
  doc["reports"] = list;
  doc["summary"] = {{"passed", passed}, {"failed", reports.size() - passed}};
  out << doc.dump(2) << '\n';
}

void write_csv(std::ostream& out, const std::vector<VerificationReport>& reports) {
  std::size_t max_routes = 0;
  for (const auto& r : reports) max_routes = std::max(max_routes, r.routes.size());
  out << "schema_version,scenario,pass,discrepancy,tolerance,runtime_ms";
  for (std::size_t k = 1; k <= max_routes; ++k) {
    out << ",route_" << k << "_label,route_" << k << "_value,route_" << k << "_uncertainty";
  }
  out << '\n';
  for (const auto& r : reports) {
    out << kSchemaVersion << ',' << csv_field(r.scenario) << ',' << (r.pass ? "true" : "false")
        << ',' << format_double(r.discrepancy) << ',' << format_double(r.tolerance) << ','
        << r.runtime_ms;
    for (std::size_t k = 0; k < max_routes; ++k) {
      if (k < r.routes.size()) {
        const auto& rv = r.routes[k];
        out << ',' << csv_field(rv.label) << ',' << format_double(rv.value) << ','
            << format_double(rv.uncertainty);
      } else {
        out << ",,,";
      }
    }
    out << '\n';
  }
}

std::string summary_line(const VerificationReport& r) {
  return std::string(r.pass ? "PASS " : "FAIL ") + r.scenario +
         "  discrepancy=" + format_double(r.discrepancy) +
         " tolerance=" + format_double(r.tolerance) +
         " runtime_ms=" + std::to_string(r.runtime_ms);
}

}  // namespace bbibp::cli
