#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bbibp/report.hpp"
#include "config.hpp"

namespace bbibp::cli {

inline constexpr int kSchemaVersion = 1;

void write_json(std::ostream& out, const RunConfig& cfg,
                const std::vector<VerificationReport>& reports);
/// One row per report; route triplets flattened into route_<k>_{label,value,uncertainty}.
void write_csv(std::ostream& out, const std::vector<VerificationReport>& reports);
/// "PASS name  discrepancy=... tolerance=... runtime_ms=..." for each report.
std::string summary_line(const VerificationReport& r);

}  // namespace bbibp::cli
