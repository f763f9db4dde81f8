#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <string>

#include "bbibp/montecarlo.hpp"
#include "bbibp/report.hpp"

namespace bbibp::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                 start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline void finish(VerificationReport& r, const Stopwatch& sw) {
  r.runtime_ms = sw.elapsed_ms();
  r.finalize();
}

/// |a - b| / max(|a|, |b|, floor).
inline double relative_gap(double a, double b, double floor = 1e-300) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// Uncertainty-aware tolerance: max(abs_tol, sigmas * stderr).
inline double mc_tolerance(double abs_tol, double sigmas, double std_error) {
  return std::max(abs_tol, sigmas * std_error);
}

}  // namespace bbibp::detail
