#pragma once

#include <span>
#include <string>
#include <vector>

#include "bbibp/funcspace.hpp"

namespace bbibp {

class GaussParams {
 public:
  GaussParams(double mean, double variance);

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }
  double sd() const noexcept { return sd_; }

 private:
  double mean_;
  double variance_;
  double sd_;
};

/// t - t^2, the marginal variance of the bridge.
double bridge_var(double t);

/// sgn(x) = 1 for x > 0 and -1 for x <= 0.
inline double sgn(double x) noexcept { return x > 0.0 ? 1.0 : -1.0; }

/// E sgn(X) for X ~ N(mean, variance).
double sgn_mean(const GaussParams& p);
/// E |X| for X ~ N(mean, variance).
double folded_mean(const GaussParams& p);

/// Physicists' Gauss-Hermite rule for the weight exp(-x^2).
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

HermiteRule gauss_hermite(std::size_t n);
const HermiteRule& gauss_hermite_200();

/// E psi(X) by 200-node Gauss-Hermite.
double gauss_expect(const RealFn& psi, const GaussParams& p);
/// E psi(X) for psi smooth between the given breakpoints (jumps or kinks allowed
/// there), by piecewise Gauss-Legendre against the density on mean +- 14 sd.
double gauss_expect(const RealFn& psi, const GaussParams& p, std::span<const double> breakpoints);

/// Bounded C^2 function on the real line with exact derivatives.
struct SmoothProfile {
  std::string label;
  RealFn value;
  RealFn derivative1;
  RealFn derivative2;
};

/// x -> tanh(scale x + shift).
SmoothProfile tanh_profile(double scale, double shift);

}  // namespace bbibp
