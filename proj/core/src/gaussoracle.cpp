#include "bbibp/gaussoracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bbibp/error.hpp"
#include "bbibp/quadrature.hpp"

namespace bbibp {
namespace {

constexpr double kTailSds = 14.0;

}  // namespace

GaussParams::GaussParams(double mean, double variance)
    : mean_(mean), variance_(variance), sd_(std::sqrt(variance)) {
  if (!(variance > 0.0) || !std::isfinite(variance) || !std::isfinite(mean)) {
    throw DomainError("GaussParams requires finite mean and variance > 0");
  }
}

double bridge_var(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("bridge_var requires 0 <= t <= 1");
  return t - t * t;
}

double sgn_mean(const GaussParams& p) {
  return std::erf(p.mean() / (std::numbers::sqrt2 * p.sd()));
}

double folded_mean(const GaussParams& p) {
  const double m = p.mean();
  const double s = p.sd();
  return s * std::sqrt(2.0 / std::numbers::pi) * std::exp(-m * m / (2.0 * p.variance())) +
         m * std::erf(m / (std::numbers::sqrt2 * s));
}

namespace {

/// Orthonormal Hermite values p_n(z) and p_{n-1}(z) without the Gaussian factor.
std::pair<double, double> hermite_pair(std::size_t n, double z) {
  double p1 = 1.0 / std::pow(std::numbers::pi, 0.25);
  double p2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double p3 = p2;
    p2 = p1;
    const double dj = static_cast<double>(j);
    p1 = z * std::sqrt(2.0 / (dj + 1.0)) * p2 - std::sqrt(dj / (dj + 1.0)) * p3;
  }
  return {p1, p2};
}

/// Eigenvalues of the Jacobi matrix below x (Sturm count of the LDL^T pivots).
std::size_t count_below(std::size_t n, double x) {
  std::size_t count = 0;
  double d = -x;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      const double b2 = 0.5 * static_cast<double>(k);
      d = -x - b2 / (d != 0.0 ? d : 1e-300);
    }
    if (d < 0.0) ++count;
  }
  return count;
}

}  // namespace

HermiteRule gauss_hermite(std::size_t n) {
  if (n == 0) throw InvalidArgument("gauss_hermite needs n >= 1");
  HermiteRule r{std::vector<double>(n), std::vector<double>(n)};
  const double dn = static_cast<double>(n);
  const double bound = std::sqrt(2.0 * dn + 1.0) + 1.0;
  const double sqrt2n = std::sqrt(2.0 * dn);
  // Bisection isolates the k-th root; a bracketed Newton step polishes it.
  for (std::size_t k = 0; k < n; ++k) {
    double lo = -bound;
    double hi = bound;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(n, mid) > k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    double z = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
      const auto [p, q] = hermite_pair(n, z);
      const double pp = sqrt2n * q;
      if (pp == 0.0) break;
      const double next = z - p / pp;
      if (!(next > lo - 1e-12 && next < hi + 1e-12)) break;
      z = next;
    }
    r.nodes[k] = z;
  }
  // Exact symmetry of the rule.
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double z = 0.5 * (r.nodes[n - 1 - k] - r.nodes[k]);
    r.nodes[k] = -z;
    r.nodes[n - 1 - k] = z;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double pp = sqrt2n * hermite_pair(n, r.nodes[k]).second;
    r.weights[k] = std::isfinite(pp) && pp != 0.0 ? 2.0 / (pp * pp) : 0.0;
  }
  return r;
}

const HermiteRule& gauss_hermite_200() {
  static const HermiteRule r = gauss_hermite(200);
  return r;
}

double gauss_expect(const RealFn& psi, const GaussParams& p) {
  const HermiteRule& r = gauss_hermite_200();
  const double scale = std::numbers::sqrt2 * p.sd();
  double s = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    if (r.weights[i] == 0.0) continue;
    const double v = psi(p.mean() + scale * r.nodes[i]);
    if (!std::isfinite(v)) throw NonFiniteError("gauss_expect: integrand not finite");
    s += r.weights[i] * v;
  }
  return s / std::sqrt(std::numbers::pi);
}

double gauss_expect(const RealFn& psi, const GaussParams& p, std::span<const double> breakpoints) {
  const double lo = p.mean() - kTailSds * p.sd();
  const double hi = p.mean() + kTailSds * p.sd();
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * p.sd());
  auto integrand = [&](double x) {
    const double d = (x - p.mean()) / p.sd();
    return psi(x) * norm * std::exp(-0.5 * d * d);
  };
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double len = cuts[k + 1] - cuts[k];
    if (len <= 0.0) continue;
    const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(len / p.sd())));
    s += integrate_panels(integrand, cuts[k], cuts[k + 1], panels);
  }
  return s;
}

SmoothProfile tanh_profile(double scale, double shift) {
  std::ostringstream label;
  label << "tanh(" << scale << "x" << (shift < 0 ? "-" : "+") << std::abs(shift) << ")";
  return SmoothProfile{
      label.str(), [=](double x) { return std::tanh(scale * x + shift); },
      [=](double x) {
        const double c = 1.0 / std::cosh(scale * x + shift);
        return scale * c * c;
      },
      [=](double x) {
        const double u = scale * x + shift;
        const double c = 1.0 / std::cosh(u);
        return -2.0 * scale * scale * std::tanh(u) * c * c;
      }};
}

}  // namespace bbibp
