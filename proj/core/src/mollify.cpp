#include "bbibp/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbibp/error.hpp"
#include "bbibp/quadrature.hpp"

namespace bbibp {
namespace {

double raw_bump(double x) {
  const double w = 1.0 - x * x;
  if (w <= 0.0) return 0.0;
  return std::exp(-1.0 / w);
}

constexpr std::size_t kInnerPanels = 4;

void require_resolution(const Mollifier& m, std::size_t n_intervals) {
  if (m.epsilon() * static_cast<double>(n_intervals) < 2.0) {
    throw ResolutionError("mollifier scale " + std::to_string(m.epsilon()) +
                          " is below two grid steps of 1/" + std::to_string(n_intervals));
  }
}

}  // namespace

Mollifier::Mollifier(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw DomainError("mollifier epsilon must lie in (0, 1/2)");
  }
}

double Mollifier::base_normalization() {
  static const double c = 1.0 / integrate(raw_bump, QuadratureMode::regular, -1.0, 1.0);
  return c;
}

double Mollifier::base_l2_sq() {
  static const double v = integrate(
      [](double x) {
        const double r = base(x);
        return r * r;
      },
      QuadratureMode::regular, -1.0, 1.0);
  return v;
}

double Mollifier::base(double x) { return base_normalization() * raw_bump(x); }

double Mollifier::base_derivative(double x) {
  const double w = 1.0 - x * x;
  if (w <= 0.0) return 0.0;
  return base_normalization() * std::exp(-1.0 / w) * (-2.0 * x / (w * w));
}

double rho_eval(const Mollifier& m, double x) { return m(x); }
double rho_prime(const Mollifier& m, double x) { return m.derivative(x); }

GridSmoother::GridSmoother(const Mollifier& m, std::size_t n_intervals)
    : n_(n_intervals), step_(1.0 / static_cast<double>(n_intervals)) {
  require_resolution(m, n_intervals);
  reach_ = static_cast<std::ptrdiff_t>(std::ceil(m.epsilon() / step_));
  rho_.resize(2 * reach_ + 1);
  drho_.resize(2 * reach_ + 1);
  for (std::ptrdiff_t k = -reach_; k <= reach_; ++k) {
    const double x = static_cast<double>(k) * step_;
    rho_[k + reach_] = m(x);
    drho_[k + reach_] = m.derivative(x);
  }
}

template <class W>
double GridSmoother::apply(std::span<const double> g, std::size_t i, const W& kernel) const {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  const auto ii = static_cast<std::ptrdiff_t>(i);
  const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, ii - reach_);
  const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n, ii + reach_);
  double s = 0.0;
  for (std::ptrdiff_t j = lo; j <= hi; ++j) {
    const double w = (j == 0 || j == n) ? 0.5 : 1.0;
    s += w * kernel[j - ii + reach_] * g[j];
  }
  return s * step_;
}

double GridSmoother::value_at(std::span<const double> g, std::size_t i) const {
  return apply(g, i, rho_);
}

double GridSmoother::derivative_at(std::span<const double> g, std::size_t i) const {
  return -apply(g, i, drho_);
}

GridFunction smooth_path(const GridFunction& g, const Mollifier& m) {
  const GridSmoother sm(m, g.n_intervals());
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = sm.value_at(g.values(), i);
  return GridFunction(std::move(out));
}

GridFunction smooth_path_deriv(const GridFunction& g, const Mollifier& m) {
  const GridSmoother sm(m, g.n_intervals());
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = sm.derivative_at(g.values(), i);
  return GridFunction(std::move(out));
}

double mollified_value(const RealFn& g, const Mollifier& m, double t) {
  const double lo = std::max(0.0, t - m.epsilon());
  const double hi = std::min(1.0, t + m.epsilon());
  return integrate([&](double s) { return m(s - t) * g(s); }, QuadratureMode::regular, lo, hi,
                   kInnerPanels);
}

double mollified_derivative(const RealFn& g, const Mollifier& m, double t) {
  const double lo = std::max(0.0, t - m.epsilon());
  const double hi = std::min(1.0, t + m.epsilon());
  return -integrate([&](double s) { return m.derivative(s - t) * g(s); },
                    QuadratureMode::regular, lo, hi, kInnerPanels);
}

GridFunction dot_kernel(const Mollifier& m, double t, std::size_t n_intervals) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("dot_kernel requires 0 < t < 1");
  const double lo = std::max(0.0, t - m.epsilon());
  const double hi = std::min(1.0, t + m.epsilon());
  auto piece = [&](double a, double b, double indicator) {
    if (b <= a) return 0.0;
    return -integrate([&](double s) { return m.derivative(s - t) * (indicator - s); },
                      QuadratureMode::regular, a, b, kInnerPanels);
  };
  return GridFunction::sample(n_intervals, [&](double u) {
    // q_s(u) = 1_{u < s} - s for u in [0, 1).
    const double cut = std::clamp(u, lo, hi);
    return piece(lo, cut, 0.0) + piece(cut, hi, 1.0);
  });
}

double renorm_constant(const Mollifier& m, double t, std::size_t n_intervals) {
  return dot_kernel(m, t, n_intervals).norm_sq();
}

double renorm_closed_form(const Mollifier& m) { return Mollifier::base_l2_sq() / m.epsilon() - 1.0; }

}  // namespace bbibp
