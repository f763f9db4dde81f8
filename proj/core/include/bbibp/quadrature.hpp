#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

namespace bbibp {

enum class QuadratureMode {
  regular,
  /// Substitutes t = lo + (hi - lo)(1 - cos(pi u))/2, which absorbs
  /// inverse-square-root endpoint singularities.
  endpoint_singular,
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct PanelRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

const PanelRule& gauss_legendre_64();
const PanelRule& gauss_legendre_32();

inline constexpr std::size_t kDefaultPanels = 32;

struct QuadNode {
  double x;
  double w;
};

/// Nodes and weights of the composite rule used by integrate_panels.
std::vector<QuadNode> composite_nodes(double lo, double hi, std::size_t panels = kDefaultPanels,
                                      const PanelRule& rule = gauss_legendre_64());

namespace detail {

inline bool finite_value(double v) { return std::isfinite(v); }
inline bool finite_value(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

[[noreturn]] void throw_non_finite_integrand(double at);

}  // namespace detail

/// Composite rule: `panels` equal panels on [lo, hi], `rule` on each.
/// Works for real- and complex-valued integrands.
template <class F>
auto integrate_panels(F&& f, double lo, double hi, std::size_t panels = kDefaultPanels,
                      const PanelRule& rule = gauss_legendre_64())
    -> std::decay_t<std::invoke_result_t<F&, double>> {
  using R = std::decay_t<std::invoke_result_t<F&, double>>;
  R total{};
  const double width = (hi - lo) / static_cast<double>(panels);
  const double half = 0.5 * width;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * width;
    R panel{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + half * rule.nodes[i];
      const R v = f(x);
      if (!detail::finite_value(v)) detail::throw_non_finite_integrand(x);
      panel += rule.weights[i] * v;
    }
    total += half * panel;
  }
  return total;
}

/// Integral of f over [lo, hi] (default [0, 1]).
template <class F>
auto integrate(F&& f, QuadratureMode mode = QuadratureMode::regular, double lo = 0.0,
               double hi = 1.0, std::size_t panels = kDefaultPanels)
    -> std::decay_t<std::invoke_result_t<F&, double>> {
  if (mode == QuadratureMode::regular) return integrate_panels(f, lo, hi, panels);
  const double span = hi - lo;
  constexpr double pi = std::numbers::pi;
  return integrate_panels(
      [&](double u) {
        const double t = lo + 0.5 * span * (1.0 - std::cos(pi * u));
        const double jac = 0.5 * span * pi * std::sin(pi * u);
        return f(t) * jac;
      },
      0.0, 1.0, panels);
}

}  // namespace bbibp
