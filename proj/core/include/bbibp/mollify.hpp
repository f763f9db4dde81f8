#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bbibp/funcspace.hpp"

namespace bbibp {

/// rho_eps(x) = rho(x / eps) / eps with rho(x) = C exp(-1 / (1 - x^2)) on (-1, 1).
class Mollifier {
 public:
  explicit Mollifier(double epsilon);

  double epsilon() const noexcept { return epsilon_; }
  /// Integral of rho^2 for the unscaled bump.
  static double base_l2_sq();
  /// C such that rho integrates to one.
  static double base_normalization();

  static double base(double x);
  static double base_derivative(double x);

  double operator()(double x) const { return base(x / epsilon_) / epsilon_; }
  double derivative(double x) const {
    return base_derivative(x / epsilon_) / (epsilon_ * epsilon_);
  }

 private:
  double epsilon_;
};

double rho_eval(const Mollifier& m, double x);
double rho_prime(const Mollifier& m, double x);

/// Trapezoid convolution weights on a uniform grid. Reused across paths.
class GridSmoother {
 public:
  GridSmoother(const Mollifier& m, std::size_t n_intervals);

  std::size_t n_intervals() const noexcept { return n_; }
  /// int_0^1 rho_eps(s - t_i) g_s ds.
  double value_at(std::span<const double> g, std::size_t i) const;
  /// -int_0^1 rho_eps'(s - t_i) g_s ds.
  double derivative_at(std::span<const double> g, std::size_t i) const;

 private:
  std::size_t n_;
  std::ptrdiff_t reach_;
  double step_;
  std::vector<double> rho_;    // rho_eps(k h), k = -reach..reach
  std::vector<double> drho_;   // rho_eps'(k h)

  template <class W>
  double apply(std::span<const double> g, std::size_t i, const W& kernel) const;
};

/// Full-range convolution t -> int_0^1 rho_eps(s - t) g_s ds on the grid of g.
GridFunction smooth_path(const GridFunction& g, const Mollifier& m);
/// t -> -int_0^1 rho_eps'(s - t) g_s ds on the grid of g.
GridFunction smooth_path_deriv(const GridFunction& g, const Mollifier& m);

/// Same operations for an analytic g, by Gauss-Legendre quadrature.
double mollified_value(const RealFn& g, const Mollifier& m, double t);
double mollified_derivative(const RealFn& g, const Mollifier& m, double t);

/// u -> -int_0^1 rho_eps'(s - t) q_s(u) ds, the L2 kernel of the smoothed bridge
/// derivative at t. The value at u = 1 is the left limit.
GridFunction dot_kernel(const Mollifier& m, double t, std::size_t n_intervals = 4096);

/// Squared L2 norm of dot_kernel(m, t).
double renorm_constant(const Mollifier& m, double t, std::size_t n_intervals = 4096);

/// base_l2_sq / eps - 1, the interior value of renorm_constant.
double renorm_closed_form(const Mollifier& m);

}  // namespace bbibp
