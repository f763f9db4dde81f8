#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bbibp {

using RealFn = std::function<double(double)>;

/// Values of a function at t_i = i / n_intervals, i = 0..n_intervals.
class GridFunction {
 public:
  explicit GridFunction(std::vector<double> values);

  static GridFunction sample(std::size_t n_intervals, const RealFn& f);

  std::size_t n_intervals() const noexcept { return values_.size() - 1; }
  std::size_t size() const noexcept { return values_.size(); }
  double step() const noexcept { return 1.0 / static_cast<double>(n_intervals()); }
  double time(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(n_intervals());
  }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Composite trapezoid integral over [0, 1].
  double integral() const noexcept;
  /// Trapezoid L2(0,1) inner product; grids must match.
  double inner(const GridFunction& other) const;
  double norm_sq() const noexcept;
  double max_abs() const noexcept;

 private:
  std::vector<double> values_;
};

/// Analytic function on [0,1] with exact first and optional second
/// derivative. Derivatives are self-checked against centered differences
/// at construction.
class SmoothTestFunction {
 public:
  SmoothTestFunction(std::string label, RealFn value, RealFn derivative1, RealFn derivative2,
                     double sup_bound);

  /// Same, with sup_bound taken from a 4096-interval grid plus a Lipschitz margin.
  static SmoothTestFunction with_grid_bound(std::string label, RealFn value, RealFn derivative1,
                                            RealFn derivative2 = {});

  double operator()(double t) const { return impl_->value(t); }
  double derivative1(double t) const { return impl_->derivative1(t); }
  bool has_derivative2() const noexcept { return static_cast<bool>(impl_->derivative2); }
  double derivative2(double t) const;
  double sup_bound() const noexcept { return impl_->sup_bound; }
  const std::string& label() const noexcept { return impl_->label; }

  SmoothTestFunction scaled(double c) const;
  GridFunction sample(std::size_t n_intervals) const;

 private:
  struct Impl {
    std::string label;
    RealFn value;
    RealFn derivative1;
    RealFn derivative2;
    double sup_bound;
  };
  std::shared_ptr<const Impl> impl_;
};

/// C^2 function with compact support [support_lo, support_hi] inside (0,1).
class DirectionFunction {
 public:
  DirectionFunction(SmoothTestFunction base, double support_lo, double support_hi);

  /// (1 - u^2)^3 with u mapping [lo, hi] onto [-1, 1], times amplitude.
  static DirectionFunction bump(double lo, double hi, double amplitude = 1.0);

  double operator()(double t) const { return base_(t); }
  double derivative1(double t) const { return base_.derivative1(t); }
  double derivative2(double t) const { return base_.derivative2(t); }
  double support_lo() const noexcept { return lo_; }
  double support_hi() const noexcept { return hi_; }
  const SmoothTestFunction& base() const noexcept { return base_; }
  const std::string& label() const noexcept { return base_.label(); }

  DirectionFunction scaled(double c) const;
  /// sup |h''| sampled on a fine grid of the support.
  double second_derivative_sup() const;
  /// L2(0,1) norm.
  double l2_norm() const;

 private:
  SmoothTestFunction base_;
  double lo_;
  double hi_;
};

/// Antiderivative table s -> int_0^s f, built from per-panel Gauss-Legendre sums.
class Antiderivative {
 public:
  explicit Antiderivative(RealFn f, std::size_t panels = 32);
  double operator()(double s) const;
  double total() const noexcept { return cumulative_.back(); }

 private:
  RealFn f_;
  std::vector<double> cumulative_;
};

/// Cached primitives of phi, s*phi, (1-s)*phi: evaluates H, Hdot, Q and K images cheaply.
class OperatorImages {
 public:
  explicit OperatorImages(SmoothTestFunction phi);

  const SmoothTestFunction& function() const noexcept { return phi_; }
  double mean() const noexcept { return f_.total(); }
  double h(double t) const;
  double h_dot(double t) const;
  double q(double t) const;
  double k(double t) const;

 private:
  SmoothTestFunction phi_;
  Antiderivative f_;
  Antiderivative sf_;
  Antiderivative rf_;
};

/// K(eta) as a SmoothTestFunction, with (K eta)' = -eta and (K eta)'' = -eta'.
SmoothTestFunction k_image(const SmoothTestFunction& eta);

/// q_t(s) = 1_[0,t)(s) - t 1_[0,1)(s).
double q_indicator(double t, double s);
double h_transform(const SmoothTestFunction& phi, double t);
double h_dot(const SmoothTestFunction& phi, double t);
double q_apply(const SmoothTestFunction& eta, double t);
double k_apply(const SmoothTestFunction& eta, double t);

GridFunction h_transform_grid(const SmoothTestFunction& phi, std::size_t n_intervals = 4096);
GridFunction q_apply_grid(const SmoothTestFunction& eta, std::size_t n_intervals = 4096);
GridFunction k_apply_grid(const SmoothTestFunction& eta, std::size_t n_intervals = 4096);

/// L2(0,1) inner product by quadrature.
double l2_inner(const RealFn& f, const RealFn& g);

/// Catalog of analytic test functions on [0,1].
namespace family {

SmoothTestFunction constant(double c);
SmoothTestFunction monomial(int k);
SmoothTestFunction sine(int k);
SmoothTestFunction cosine(int k);
/// exp(-(s - 1/2)^2 / 0.02).
SmoothTestFunction gaussian_bump();
/// s^0..s^4, sin/cos(2 pi k s) for k = 1..3, and the Gaussian bump.
std::vector<SmoothTestFunction> all();

}  // namespace family

/// C^1 approximation of |x|: quadratic on (-1/n, 1/n), affine outside.
double bn_modulus(int n, double x);
double bn_modulus_derivative(int n, double x);

}  // namespace bbibp
