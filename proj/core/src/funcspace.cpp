#include "bbibp/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bbibp/error.hpp"
#include "bbibp/quadrature.hpp"

namespace bbibp {
namespace {

constexpr std::size_t kSupGrid = 4096;
constexpr int kSelfCheckPoints = 100;
constexpr double kFdStep = 1e-5;
constexpr double kFdTolerance = 1e-6;

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void check_derivative(const std::string& label, const char* which, const RealFn& f,
                      const RealFn& df, double extra_scale) {
  std::vector<double> fd(kSelfCheckPoints);
  std::vector<double> exact(kSelfCheckPoints);
  double scale = extra_scale;
  for (int j = 0; j < kSelfCheckPoints; ++j) {
    const double t = static_cast<double>(j + 1) / (kSelfCheckPoints + 1);
    fd[j] = (f(t + kFdStep) - f(t - kFdStep)) / (2.0 * kFdStep);
    exact[j] = df(t);
    if (!std::isfinite(fd[j]) || !std::isfinite(exact[j])) {
      throw NonFiniteError(label + ": non-finite " + which + " at t = " + format_number(t));
    }
    scale = std::max(scale, std::abs(exact[j]));
  }
  for (int j = 0; j < kSelfCheckPoints; ++j) {
    if (std::abs(fd[j] - exact[j]) > kFdTolerance * scale) {
      const double t = static_cast<double>(j + 1) / (kSelfCheckPoints + 1);
      throw InvalidArgument(label + ": " + which + " disagrees with finite difference at t = " +
                            format_number(t));
    }
  }
}

}  // namespace

// GridFunction

GridFunction::GridFunction(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 3) throw InvalidArgument("GridFunction needs n_intervals >= 2");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw NonFiniteError("GridFunction value " + std::to_string(i) + " is not finite");
    }
  }
}

GridFunction GridFunction::sample(std::size_t n_intervals, const RealFn& f) {
  if (n_intervals < 2) throw InvalidArgument("GridFunction needs n_intervals >= 2");
  std::vector<double> v(n_intervals + 1);
  for (std::size_t i = 0; i <= n_intervals; ++i) {
    v[i] = f(static_cast<double>(i) / static_cast<double>(n_intervals));
  }
  return GridFunction(std::move(v));
}

double GridFunction::integral() const noexcept {
  double s = 0.5 * (values_.front() + values_.back());
  for (std::size_t i = 1; i + 1 < values_.size(); ++i) s += values_[i];
  return s * step();
}

double GridFunction::inner(const GridFunction& other) const {
  if (other.size() != size()) throw InvalidArgument("GridFunction::inner: grid mismatch");
  const auto& a = values_;
  const auto& b = other.values_;
  double s = 0.5 * (a.front() * b.front() + a.back() * b.back());
  for (std::size_t i = 1; i + 1 < a.size(); ++i) s += a[i] * b[i];
  return s * step();
}

double GridFunction::norm_sq() const noexcept { return inner(*this); }

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

// SmoothTestFunction

SmoothTestFunction::SmoothTestFunction(std::string label, RealFn value, RealFn derivative1,
                                       RealFn derivative2, double sup_bound) {
  if (!value || !derivative1) throw InvalidArgument(label + ": evaluator and derivative1 required");
  if (!(sup_bound >= 0.0) || !std::isfinite(sup_bound)) {
    throw InvalidArgument(label + ": sup_bound must be finite and non-negative");
  }
  double grid_max = 0.0;
  for (std::size_t i = 0; i <= kSupGrid; ++i) {
    const double v = value(static_cast<double>(i) / kSupGrid);
    if (!std::isfinite(v)) throw NonFiniteError(label + ": non-finite value on [0,1]");
    grid_max = std::max(grid_max, std::abs(v));
  }
  if (grid_max > sup_bound) {
    throw InvalidArgument(label + ": sup_bound " + format_number(sup_bound) +
                          " below grid maximum " + format_number(grid_max));
  }
  check_derivative(label, "derivative1", value, derivative1, 0.0);
  if (derivative2) check_derivative(label, "derivative2", derivative1, derivative2, 0.0);
  impl_ = std::make_shared<const Impl>(Impl{std::move(label), std::move(value),
                                            std::move(derivative1), std::move(derivative2),
                                            sup_bound});
}

SmoothTestFunction SmoothTestFunction::with_grid_bound(std::string label, RealFn value,
                                                       RealFn derivative1, RealFn derivative2) {
  double vmax = 0.0;
  double dmax = 0.0;
  for (std::size_t i = 0; i <= kSupGrid; ++i) {
    const double t = static_cast<double>(i) / kSupGrid;
    vmax = std::max(vmax, std::abs(value(t)));
    dmax = std::max(dmax, std::abs(derivative1(t)));
  }
  // Between grid points |f| can exceed the sampled maximum by at most half a step times sup|f'|.
  const double bound = vmax + dmax / static_cast<double>(kSupGrid);
  return SmoothTestFunction(std::move(label), std::move(value), std::move(derivative1),
                            std::move(derivative2), bound);
}

double SmoothTestFunction::derivative2(double t) const {
  if (!impl_->derivative2) throw InvalidArgument(impl_->label + ": no second derivative");
  return impl_->derivative2(t);
}

SmoothTestFunction SmoothTestFunction::scaled(double c) const {
  auto self = impl_;
  RealFn d2;
  if (self->derivative2) d2 = [self, c](double t) { return c * self->derivative2(t); };
  return SmoothTestFunction(
      format_number(c) + "*" + self->label, [self, c](double t) { return c * self->value(t); },
      [self, c](double t) { return c * self->derivative1(t); }, std::move(d2),
      std::abs(c) * self->sup_bound);
}

GridFunction SmoothTestFunction::sample(std::size_t n_intervals) const {
  auto self = impl_;
  return GridFunction::sample(n_intervals, [self](double t) { return self->value(t); });
}

// DirectionFunction

DirectionFunction::DirectionFunction(SmoothTestFunction base, double support_lo,
                                     double support_hi)
    : base_(std::move(base)), lo_(support_lo), hi_(support_hi) {
  if (!(0.0 < lo_ && lo_ < hi_ && hi_ < 1.0)) {
    throw InvalidArgument("DirectionFunction support must satisfy 0 < lo < hi < 1");
  }
  if (!base_.has_derivative2()) {
    throw InvalidArgument("DirectionFunction requires a second derivative");
  }
  const double tol = 1e-12 * std::max(1.0, base_.sup_bound());
  constexpr int per_side = 50;
  for (int j = 0; j < 2 * per_side; ++j) {
    const double t = j < per_side
                         ? lo_ * static_cast<double>(j) / per_side
                         : hi_ + (1.0 - hi_) * static_cast<double>(j - per_side + 1) / per_side;
    if (std::abs(base_(t)) > tol || std::abs(base_.derivative1(t)) > tol ||
        std::abs(base_.derivative2(t)) > tol) {
      throw SupportError(base_.label() + ": does not vanish outside its support at t = " +
                         format_number(t));
    }
  }
}

DirectionFunction DirectionFunction::bump(double lo, double hi, double amplitude) {
  if (!(0.0 < lo && lo < hi && hi < 1.0)) {
    throw InvalidArgument("bump support must satisfy 0 < lo < hi < 1");
  }
  const double mid = lo + hi;
  const double c = 2.0 / (hi - lo);
  auto u_of = [mid, c](double t) { return (2.0 * t - mid) * 0.5 * c; };
  auto value = [u_of, amplitude](double t) {
    const double u = u_of(t);
    if (std::abs(u) >= 1.0) return 0.0;
    const double w = 1.0 - u * u;
    return amplitude * w * w * w;
  };
  auto d1 = [u_of, amplitude, c](double t) {
    const double u = u_of(t);
    if (std::abs(u) >= 1.0) return 0.0;
    const double w = 1.0 - u * u;
    return -6.0 * amplitude * c * u * w * w;
  };
  auto d2 = [u_of, amplitude, c](double t) {
    const double u = u_of(t);
    if (std::abs(u) >= 1.0) return 0.0;
    const double w = 1.0 - u * u;
    return amplitude * c * c * w * (30.0 * u * u - 6.0);
  };
  std::string label = "bump(" + format_number(lo) + "," + format_number(hi) + ")";
  if (amplitude != 1.0) label = format_number(amplitude) + "*" + label;
  return DirectionFunction(SmoothTestFunction(std::move(label), value, d1, d2, std::abs(amplitude)),
                           lo, hi);
}

DirectionFunction DirectionFunction::scaled(double c) const {
  return DirectionFunction(base_.scaled(c), lo_, hi_);
}

double DirectionFunction::second_derivative_sup() const {
  constexpr int n = 10000;
  double m = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = lo_ + (hi_ - lo_) * static_cast<double>(i) / n;
    m = std::max(m, std::abs(base_.derivative2(t)));
  }
  return m;
}

double DirectionFunction::l2_norm() const {
  const auto& b = base_;
  return std::sqrt(
      integrate([&b](double t) { return b(t) * b(t); }, QuadratureMode::regular, lo_, hi_));
}

// Antiderivative

Antiderivative::Antiderivative(RealFn f, std::size_t panels)
    : f_(std::move(f)), cumulative_(panels + 1, 0.0) {
  const double width = 1.0 / static_cast<double>(panels);
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = static_cast<double>(k) * width;
    cumulative_[k + 1] = cumulative_[k] + integrate_panels(f_, a, a + width, 1);
  }
}

double Antiderivative::operator()(double s) const {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return cumulative_.back();
  const std::size_t panels = cumulative_.size() - 1;
  const auto k = std::min(static_cast<std::size_t>(s * static_cast<double>(panels)), panels - 1);
  const double a = static_cast<double>(k) / static_cast<double>(panels);
  if (s <= a) return cumulative_[k];
  return cumulative_[k] + integrate_panels(f_, a, s, 1, gauss_legendre_32());
}

// OperatorImages

OperatorImages::OperatorImages(SmoothTestFunction phi)
    : phi_(std::move(phi)),
      f_([p = phi_](double s) { return p(s); }),
      sf_([p = phi_](double s) { return s * p(s); }),
      rf_([p = phi_](double s) { return (1.0 - s) * p(s); }) {}

double OperatorImages::h(double t) const { return f_(t) - t * f_.total(); }

double OperatorImages::h_dot(double t) const { return phi_(t) - f_.total(); }

double OperatorImages::q(double t) const {
  return (1.0 - t) * sf_(t) + t * (rf_.total() - rf_(t));
}

double OperatorImages::k(double t) const { return (f_.total() - f_(t)) - sf_.total(); }

SmoothTestFunction k_image(const SmoothTestFunction& eta) {
  auto images = std::make_shared<const OperatorImages>(eta);
  return SmoothTestFunction::with_grid_bound(
      "K[" + eta.label() + "]", [images](double t) { return images->k(t); },
      [eta](double t) { return -eta(t); }, [eta](double t) { return -eta.derivative1(t); });
}

// Free operators

double q_indicator(double t, double s) {
  if (t <= 0.0) return 0.0;
  if (s < 0.0 || s >= 1.0) return 0.0;
  return (s < t ? 1.0 : 0.0) - t;
}

double h_transform(const SmoothTestFunction& phi, double t) { return OperatorImages(phi).h(t); }
double h_dot(const SmoothTestFunction& phi, double t) { return OperatorImages(phi).h_dot(t); }
double q_apply(const SmoothTestFunction& eta, double t) { return OperatorImages(eta).q(t); }
double k_apply(const SmoothTestFunction& eta, double t) { return OperatorImages(eta).k(t); }

GridFunction h_transform_grid(const SmoothTestFunction& phi, std::size_t n_intervals) {
  const OperatorImages im(phi);
  return GridFunction::sample(n_intervals, [&im](double t) { return im.h(t); });
}

GridFunction q_apply_grid(const SmoothTestFunction& eta, std::size_t n_intervals) {
  const OperatorImages im(eta);
  return GridFunction::sample(n_intervals, [&im](double t) { return im.q(t); });
}

GridFunction k_apply_grid(const SmoothTestFunction& eta, std::size_t n_intervals) {
  const OperatorImages im(eta);
  return GridFunction::sample(n_intervals, [&im](double t) { return im.k(t); });
}

double l2_inner(const RealFn& f, const RealFn& g) {
  return integrate([&](double t) { return f(t) * g(t); });
}

namespace family {

SmoothTestFunction constant(double c) {
  return SmoothTestFunction(
      format_number(c), [c](double) { return c; }, [](double) { return 0.0; },
      [](double) { return 0.0; }, std::abs(c));
}

SmoothTestFunction monomial(int k) {
  if (k < 0) throw InvalidArgument("monomial degree must be non-negative");
  if (k == 0) return constant(1.0);
  const std::string label = k == 1 ? "s" : "s^" + std::to_string(k);
  const double dk = k;
  return SmoothTestFunction(
      label, [dk](double s) { return std::pow(s, dk); },
      [dk](double s) { return dk * std::pow(s, dk - 1.0); },
      [dk](double s) { return dk == 1.0 ? 0.0 : dk * (dk - 1.0) * std::pow(s, dk - 2.0); }, 1.0);
}

SmoothTestFunction sine(int k) {
  const double w = 2.0 * std::numbers::pi * k;
  return SmoothTestFunction(
      "sin(" + std::to_string(2 * k) + "pi s)", [w](double s) { return std::sin(w * s); },
      [w](double s) { return w * std::cos(w * s); },
      [w](double s) { return -w * w * std::sin(w * s); }, 1.0);
}

SmoothTestFunction cosine(int k) {
  const double w = 2.0 * std::numbers::pi * k;
  return SmoothTestFunction(
      "cos(" + std::to_string(2 * k) + "pi s)", [w](double s) { return std::cos(w * s); },
      [w](double s) { return -w * std::sin(w * s); },
      [w](double s) { return -w * w * std::cos(w * s); }, 1.0);
}

SmoothTestFunction gaussian_bump() {
  constexpr double width = 0.02;
  auto g = [](double s) {
    const double d = s - 0.5;
    return std::exp(-d * d / width);
  };
  return SmoothTestFunction(
      "gauss_bump", g, [g](double s) { return -2.0 * (s - 0.5) / width * g(s); },
      [g](double s) {
        const double a = 2.0 * (s - 0.5) / width;
        return (a * a - 2.0 / width) * g(s);
      },
      1.0);
}

std::vector<SmoothTestFunction> all() {
  std::vector<SmoothTestFunction> out;
  for (int k = 0; k <= 4; ++k) out.push_back(monomial(k));
  for (int k = 1; k <= 3; ++k) out.push_back(sine(k));
  for (int k = 1; k <= 3; ++k) out.push_back(cosine(k));
  out.push_back(gaussian_bump());
  return out;
}

}  // namespace family

double bn_modulus(int n, double x) {
  const double r = 1.0 / n;
  if (x <= -r) return -x - 0.5 * r;
  if (x >= r) return x - 0.5 * r;
  return 0.5 * n * x * x;
}

double bn_modulus_derivative(int n, double x) {
  const double r = 1.0 / n;
  if (x <= -r) return -1.0;
  if (x >= r) return 1.0;
  return n * x;
}

}  // namespace bbibp
