#include "bbibp/stransform.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "bbibp/error.hpp"
#include "bbibp/quadrature.hpp"

namespace bbibp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double open_unit_variance(double t, const char* what) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError(std::string(what) + " requires 0 < t < 1");
  return t - t * t;
}

void require_interior(double t, const Mollifier& m) {
  if (!(t > m.epsilon() && t < 1.0 - m.epsilon())) {
    throw DomainError("regularized mode requires t in (eps, 1 - eps)");
  }
}

// Hdot (limit) or its mollified version at t.
double derivative_argument(const std::shared_ptr<const OperatorImages>& im, double t,
                           const GammaMode& mode) {
  if (const auto* m = std::get_if<Mollifier>(&mode)) {
    return mollified_derivative([&im](double s) { return im->h(s); }, *m, t);
  }
  return im->h_dot(t);
}

}  // namespace

STFunctional::STFunctional(std::string label, RayFactory ray_factory)
    : label_(std::move(label)), factory_(std::move(ray_factory)) {
  if (!factory_) throw InvalidArgument("STFunctional needs a ray factory");
}

STFunctional STFunctional::from_evaluator(std::string label, Evaluator eval) {
  return STFunctional(std::move(label), [eval](const SmoothTestFunction& phi) -> Ray {
    return [eval, phi](Complex z) { return eval(phi, z); };
  });
}

STFunctional unit_functional() {
  return STFunctional("1", [](const SmoothTestFunction&) -> STFunctional::Ray {
    return [](Complex) { return Complex(1.0); };
  });
}

double gamma_fn(double t) {
  const double v = open_unit_variance(t, "gamma_fn");
  return 0.5 * (1.0 - 2.0 * t) / v;
}

Complex lambda_fn(Complex x, Complex y, double t) {
  const double v = open_unit_variance(t, "lambda_fn");
  const Complex a = x + 0.5 * y * (1.0 - 2.0 * t) / v;
  return a * a - 0.25 / v;
}

Complex lambda_tilde(Complex x, Complex y, double t) {
  const double v = open_unit_variance(t, "lambda_tilde");
  const double r = 1.0 - t;
  const double yy = 1.0 / (r * r) - 1.0 / (r * v) + 0.25 / (v * v);
  const double xy = 1.0 / v - 2.0 / r;
  return x * x + y * y * yy - x * y * xy - 0.25 / v;
}

STFunctional s_gamma(double t, const GammaMode& mode) {
  open_unit_variance(t, "s_gamma");
  std::string label = "Gamma_t";
  if (const auto* m = std::get_if<Mollifier>(&mode)) {
    require_interior(t, *m);
    label = "Gamma_eps,t";
  }
  return STFunctional(label, [t, mode](const SmoothTestFunction& phi) -> STFunctional::Ray {
    auto im = std::make_shared<const OperatorImages>(phi);
    const double hd = derivative_argument(im, t, mode);
    const double h = im->h(t);
    return [hd, h, t](Complex z) { return lambda_fn(z * hd, -z * h, t); };
  });
}

STFunctional s_donsker(Process process, double a, double t) {
  double variance = 0.0;
  if (process == Process::brownian_bridge) {
    variance = open_unit_variance(t, "s_donsker");
  } else {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("s_donsker(BM) requires 0 < t <= 1");
    variance = t;
  }
  const bool bridge = process == Process::brownian_bridge;
  return STFunctional(bridge ? "delta_a(BB_t)" : "delta_a(B_t)",
                      [=](const SmoothTestFunction& phi) -> STFunctional::Ray {
                        const OperatorImages im(phi);
                        // <q_t, phi> for the bridge, <1_[0,t), phi> for Brownian motion.
                        const double shift = bridge ? im.h(t) : im.h(t) + t * im.mean();
                        const double norm = 1.0 / std::sqrt(kTwoPi * variance);
                        return [=](Complex z) {
                          const Complex d = z * shift - a;
                          return norm * std::exp(-d * d / (2.0 * variance));
                        };
                      });
}

STFunctional s_donsker_modulus(double t) {
  const STFunctional base = s_donsker(Process::brownian_bridge, 0.0, t);
  return STFunctional("delta_0(|BB_t|)", [base](const SmoothTestFunction& phi) {
    return base.ray(phi);
  });
}

STFunctional wick_product(const STFunctional& u, const STFunctional& v) {
  return STFunctional("(" + u.label() + ")<>(" + v.label() + ")",
                      [u, v](const SmoothTestFunction& phi) -> STFunctional::Ray {
                        auto ru = u.ray(phi);
                        auto rv = v.ray(phi);
                        return [ru, rv](Complex z) { return ru(z) * rv(z); };
                      });
}

STFunctional s_phi_h(const DirectionFunction& h, const GammaMode& mode) {
  std::string label = "Phi_h";
  if (const auto* m = std::get_if<Mollifier>(&mode)) {
    if (!(h.support_lo() > m->epsilon() && h.support_hi() < 1.0 - m->epsilon())) {
      throw SupportError("supp(h) must lie inside (eps, 1 - eps)");
    }
    label = "Phi_eps,h";
  }
  return STFunctional(label, [h, mode](const SmoothTestFunction& phi) -> STFunctional::Ray {
    struct Profile {
      std::vector<double> t, weight, h_val, hd_val, inv_two_v;
    };
    auto prof = std::make_shared<Profile>();
    auto im = std::make_shared<const OperatorImages>(phi);
    // Tabulate the z-independent part of the integrand once per phi.
    for (const QuadNode& n : composite_nodes(h.support_lo(), h.support_hi())) {
      const double v = n.x - n.x * n.x;
      prof->t.push_back(n.x);
      prof->h_val.push_back(im->h(n.x));
      prof->hd_val.push_back(derivative_argument(im, n.x, mode));
      prof->inv_two_v.push_back(0.5 / v);
      prof->weight.push_back(n.w * h(n.x) / std::sqrt(kTwoPi * v));
    }
    return [prof](Complex z) {
      Complex sum = 0.0;
      for (std::size_t k = 0; k < prof->t.size(); ++k) {
        const Complex zh = z * prof->h_val[k];
        sum += prof->weight[k] * lambda_fn(z * prof->hd_val[k], -zh, prof->t[k]) *
               std::exp(-zh * zh * prof->inv_two_v[k]);
      }
      return sum;
    };
  });
}

Complex t_transform(const STFunctional& u, const SmoothTestFunction& phi, Complex z) {
  const double n2 = integrate([&phi](double s) { return phi(s) * phi(s); });
  return std::exp(-z * z * n2 / 2.0) * u.eval(phi, Complex(0.0, 1.0) * z);
}

double growth_a_l1(const DirectionFunction& h) {
  return integrate(
      [&h](double t) {
        const double v = t - t * t;
        const double d = 1.0 - 2.0 * t;
        return std::abs(h(t)) / std::sqrt(kTwoPi * v) *
               (8.0 + 2.0 * t * t * d * d / (v * v) + 0.25 / v);
      },
      QuadratureMode::regular, h.support_lo(), h.support_hi());
}

double growth_b_sup(const DirectionFunction& h) {
  // 2t^2/(t - t^2) + 1 = 2t/(1 - t) + 1 is increasing in t.
  const double t = h.support_hi();
  return 2.0 * t / (1.0 - t) + 1.0;
}

GrowthBound growth_bound_check(const DirectionFunction& h, const SmoothTestFunction& phi,
                               Complex z, const GammaMode& mode) {
  const double lhs = std::abs(s_phi_h(h, mode).eval(phi, z));
  const double s = phi.sup_bound();
  const double rhs = growth_a_l1(h) * std::exp(std::norm(z) * s * s * growth_b_sup(h));
  return GrowthBound{lhs, rhs, lhs <= rhs};
}

}  // namespace bbibp
