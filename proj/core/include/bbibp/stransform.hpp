#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <variant>

#include "bbibp/funcspace.hpp"
#include "bbibp/mollify.hpp"

namespace bbibp {

using Complex = std::complex<double>;

/// S-transform evaluator: (phi, z) -> S(Phi)(z phi).
class STFunctional {
 public:
  using Ray = std::function<Complex(Complex)>;
  using Evaluator = std::function<Complex(const SmoothTestFunction&, Complex)>;
  /// Builds the z -> eval(phi, z) closure, precomputing phi-dependent data.
  using RayFactory = std::function<Ray(const SmoothTestFunction&)>;

  STFunctional(std::string label, RayFactory ray_factory);
  static STFunctional from_evaluator(std::string label, Evaluator eval);

  Complex eval(const SmoothTestFunction& phi, Complex z) const { return ray(phi)(z); }
  /// Generalized expectation, eval(phi, 0).
  Complex expectation(const SmoothTestFunction& phi) const { return eval(phi, 0.0); }
  Ray ray(const SmoothTestFunction& phi) const { return factory_(phi); }
  const std::string& label() const noexcept { return label_; }

 private:
  std::string label_;
  RayFactory factory_;
};

/// S-transform of the constant 1.
STFunctional unit_functional();

Complex lambda_fn(Complex x, Complex y, double t);
/// Six-term expansion carried over verbatim from the Gaussian-IBP derivation.
Complex lambda_tilde(Complex x, Complex y, double t);
double gamma_fn(double t);

struct LimitMode {};
using GammaMode = std::variant<LimitMode, Mollifier>;

STFunctional s_gamma(double t, const GammaMode& mode = LimitMode{});

enum class Process { brownian_bridge, brownian_motion };

/// Donsker delta at level a of the process at time t.
STFunctional s_donsker(Process process, double a, double t);
/// delta_0(|BB_t|), which coincides with delta_0(BB_t).
STFunctional s_donsker_modulus(double t);

STFunctional wick_product(const STFunctional& u, const STFunctional& v);

/// S-transform of int h_t Gamma_t <> delta_0(|BB_t|) dt (or its regularized version).
STFunctional s_phi_h(const DirectionFunction& h, const GammaMode& mode = LimitMode{});

Complex t_transform(const STFunctional& u, const SmoothTestFunction& phi, Complex z);

struct GrowthBound {
  double lhs;
  double rhs;
  bool pass;
};

/// ||A||_{L1(supp h)} of the uniform growth estimate.
double growth_a_l1(const DirectionFunction& h);
/// ||B||_{L^inf(supp h)}.
double growth_b_sup(const DirectionFunction& h);

GrowthBound growth_bound_check(const DirectionFunction& h, const SmoothTestFunction& phi,
                               Complex z, const GammaMode& mode = LimitMode{});

}  // namespace bbibp
