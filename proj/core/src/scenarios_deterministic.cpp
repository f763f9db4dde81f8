#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "bbibp/error.hpp"
#include "bbibp/gaussoracle.hpp"
#include "bbibp/mollify.hpp"
#include "bbibp/philox.hpp"
#include "bbibp/quadrature.hpp"
#include "bbibp/stransform.hpp"
#include "bbibp/verify.hpp"
#include "scenario_util.hpp"

namespace bbibp {

using detail::finish;
using detail::relative_gap;
using detail::Stopwatch;

VerificationReport run_operator_identities(std::span<const SmoothTestFunction> etas,
                                           const ScenarioConfig& cfg, std::size_t n_grid) {
  if (etas.empty()) throw InvalidArgument("run_operator_identities needs at least one eta");
  if (n_grid < 4) throw InvalidArgument("run_operator_identities needs n_grid >= 4");
  const Stopwatch sw;
  VerificationReport r;
  r.scenario = "operator-identities";
  r.add_input("n_grid", static_cast<long long>(n_grid));
  r.add_input("n_eta", static_cast<long long>(etas.size()));

  double worst_hk = 0.0;
  double worst_q2 = 0.0;
  double worst_quad = 0.0;
  const double h = 1.0 / static_cast<double>(n_grid);
  for (const auto& eta : etas) {
    const OperatorImages eim(eta);
    const OperatorImages kim(k_image(eta));
    std::vector<double> q(n_grid + 1);
    for (std::size_t i = 0; i <= n_grid; ++i) {
      const double t = static_cast<double>(i) * h;
      q[i] = eim.q(t);
      worst_hk = std::max(worst_hk, std::abs(kim.h(t) - q[i]));
    }
    for (std::size_t i = 1; i < n_grid; ++i) {
      const double d2 = (q[i + 1] - 2.0 * q[i] + q[i - 1]) / (h * h);
      worst_q2 = std::max(worst_q2, std::abs(d2 + eta(static_cast<double>(i) * h)));
    }
    const double qf = integrate([&](double t) { return eim.q(t) * eta(t); });
    const double kf = integrate([&](double t) {
      const double k = eim.k(t);
      return k * k;
    });
    worst_quad = std::max(worst_quad, std::abs(qf - kf));
    r.add_route("(Q eta, eta) " + eta.label(), qf);
    r.add_route("(K eta, K eta) " + eta.label(), kf);
  }
  r.add_check("max |H(K eta) - Q eta| on grid", worst_hk, cfg.tolerance("operator.hk_q", 1e-8));
  r.add_check("max |(Q eta)'' + eta| by second differences", worst_q2,
              cfg.tolerance("operator.q2", 1e-4));
  r.add_check("max |(Q eta, eta) - (K eta, K eta)|", worst_quad,
              cfg.tolerance("operator.quadratic", 1e-8));
  finish(r, sw);
  return r;
}

VerificationReport run_lambda_equivalence(std::size_t n_samples, std::uint64_t seed,
                                          const ScenarioConfig& cfg) {
  if (n_samples == 0) throw InvalidArgument("run_lambda_equivalence needs n_samples >= 1");
  const Stopwatch sw;
  VerificationReport r;
  r.scenario = "lambda-equivalence";
  r.add_input("n_samples", static_cast<long long>(n_samples));
  r.add_input("seed", static_cast<long long>(seed));
  r.add_input("range", "x, y in [-5, 5], t in (0.01, 0.99)");

  const Philox4x32::Key key{static_cast<std::uint32_t>(seed),
                            static_cast<std::uint32_t>(seed >> 32)};
  double worst = 0.0;
  double worst_flipped = 0.0;
  double sum_lambda = 0.0;
  double sum_tilde = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const auto a = Philox4x32::apply({static_cast<std::uint32_t>(i), 0x6c616d62u, 0u, 0u}, key);
    const auto b = Philox4x32::apply({static_cast<std::uint32_t>(i), 0x6c616d62u, 1u, 0u}, key);
    const double x = -5.0 + 10.0 * uniform_open((std::uint64_t{a[0]} << 32) | a[1]);
    const double y = -5.0 + 10.0 * uniform_open((std::uint64_t{a[2]} << 32) | a[3]);
    const double t = 0.01 + 0.98 * uniform_open((std::uint64_t{b[0]} << 32) | b[1]);
    const double lam = lambda_fn(x, y, t).real();
    const double til = lambda_tilde(x, y, t).real();
    const double flip = lambda_fn(x, -y, t).real();
    worst = std::max(worst, std::abs(til - lam) / (1.0 + std::abs(lam)));
    worst_flipped = std::max(worst_flipped, std::abs(til - flip) / (1.0 + std::abs(flip)));
    sum_lambda += lam;
    sum_tilde += til;
  }
  const double n = static_cast<double>(n_samples);
  r.add_route("mean lambda(x,y,t)", sum_lambda / n);
  r.add_route("mean lambda_tilde(x,y,t)", sum_tilde / n);
  r.add_check("max |lambda_tilde - lambda| / (1 + |lambda|)", worst,
              cfg.tolerance("lambda.rel", 1e-10));
  r.add_check("max |lambda_tilde(x,y,t) - lambda(x,-y,t)| / (1 + |lambda|)", worst_flipped,
              cfg.tolerance("lambda.rel", 1e-10));
  if (worst > cfg.tolerance("lambda.rel", 1e-10) &&
      worst_flipped <= cfg.tolerance("lambda.rel", 1e-10)) {
    r.add_note(
        "the six-term expansion equals lambda with the sign of y reversed; the two agree only "
        "where x y (1 - 2t) = 0");
  }
  finish(r, sw);
  return r;
}

VerificationReport run_heat_identity(std::span<const SmoothProfile> profiles,
                                     std::span<const SmoothTestFunction> etas,
                                     std::span<const double> t_set, const ScenarioConfig& cfg,
                                     double dt) {
  if (profiles.empty() || etas.empty() || t_set.empty()) {
    throw InvalidArgument("run_heat_identity needs profiles, etas and times");
  }
  for (double t : t_set) {
    if (!(t > 0.1 && t < 0.9)) throw DomainError("run_heat_identity needs t in (0.1, 0.9)");
  }
  const Stopwatch sw;
  VerificationReport r;
  r.scenario = "heat-identity";
  r.add_input("dt", dt);
  r.add_input("n_cases", static_cast<long long>(profiles.size() * etas.size() * t_set.size()));

  double worst = 0.0;
  double worst_order = 0.0;
  for (const auto& phi : profiles) {
    for (const auto& eta : etas) {
      const OperatorImages im(eta);
      auto g = [&](double s) { return gauss_expect(phi.value, GaussParams(im.q(s), s - s * s)); };
      for (double t : t_set) {
        const double v = t - t * t;
        const double q = im.q(t);
        const double qp = im.k(t);
        const double lhs = eta(t) * gauss_expect(phi.derivative1, GaussParams(q, v));
        auto second_diff = [&](double d) { return (g(t + d) - 2.0 * g(t) + g(t - d)) / (d * d); };
        const double d2 = (4.0 * second_diff(0.5 * dt) - second_diff(dt)) / 3.0;
        const double coupling = gauss_expect(
            [&](double y) { return phi.derivative2(y + q) * lambda_fn(qp, y, t).real(); },
            GaussParams(0.0, v));
        const double rhs = -d2 + coupling;
        const double scale = std::max({std::abs(lhs), std::abs(d2), std::abs(coupling), 1e-12});
        worst = std::max(worst, std::abs(lhs - rhs) / scale);

        // Plain second differences should converge at second order.
        const double e1 = std::abs(lhs - (-second_diff(10.0 * dt) + coupling));
        const double e2 = std::abs(lhs - (-second_diff(5.0 * dt) + coupling));
        if (e1 > 1e-9 * scale) worst_order = std::max(worst_order, std::abs(e1 / e2 - 4.0));

        const std::string tag = phi.label + ", eta=" + eta.label() + ", t=" + format_double(t);
        r.add_route("lhs " + tag, lhs);
        r.add_route("rhs " + tag, rhs);
      }
    }
  }
  r.add_check("max relative |lhs - rhs| (Richardson second difference)", worst,
              cfg.tolerance("heat.rel", 1e-3));
  r.add_check("max |error ratio - 4| under step halving", worst_order,
              cfg.tolerance("heat.order", 1.0));
  finish(r, sw);
  return r;
}

VerificationReport run_eps_convergence(const DirectionFunction& h,
                                       std::span<const SmoothTestFunction> phis,
                                       std::span<const double> epsilons,
                                       const ScenarioConfig& cfg) {
  if (phis.empty() || epsilons.empty()) {
    throw InvalidArgument("run_eps_convergence needs test functions and scales");
  }
  const Stopwatch sw;
  VerificationReport r;
  r.scenario = "eps-convergence";
  r.add_input("h", h.label());
  std::string eps_list;
  for (double e : epsilons) eps_list += (eps_list.empty() ? "" : ",") + format_double(e);
  r.add_input("epsilons", eps_list);

  const std::vector<Complex> zs{0.0,
                                1.0,
                                -2.5,
                                5.0,
                                Complex(0.0, 5.0),
                                Complex(3.0, 4.0),
                                Complex(-3.0, -4.0),
                                Complex(0.0, 2.5)};
  const double a1 = growth_a_l1(h);
  const double bsup = growth_b_sup(h);
  const STFunctional limit = s_phi_h(h);
  std::vector<STFunctional> regs;
  for (double e : epsilons) regs.push_back(s_phi_h(h, Mollifier(e)));

  const double slack = cfg.tolerance("eps.monotone_slack", 1e-12);
  double worst_growth = 0.0;
  for (const auto& phi : phis) {
    const double sup = phi.sup_bound();
    auto growth = [&](const STFunctional::Ray& ray) {
      for (const Complex& z : zs) {
        const double rhs = a1 * std::exp(std::norm(z) * sup * sup * bsup);
        worst_growth = std::max(worst_growth, std::abs(ray(z)) / rhs);
      }
    };
    const auto lray = limit.ray(phi);
    growth(lray);
    const Complex lval = lray(1.0);
    r.add_route("limit " + phi.label(), lval.real());
    std::vector<double> err;
    for (std::size_t k = 0; k < regs.size(); ++k) {
      const auto ray = regs[k].ray(phi);
      growth(ray);
      const Complex v = ray(1.0);
      err.push_back(std::abs(v - lval));
      r.add_route("eps=" + format_double(epsilons[k]) + " " + phi.label(), v.real(), err.back());
    }
    double rise = 0.0;
    for (std::size_t k = 1; k < err.size(); ++k) rise = std::max(rise, err[k] - err[k - 1]);
    r.add_check("error nonincreasing in eps, " + phi.label(), rise, slack);
    const double ratio = err.front() > 0.0 ? err.back() / err.front() : 0.0;
    r.add_check("final / initial error, " + phi.label(), ratio,
                cfg.tolerance("eps.final_ratio", 0.5));
    std::string rates;
    for (std::size_t k = 1; k < err.size(); ++k) {
      if (err[k] > 0.0 && err[k - 1] > 0.0) {
        rates += (rates.empty() ? "" : ", ") + format_double(std::log2(err[k - 1] / err[k]));
      }
    }
    if (!rates.empty()) r.add_note("empirical rates log2(err ratio), " + phi.label() + ": " + rates);
  }
  r.add_check("max |S(Phi)(z phi)| / growth bound over |z| <= 5, all eps", worst_growth, 1.0);
  finish(r, sw);
  return r;
}

VerificationReport run_renorm(std::span<const double> epsilons, std::span<const double> t_set,
                              const ScenarioConfig& cfg) {
  if (epsilons.empty() || t_set.empty()) throw InvalidArgument("run_renorm needs eps and t sets");
  const Stopwatch sw;
  VerificationReport r;
  r.scenario = "renorm";
  r.add_input("base_l2_sq", Mollifier::base_l2_sq());
  double worst = 0.0;
  for (double e : epsilons) {
    const Mollifier m(e);
    const double closed = renorm_closed_form(m);
    r.add_route("closed form eps=" + format_double(e), closed);
    for (double t : t_set) {
      if (!(t > e && t < 1.0 - e)) throw DomainError("run_renorm needs t in (eps, 1 - eps)");
      const double kernel = renorm_constant(m, t);
      r.add_route("kernel quadrature eps=" + format_double(e) + " t=" + format_double(t), kernel);
      worst = std::max(worst, std::abs(kernel - closed) / std::abs(closed));
    }
  }
  r.add_check("max relative |kernel norm - closed form|", worst, cfg.tolerance("renorm.rel", 1e-6));
  finish(r, sw);
  return r;
}

VerificationReport run_bn_modulus(std::span<const int> n_set, const ScenarioConfig& cfg) {
  if (n_set.empty()) throw InvalidArgument("run_bn_modulus needs at least one n");
  const Stopwatch sw;
  VerificationReport r;
  r.scenario = "bn-modulus";
  constexpr int points = 10000;
  r.add_input("grid", "x in [-2, 2], 10001 points");
  const double exact_tol = cfg.tolerance("bn.exact", 1e-14);
  for (int n : n_set) {
    if (n < 1) throw InvalidArgument("run_bn_modulus needs n >= 1");
    const double target = 0.5 / n;
    double sup = 0.0;
    double above = 0.0;
    double lip = 0.0;
    double prev_x = 0.0;
    double prev_d = 0.0;
    for (int i = 0; i <= points; ++i) {
      const double x = -2.0 + 4.0 * static_cast<double>(i) / points;
      const double b = bn_modulus(n, x);
      sup = std::max(sup, std::abs(b - std::abs(x)));
      above = std::max(above, std::abs(b) - std::abs(x));
      const double d = bn_modulus_derivative(n, x);
      if (i > 0) lip = std::max(lip, std::abs(d - prev_d) / (x - prev_x));
      prev_x = x;
      prev_d = d;
    }
    const double at_zero = std::abs(bn_modulus(n, 0.0));
    const std::string tag = "n=" + std::to_string(n);
    r.add_route("1/(2n) " + tag, target);
    r.add_route("grid sup |B_n - |x|| " + tag, sup);
    r.add_route("|B_n(0) - 0| " + tag, at_zero);
    r.add_check("error at x = 0 equals 1/(2n), " + tag, std::abs(at_zero - target), exact_tol);
    r.add_check("grid sup error equals 1/(2n), " + tag, std::abs(sup - target), exact_tol);
    r.add_check("max(|B_n(x)| - |x|) <= 0, " + tag, std::max(0.0, above), 0.0);
    r.add_check("derivative Lipschitz constant <= n, " + tag, std::max(0.0, lip - n),
                1e-9 * n);
  }
  r.add_note("|B_n(x) - |x|| vanishes at x = 0 and equals 1/(2n) for |x| >= 1/n");
  finish(r, sw);
  return r;
}

}  // namespace bbibp
