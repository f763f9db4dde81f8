#include "bbibp/quadrature.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <string>

#include "bbibp/error.hpp"

namespace bbibp {
namespace {

// boost stores the non-negative half of a symmetric rule; expand it.
template <std::size_t N>
struct ExpandedRule {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};
  PanelRule rule;

  ExpandedRule() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    std::size_t k = 0;
    for (std::size_t i = x.size(); i-- > 0;) {
      if (x[i] == 0.0) continue;
      nodes[k] = -x[i];
      weights[k] = w[i];
      ++k;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      nodes[k] = x[i];
      weights[k] = w[i];
      ++k;
    }
    rule = PanelRule{std::span<const double>(nodes.data(), k),
                     std::span<const double>(weights.data(), k)};
  }
};

}  // namespace

const PanelRule& gauss_legendre_64() {
  static const ExpandedRule<64> r;
  return r.rule;
}

const PanelRule& gauss_legendre_32() {
  static const ExpandedRule<32> r;
  return r.rule;
}

std::vector<QuadNode> composite_nodes(double lo, double hi, std::size_t panels,
                                      const PanelRule& rule) {
  std::vector<QuadNode> out;
  out.reserve(panels * rule.nodes.size());
  const double width = (hi - lo) / static_cast<double>(panels);
  const double half = 0.5 * width;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * width;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      out.push_back({mid + half * rule.nodes[i], half * rule.weights[i]});
    }
  }
  return out;
}

namespace detail {

void throw_non_finite_integrand(double at) {
  throw NonFiniteError("integrand is not finite at t = " + std::to_string(at));
}

}  // namespace detail
}  // namespace bbibp
