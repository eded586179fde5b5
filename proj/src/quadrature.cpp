#include "chainwave/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "chainwave/error.hpp"

namespace chainwave::quad {

namespace {

template <unsigned N>
GaussRule expand_rule() {
  // boost stores the non-negative half of the symmetric rule
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& x = G::abscissa();
  const auto& w = G::weights();
  GaussRule rule;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      rule.nodes.push_back(0.0);
      rule.weights.push_back(w[i]);
      continue;
    }
    rule.nodes.push_back(-x[i]);
    rule.weights.push_back(w[i]);
    rule.nodes.push_back(x[i]);
    rule.weights.push_back(w[i]);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  static const GaussRule r8 = expand_rule<8>();
  static const GaussRule r16 = expand_rule<16>();
  static const GaussRule r20 = expand_rule<20>();
  static const GaussRule r30 = expand_rule<30>();
  switch (order) {
    case 8: return r8;
    case 16: return r16;
    case 20: return r20;
    case 30: return r30;
    default:
      throw Error(ErrorKind::invalid_argument,
                  "unsupported Gauss-Legendre order " + std::to_string(order));
  }
}

std::vector<Panel> graded_panels(double a, double b, double h, int levels, double ratio,
                                 int n_uniform) {
  if (!(b > a) || !(h > 0.0) || h > b - a || !(ratio > 0.0 && ratio < 1.0) || levels < 0 ||
      n_uniform < 0)
    throw Error(ErrorKind::invalid_argument, "graded_panels: bad layout");
  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(levels + n_uniform + 1));
  double edge = h * std::pow(ratio, levels);
  panels.push_back({a, a + edge});
  for (int j = levels; j > 0; --j) {
    const double next = edge / ratio;
    panels.push_back({a + edge, a + next});
    edge = next;
  }
  if (n_uniform > 0) {
    const double w = (b - a - h) / n_uniform;
    for (int i = 0; i < n_uniform; ++i) {
      const double lo = a + h + w * i;
      const double hi = (i + 1 == n_uniform) ? b : lo + w;
      panels.push_back({lo, hi});
    }
  }
  return panels;
}

std::pair<double, double> adaptive(const std::function<double(double)>& f, double a, double b,
                                   double tol, unsigned max_depth) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol, &err);
  return {value, err};
}

std::vector<Panel> folded_singular_panels(double rate, int refinement) {
  const double u_max = std::sqrt(0.5 * 3.14159265358979323846);
  const double scale = std::ldexp(1.0, -refinement);
  // grading region: the integrand behaves like u^{1-2 alpha} near u = 0
  const double u_grade = std::min(0.25 * u_max, 1.0 / std::sqrt(4.0 * rate + 1.0));
  std::vector<Panel> panels;
  double edge = u_grade * std::pow(0.15, 28);
  panels.push_back({0.0, edge});
  while (edge < u_grade) {
    const double next = std::min(u_grade, edge / 0.15);
    panels.push_back({edge, next});
    edge = next;
  }
  // 16-point panels: at most ~5 radians of phase each, and at most u_max/8 wide
  const double max_width = u_max / 8.0 * scale;
  double u = u_grade;
  while (u < u_max) {
    const double local_rate = 4.0 * u * rate + 1.0;
    double width = std::min(max_width, 5.0 * scale / local_rate);
    // look ahead so the panel's far end obeys the same bound
    width = std::min(width, 5.0 * scale / (4.0 * (u + width) * rate + 1.0));
    const double next = (u_max - u < 1.5 * width) ? u_max : u + width;
    panels.push_back({u, next});
    u = next;
  }
  return panels;
}

}  // namespace chainwave::quad
