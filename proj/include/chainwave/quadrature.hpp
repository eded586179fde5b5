#pragma once

// Quadrature building blocks: Gauss-Legendre panels, geometric grading toward a
// singular endpoint, the periodic trapezoid rule and adaptive Gauss-Kronrod.

#include <cmath>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace chainwave::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Supported orders: 8, 16, 20, 30.
const GaussRule& gauss_legendre(int order);

struct Panel {
  double a;
  double b;
};

/// [a, b] split as [a, a + h r^L], ..., [a + h r, a + h], then `n_uniform`
/// equal panels on [a + h, b]. Grading ratio r in (0, 1).
std::vector<Panel> graded_panels(double a, double b, double h, int levels, double ratio,
                                 int n_uniform);

template <class F>
double integrate_panels(F&& f, std::span<const Panel> panels, const GaussRule& rule) {
  double sum = 0.0;
  for (const Panel& pn : panels) {
    const double mid = 0.5 * (pn.a + pn.b);
    const double half = 0.5 * (pn.b - pn.a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    sum += half * s;
  }
  return sum;
}

/// Mean over the uniform N-point mesh of [0, 2 pi): (1/N) sum_j f(2 pi j / N).
template <class F>
auto periodic_mean(F&& f, std::size_t n) {
  using R = decltype(f(0.0));
  R sum{};
  const double h = 2.0 * 3.14159265358979323846 / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) sum += f(h * static_cast<double>(j));
  return sum / static_cast<double>(n);
}

/// Adaptive 15-point Gauss-Kronrod; returns (value, error estimate).
std::pair<double, double> adaptive(const std::function<double(double)>& f, double a, double b,
                                   double tol, unsigned max_depth = 30);

/// Panels on u in [0, sqrt(pi/2)] for the substitution lambda = 2 u^2, graded
/// toward u = 0 and sized so that an integrand oscillating at `rate` radians
/// per unit lambda gets a bounded phase change per panel. Each refinement
/// level halves the panel widths.
std::vector<Panel> folded_singular_panels(double rate, int refinement);

/// (1/pi) int_0^pi g(lambda) dlambda for g with an integrable singularity at
/// lambda = 0, via lambda = 2 u^2 on `folded_singular_panels`.
template <class G>
double folded_singular_mean(G&& g, double rate, int refinement) {
  const auto panels = folded_singular_panels(rate, refinement);
  const auto& rule = gauss_legendre(16);
  const double integral = integrate_panels(
      [&](double u) { return g(2.0 * u * u) * 4.0 * u; }, panels, rule);
  return integral / 3.14159265358979323846;
}

}  // namespace chainwave::quad
