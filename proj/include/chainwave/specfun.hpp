#pragma once

// Special functions used by the chain formulas. Each has a primary evaluator
// and, where it matters, an independent second route for cross-checking.

namespace chainwave::specfun {

enum class Method { series, integral, recurrence, continued_fraction, asymptotic, closed_form };

const char* to_string(Method m);

struct SpecFunResult {
  double value;
  double est_error;
  Method method;
};

/// Integer-order Bessel function of the first kind. Miller backward recurrence
/// for n > x, forward recurrence from J0/J1 (Hankel expansion for x >= 25)
/// otherwise.
double bessel_j(int n, double x);

/// Ascending power series; usable for moderate x (cancellation grows like e^x).
SpecFunResult bessel_j_series(int n, double x);

/// Trapezoid rule on (1/2pi) int_0^{2pi} cos(n t - x sin t) dt, spectrally
/// accurate because the integrand is periodic and entire.
SpecFunResult bessel_j_integral(int n, double x);

/// Lanczos approximation with reflection below 1/2. Throws at poles.
double gamma_fn(double x);
double log_gamma(double x);
/// Stirling series with upward recurrence; second route for log_gamma.
SpecFunResult log_gamma_stirling(double x);

/// gamma(s, x) = int_0^x e^{-y} y^{s-1} dy.
double lower_incomplete_gamma(double s, double x);
/// Gamma(s, x) = int_x^inf e^{-y} y^{s-1} dy.
double upper_incomplete_gamma(double s, double x);
/// Evaluates gamma(s, x) and reports which route was taken.
SpecFunResult lower_incomplete_gamma_result(double s, double x);

double beta_fn(double a, double b);

/// int_0^inf sin(u) / u^{alpha+1} du = Gamma(1-alpha) sin(pi alpha / 2) / alpha,
/// 0 < alpha < 1.
double bohmer_sine_integral(double alpha);

/// Same integral by oscillatory quadrature on [0, R] with an asymptotic
/// integration-by-parts tail; R is rounded up to a multiple of 2 pi.
SpecFunResult bohmer_sine_integral_quadrature(double alpha, double cutoff = 6283.0);

/// int_0^inf sin^2(x) / x^2 dx by quadrature (exact value pi/2).
SpecFunResult dirichlet_constant_check();

}  // namespace chainwave::specfun
