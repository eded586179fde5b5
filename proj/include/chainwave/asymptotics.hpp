#pragma once

// Large-time and along-ray predictions for q_k(t), and tools for measuring
// how fast the exact solution approaches them.

#include <iosfwd>
#include <string>
#include <vector>

#include "chainwave/chain_model.hpp"
#include "chainwave/spectral_solver.hpp"

namespace chainwave {

enum class RayRegime { supersonic, critical, subsonic };

const char* to_string(RayRegime regime);

/// beta^2 w1^2 - 1 - beta w0.
double ray_discriminant(double beta, const ChainParams& params);

/// Sign of ray_discriminant, with |value| <= 1e-12 counted as critical.
RayRegime classify_ray(double beta, const ChainParams& params);

/// Stationary points of h(lambda) = lambda + beta w(lambda) on (-pi, 0) for the
/// ray t = beta |k|.
struct RayGeometry {
  double beta;
  double gamma;
  double delta;      // sqrt((beta^2 w1^2 - 1)^2 - beta^2 w0^2)
  double mu_plus;    // -arccos((1 + delta) / (beta^2 w1^2))
  double mu_minus;   // -arccos((1 - delta) / (beta^2 w1^2))
  double c_plus;     // (1/2) sqrt(beta w(mu) / (2 pi delta)), zero when w(mu_plus) = 0
  double c_minus;
  double phase_residual;  // max |h'(mu)| over the contributing points
};

/// h'(lambda) = 1 + beta w'(lambda).
double ray_phase_derivative(double beta, const ChainParams& params, double lambda);
/// h''(lambda) = beta w''(lambda).
double ray_phase_second_derivative(double beta, const ChainParams& params, double lambda);

/// Throws not_supersonic unless classify_ray gives supersonic, and
/// no_convergence if a computed point misses h' = 0 by more than 1e-10.
RayGeometry ray_geometry(double beta, const ChainParams& params);

/// k (mu + beta w(mu)) + branch (pi/4) sign(k) for branch = +1 (mu_plus) or -1 (mu_minus).
double ray_phase(const RayGeometry& geo, const ChainParams& params, int branch, long k);

/// Leading along-ray term at t = beta |k|: |k|^{-1/2} times the sum over both
/// stationary points of c [Q(-mu) e^{i phase} + Q(mu) e^{-i phase}]
/// - i c [g(-mu) e^{i phase} - g(mu) e^{-i phase}], g = P / w.
double ray_asymptote(const SpectralPair& spec, const RayGeometry& geo, long k,
                     const ChainParams& params);

struct PinnedCoefficients {
  double c1, s1, c2, s2;
};

PinnedCoefficients pinned_coefficients(const SpectralPair& spec, const ChainParams& params);

/// t^{-1/2} [C1 cos(a) + S1 sin(a) + (-1)^k (C2 cos(b) + S2 sin(b))] with
/// a = t w0 + pi/4 and b = t w0' - pi/4. Needs w0 > 0.
double fixed_k_asymptote_pinned(const SpectralPair& spec, const ChainParams& params, long k,
                                double t);

/// P(0)/(2 w1) + (-1)^k t^{-1/2} (C cos(c) + S sin(c)), c = 2 w1 t - pi/4,
/// C = Q(pi)/sqrt(pi w1), S = P(pi)/(2 w1 sqrt(pi w1)). Needs w0 = 0.
double fixed_k_asymptote_unpinned(const SpectralPair& spec, const ChainParams& params, long k,
                                  double t);

/// int_0^t J_{2k}(2 w1 s) ds by adaptive Gauss-Kronrod over half-period pieces.
double bessel_time_integral(long k, double t, const ChainParams& params);

/// The same quantity as (1/2pi) int (sin(t w)/w) e^{-ik lambda} dlambda.
double bessel_time_integral_spectral(long k, double t, const ChainParams& params,
                                     const SolverConfig& cfg = {});

/// Least-squares line through (log x, log y).
struct PowerFit {
  double slope;
  double intercept;
  double r_squared;
  /// -slope: the decay exponent when y ~ x^{-p}.
  double decay() const noexcept { return -slope; }
};

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

/// Decay exponent of |q_k(t_fixed)| over k_list. Points below 1e-13 are
/// dropped; throws values_below_noise_floor if fewer than two remain.
PowerFit spatial_decay_fit(const SpectralPair& spec, const ChainParams& params, double t_fixed,
                           const std::vector<long>& k_list, const SolverConfig& cfg = {});
double spatial_decay_exponent(const SpectralPair& spec, const ChainParams& params, double t_fixed,
                              const std::vector<long>& k_list, const SolverConfig& cfg = {});

/// max over k <= j < k + window of |q_j(beta j)|.
double ray_envelope(const SpectralPair& spec, const ChainParams& params, double beta, long k,
                    long window, const SolverConfig& cfg = {});

/// Decay fit of ray_envelope over k_list (same noise-floor rule).
PowerFit ray_decay_fit(const SpectralPair& spec, const ChainParams& params, double beta,
                       const std::vector<long>& k_list, long window,
                       const SolverConfig& cfg = {});

/// Site window long enough to cover one beat of the two stationary-point
/// phases: max(8, ceil(2 pi / |h(mu_plus) - h(mu_minus)|) + 2).
long ray_beat_window(const RayGeometry& geo, const ChainParams& params);

/// max over k <= j < k + window of |q_j(beta j) - ray_asymptote(j)|.
double ray_residual_envelope(const SpectralPair& spec, const ChainParams& params,
                             const RayGeometry& geo, long k, long window,
                             const SolverConfig& cfg = {});

/// max over `samples` equally spaced times in [t, t + pi/w1] of
/// |q_k(s) - fixed-k asymptote(s)| (pinned or unpinned by w0).
double fixed_k_residual_envelope(const SpectralPair& spec, const ChainParams& params, long k,
                                 double t, int samples = 40, const SolverConfig& cfg = {});

struct AsymptoteReport {
  std::string regime;
  long k;
  double t;
  double exact;
  double predicted;
  double residual;
  double scaled_residual;
};

/// Header `regime,k,t,exact,predicted,residual,scaled_residual`.
void write_asym_report(const std::vector<AsymptoteReport>& rows, std::ostream& out);

}  // namespace chainwave
