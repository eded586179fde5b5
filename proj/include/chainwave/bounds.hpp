#pragma once

// Sup-norm bounds for the chain and the slow-growth constructions for the
// unpinned case: the alpha family P = a_alpha / |sin(lambda/2)|^alpha and its
// weighted superposition over alpha (the epsilon family).

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "chainwave/chain_model.hpp"

namespace chainwave {

/// sqrt(2H) / w0. Throws pinning_required when w0 = 0.
double energy_sup_bound(const ChainParams& params, double energy_value);

/// (2 / sqrt(w1)) |p|_2 sqrt(t) + |q|_2, for w0 = 0.
double sqrt_growth_bound(double t, double q_norm, double p_norm, const ChainParams& params);

/// Slope part (sqrt(2) / (w1 pi)) |sum p_k| ln t + |q|_2 of the logarithmic
/// bound; the additive constant is not included. Needs w0 = 0 and t >= 1.
double log_growth_bound(double t, const LatticeState& state, const ChainParams& params);

/// a_alpha = sqrt(Gamma(1-alpha) / (2 sqrt(pi) Gamma(1/2-alpha))), 0 < alpha < 1/2.
double alpha_normalization(double alpha);

/// phi(alpha) = 2 a_alpha Gamma(1-alpha) sin(pi alpha/2) / (pi alpha): the
/// coefficient of t^alpha in q_0(t) for the alpha family at w1 = 1/2.
double alpha_leading_amplitude(double alpha);

/// a_alpha (3 + 2/t): allowed deviation of q_0(t) from phi(alpha) t^alpha.
double alpha_remainder_bound(double alpha, double t);

/// int_0^{2pi} a_alpha^2 |sin(lambda/2)|^{-2 alpha} dlambda by graded
/// quadrature (should be 1).
double alpha_normalization_integral(double alpha);

struct GrowthFamily {
  double alpha;
  double a_alpha;
  double phi_alpha;

  static GrowthFamily make(double alpha);
};

class AlphaFamily final : public ClosedFormSpectrum {
 public:
  explicit AlphaFamily(double alpha);
  std::string name() const override { return "alpha-family"; }
  cplx q(double) const override { return {}; }
  cplx p(double lambda) const override;
  bool singular() const override { return true; }
  bool real_even() const override { return true; }
  const GrowthFamily& family() const noexcept { return family_; }

 private:
  GrowthFamily family_;
};

/// P(lambda) = int_0^{1/2} w_eps(alpha) a_alpha |sin(lambda/2)|^{-alpha} dalpha
/// with w_eps(alpha) = (1/2 - alpha)^{eps - 1/2} / phi(alpha). The alpha
/// integral uses u = 1/2 - alpha = v^{1/delta}, delta = eps + 1/2, which turns
/// the endpoint factor into a constant, on panels graded toward v = 0.
class EpsilonFamily final : public ClosedFormSpectrum {
 public:
  /// Throws mesh_not_converged when the next refinement moves P by more than 1e-10 relative.
  explicit EpsilonFamily(double epsilon, int refinement = 0);
  std::string name() const override { return "epsilon-family"; }
  cplx q(double) const override { return {}; }
  cplx p(double lambda) const override { return p_real(lambda); }
  double p_real(double lambda) const;
  bool singular() const override { return true; }
  bool real_even() const override { return true; }
  double epsilon() const noexcept { return epsilon_; }
  double delta() const noexcept { return epsilon_ + 0.5; }
  std::size_t node_count() const noexcept { return alpha_.size(); }

 private:
  EpsilonFamily(double epsilon, int refinement, bool check);

  double epsilon_;
  std::vector<double> alpha_;
  std::vector<double> weight_;
};

SpectralPair alpha_spectrum(double alpha);
SpectralPair epsilon_spectrum(double epsilon, int refinement = 0);

/// int_0^{1/2} w_eps(alpha) dalpha at the given refinement level.
double w_epsilon_integral(double epsilon, int refinement = 0);

/// (int_0^{2pi} |P_eps|^2 dlambda)^{1/2}, from the closed form
/// int_0^{2pi} |sin(lambda/2)|^{-g} dlambda = 2 sqrt(pi) Gamma((1-g)/2) / Gamma(1-g/2)
/// and a 2-D graded quadrature over (alpha, alpha').
double epsilon_l2_norm(double epsilon, int refinement = 0);

/// int_0^{1/2} t^alpha (1/2 - alpha)^{delta-1} dalpha by graded quadrature.
double growth_identity_lhs(double t, double delta, int refinement = 0);
/// sqrt(t) (ln t)^{-delta} gamma(delta, ln(t)/2), t > 1.
double growth_identity_rhs(double t, double delta);

/// Main term of q_0(t) for the epsilon family at coupling w1 (w0 = 0):
/// (1/(2 w1)) sqrt(T) (ln T)^{-delta} gamma(delta, ln(T)/2), T = 2 w1 t.
double growth_prediction(double t, double epsilon, const ChainParams& params);

/// Limit of growth_prediction(t) (ln t)^delta / sqrt(t): Gamma(delta) / sqrt(2 w1).
double growth_limit(double epsilon, const ChainParams& params);

struct BoundsRow {
  double t;
  double m_windowed;
  std::string bound_name;
  double bound_value;
  double residual;  // bound_value - m_windowed for bounds; m_windowed - value for slope parts
};

/// Header `t,M_windowed,bound_name,bound_value,residual`.
void write_bounds_report(const std::vector<BoundsRow>& rows, std::ostream& out);

}  // namespace chainwave
