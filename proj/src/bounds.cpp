#include "chainwave/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "chainwave/error.hpp"
#include "chainwave/quadrature.hpp"
#include "chainwave/specfun.hpp"

namespace chainwave {

namespace {

using specfun::gamma_fn;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5))
    throw Error(ErrorKind::alpha_out_of_range, "alpha must lie in (0, 1/2)");
}

void require_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw Error(ErrorKind::epsilon_out_of_range, "epsilon must lie in (0, 1/2)");
}

void require_unpinned(const ChainParams& params) {
  if (params.omega0() != 0.0)
    throw Error(ErrorKind::requires_omega0_zero, "this quantity is defined for omega0 = 0");
}

// Everything near alpha = 1/2 is evaluated from u = 1/2 - alpha, which stays
// representable long after 1/2 - u rounds to 1/2.
double a_from_u(double u) {
  return std::sqrt(gamma_fn(0.5 + u) / (2.0 * std::sqrt(kPi) * gamma_fn(u)));
}

double phi_from_u(double u) {
  const double alpha = 0.5 - u;
  return 2.0 * a_from_u(u) * gamma_fn(1.0 - alpha) * std::sin(0.5 * kPi * alpha) / (kPi * alpha);
}

// pi alpha / (2 Gamma(1-alpha) sin(pi alpha/2)) = w_eps(alpha) a_alpha (1/2-alpha)^{1/2-eps}
double smooth_weight(double alpha) {
  if (alpha < 1e-8) return 1.0;
  return kPi * alpha / (2.0 * gamma_fn(1.0 - alpha) * std::sin(0.5 * kPi * alpha));
}

struct Nodes {
  std::vector<double> x, w;
};

// Gauss-Legendre nodes on [0, v_max], graded toward 0.
Nodes graded_nodes(double v_max, int levels, int n_uniform) {
  const auto panels = quad::graded_panels(0.0, v_max, 0.25 * v_max, levels, 0.15, n_uniform);
  const auto& rule = quad::gauss_legendre(16);
  Nodes out;
  for (const auto& pn : panels) {
    const double mid = 0.5 * (pn.a + pn.b), half = 0.5 * (pn.b - pn.a);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      out.x.push_back(mid + half * rule.nodes[i]);
      out.w.push_back(half * rule.weights[i]);
    }
  }
  return out;
}

int levels_for(int refinement) { return 10 + 4 * refinement; }
int uniform_for(int refinement) { return 3 << refinement; }

}  // namespace

double energy_sup_bound(const ChainParams& params, double energy_value) {
  if (!params.pinned())
    throw Error(ErrorKind::pinning_required, "energy bound needs omega0 > 0");
  if (!(energy_value >= 0.0)) throw Error(ErrorKind::invalid_argument, "energy must be >= 0");
  return std::sqrt(2.0 * energy_value) / params.omega0();
}

double sqrt_growth_bound(double t, double q_norm, double p_norm, const ChainParams& params) {
  require_unpinned(params);
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "t must be non-negative");
  return 2.0 / std::sqrt(params.omega1()) * p_norm * std::sqrt(t) + q_norm;
}

double log_growth_bound(double t, const LatticeState& state, const ChainParams& params) {
  require_unpinned(params);
  if (!(t >= 1.0)) throw Error(ErrorKind::requires_t_ge_1, "logarithmic bound needs t >= 1");
  return std::sqrt(2.0) / (params.omega1() * kPi) * std::abs(total_velocity_sum(state)) *
             std::log(t) +
         state.q_norm();
}

double alpha_normalization(double alpha) {
  require_alpha(alpha);
  return a_from_u(0.5 - alpha);
}

double alpha_leading_amplitude(double alpha) {
  require_alpha(alpha);
  return phi_from_u(0.5 - alpha);
}

double alpha_remainder_bound(double alpha, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "t must be positive");
  return alpha_normalization(alpha) * (3.0 + 2.0 / t);
}

double alpha_normalization_integral(double alpha) {
  const double a = alpha_normalization(alpha);
  auto g = [&](double lambda) {
    return a * a * std::pow(std::abs(std::sin(0.5 * lambda)), -2.0 * alpha);
  };
  return kTwoPi * quad::folded_singular_mean(g, 1.0, 1);
}

GrowthFamily GrowthFamily::make(double alpha) {
  return {alpha, alpha_normalization(alpha), alpha_leading_amplitude(alpha)};
}

AlphaFamily::AlphaFamily(double alpha) : family_(GrowthFamily::make(alpha)) {}

cplx AlphaFamily::p(double lambda) const {
  return family_.a_alpha * std::pow(std::abs(std::sin(0.5 * lambda)), -family_.alpha);
}

EpsilonFamily::EpsilonFamily(double epsilon, int refinement)
    : EpsilonFamily(epsilon, refinement, true) {}

EpsilonFamily::EpsilonFamily(double epsilon, int refinement, bool check) : epsilon_(epsilon) {
  require_epsilon(epsilon);
  if (refinement < 0) throw Error(ErrorKind::invalid_argument, "refinement must be >= 0");
  const double delta = epsilon + 0.5;
  const auto nodes =
      graded_nodes(std::pow(0.5, delta), levels_for(refinement), uniform_for(refinement));
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double alpha = 0.5 - std::pow(nodes.x[i], 1.0 / delta);
    alpha_.push_back(alpha);
    weight_.push_back(nodes.w[i] / delta * smooth_weight(alpha));
  }
  if (!check) return;
  const EpsilonFamily finer(epsilon, refinement + 1, false);
  for (double lambda : {kPi, 1.0, 1e-3, 1e-8, 1e-16}) {
    const double a = p_real(lambda), b = finer.p_real(lambda);
    if (!(std::abs(a - b) <= 1e-10 * std::abs(b)))
      throw Error(ErrorKind::mesh_not_converged,
                  "epsilon-family alpha quadrature not converged at lambda=" +
                      std::to_string(lambda));
  }
}

double EpsilonFamily::p_real(double lambda) const {
  const double s = std::abs(std::sin(0.5 * lambda));
  if (s == 0.0) return HUGE_VAL;
  const double log_inv = -std::log(s);
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha_.size(); ++i) sum += weight_[i] * std::exp(alpha_[i] * log_inv);
  return sum;
}

SpectralPair alpha_spectrum(double alpha) {
  return SpectralPair::closed_form(std::make_shared<AlphaFamily>(alpha));
}

SpectralPair epsilon_spectrum(double epsilon, int refinement) {
  return SpectralPair::closed_form(std::make_shared<EpsilonFamily>(epsilon, refinement));
}

double w_epsilon_integral(double epsilon, int refinement) {
  require_epsilon(epsilon);
  // u = v^{1/eps}: (1/phi) u^{eps-1/2} du = (1/eps) sqrt(u) / phi dv
  const auto nodes =
      graded_nodes(std::pow(0.5, epsilon), levels_for(refinement), uniform_for(refinement));
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double u = std::pow(nodes.x[i], 1.0 / epsilon);
    if (u == 0.0) continue;  // integrand vanishes like sqrt(u)
    sum += nodes.w[i] * std::sqrt(u) / phi_from_u(u);
  }
  return sum / epsilon;
}

double epsilon_l2_norm(double epsilon, int refinement) {
  require_epsilon(epsilon);
  const double delta = epsilon + 0.5;
  const auto nodes = graded_nodes(std::pow(0.5, delta), 2 * levels_for(refinement),
                                  uniform_for(refinement));
  const std::size_t n = nodes.x.size();
  std::vector<double> u(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::pow(nodes.x[i], 1.0 / delta);
    w[i] = nodes.w[i] / delta * smooth_weight(0.5 - u[i]);
  }
  const double two_sqrt_pi = 2.0 * std::sqrt(kPi);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double s = u[i] + u[j];
      row += w[j] * two_sqrt_pi * gamma_fn(0.5 * s) / gamma_fn(0.5 * (1.0 + s));
    }
    sum += w[i] * row;
  }
  return std::sqrt(sum);
}

double growth_identity_lhs(double t, double delta, int refinement) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "t must be positive");
  if (!(delta > 0.0 && delta <= 1.0))
    throw Error(ErrorKind::invalid_argument, "delta must lie in (0, 1]");
  const auto nodes =
      graded_nodes(std::pow(0.5, delta), levels_for(refinement), uniform_for(refinement));
  const double log_t = std::log(t);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.x.size(); ++i) {
    const double u = std::pow(nodes.x[i], 1.0 / delta);
    sum += nodes.w[i] * std::exp((0.5 - u) * log_t);
  }
  return sum / delta;
}

double growth_identity_rhs(double t, double delta) {
  if (!(t > 1.0)) throw Error(ErrorKind::invalid_argument, "identity needs t > 1");
  const double log_t = std::log(t);
  return std::sqrt(t) * std::pow(log_t, -delta) *
         specfun::lower_incomplete_gamma(delta, 0.5 * log_t);
}

double growth_prediction(double t, double epsilon, const ChainParams& params) {
  require_unpinned(params);
  require_epsilon(epsilon);
  const double w1 = params.omega1();
  const double big_t = 2.0 * w1 * t;
  if (!(big_t > 1.0)) throw Error(ErrorKind::invalid_argument, "needs 2 w1 t > 1");
  return growth_identity_rhs(big_t, epsilon + 0.5) / (2.0 * w1);
}

double growth_limit(double epsilon, const ChainParams& params) {
  require_unpinned(params);
  require_epsilon(epsilon);
  return gamma_fn(epsilon + 0.5) / std::sqrt(2.0 * params.omega1());
}

void write_bounds_report(const std::vector<BoundsRow>& rows, std::ostream& out) {
  out << "t,M_windowed,bound_name,bound_value,residual\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g,%.17g\n", r.t, r.m_windowed,
                  r.bound_name.c_str(), r.bound_value, r.residual);
    out << buf;
  }
}

}  // namespace chainwave
