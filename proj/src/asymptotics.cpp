#include "chainwave/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "chainwave/error.hpp"
#include "chainwave/quadrature.hpp"
#include "chainwave/specfun.hpp"

namespace chainwave {

namespace {

constexpr double kNoiseFloor = 1e-13;

double w_second(const ChainParams& params, double lambda) {
  const double w = dispersion(params, lambda);
  if (w == 0.0) return 0.0;
  const double w1sq = params.omega1() * params.omega1();
  const double wp = group_velocity(params, lambda);
  return w1sq * (std::cos(lambda) - std::sin(lambda) * wp / w) / w;
}

cplx i_unit() { return {0.0, 1.0}; }

}  // namespace

const char* to_string(RayRegime regime) {
  switch (regime) {
    case RayRegime::supersonic: return "supersonic";
    case RayRegime::critical: return "critical";
    case RayRegime::subsonic: return "subsonic";
  }
  return "unknown";
}

double ray_discriminant(double beta, const ChainParams& params) {
  const double bw1 = beta * params.omega1();
  return bw1 * bw1 - 1.0 - beta * params.omega0();
}

RayRegime classify_ray(double beta, const ChainParams& params) {
  if (!(beta > 0.0)) throw Error(ErrorKind::invalid_argument, "beta must be positive");
  const double g = ray_discriminant(beta, params);
  if (std::abs(g) <= 1e-12) return RayRegime::critical;
  return g > 0.0 ? RayRegime::supersonic : RayRegime::subsonic;
}

double ray_phase_derivative(double beta, const ChainParams& params, double lambda) {
  return 1.0 + beta * group_velocity(params, lambda);
}

double ray_phase_second_derivative(double beta, const ChainParams& params, double lambda) {
  return beta * w_second(params, lambda);
}

RayGeometry ray_geometry(double beta, const ChainParams& params) {
  if (classify_ray(beta, params) != RayRegime::supersonic)
    throw Error(ErrorKind::not_supersonic, "ray t = beta|k| is not supersonic");
  const double w0 = params.omega0();
  const double b2w2 = beta * beta * params.omega1() * params.omega1();
  RayGeometry geo{};
  geo.beta = beta;
  geo.gamma = ray_discriminant(beta, params);
  geo.delta = std::sqrt((b2w2 - 1.0) * (b2w2 - 1.0) - beta * beta * w0 * w0);
  geo.mu_plus = -std::acos(std::clamp((1.0 + geo.delta) / b2w2, -1.0, 1.0));
  geo.mu_minus = -std::acos(std::clamp((1.0 - geo.delta) / b2w2, -1.0, 1.0));
  auto amplitude = [&](double mu) {
    return 0.5 * std::sqrt(beta * dispersion(params, mu) / (2.0 * kPi * geo.delta));
  };
  geo.c_plus = dispersion(params, geo.mu_plus) > 0.0 ? amplitude(geo.mu_plus) : 0.0;
  geo.c_minus = amplitude(geo.mu_minus);
  geo.phase_residual = std::abs(ray_phase_derivative(beta, params, geo.mu_minus));
  if (geo.c_plus > 0.0)
    geo.phase_residual =
        std::max(geo.phase_residual, std::abs(ray_phase_derivative(beta, params, geo.mu_plus)));
  if (!(geo.phase_residual <= 1e-10))
    throw Error(ErrorKind::no_convergence, "stationary points miss h' = 0");
  return geo;
}

double ray_phase(const RayGeometry& geo, const ChainParams& params, int branch, long k) {
  const double mu = branch > 0 ? geo.mu_plus : geo.mu_minus;
  const double sign_k = k > 0 ? 1.0 : (k < 0 ? -1.0 : 0.0);
  return static_cast<double>(k) * (mu + geo.beta * dispersion(params, mu)) +
         (branch > 0 ? 1.0 : -1.0) * 0.25 * kPi * sign_k;
}

double ray_asymptote(const SpectralPair& spec, const RayGeometry& geo, long k,
                     const ChainParams& params) {
  if (k == 0) throw Error(ErrorKind::invalid_argument, "ray asymptote needs k != 0");
  if (classify_ray(geo.beta, params) != RayRegime::supersonic)
    throw Error(ErrorKind::not_supersonic, "ray t = beta|k| is not supersonic");
  auto g = [&](double lambda) { return spec.p(lambda) / dispersion(params, lambda); };
  cplx total{};
  for (int branch : {1, -1}) {
    const double c = branch > 0 ? geo.c_plus : geo.c_minus;
    if (c == 0.0) continue;
    const double mu = branch > 0 ? geo.mu_plus : geo.mu_minus;
    const cplx e = std::polar(1.0, ray_phase(geo, params, branch, k));
    const cplx ec = std::conj(e);
    total += c * (spec.q(-mu) * e + spec.q(mu) * ec);
    total -= i_unit() * c * (g(-mu) * e - g(mu) * ec);
  }
  return checked_real(total / std::sqrt(static_cast<double>(std::labs(k))));
}

PinnedCoefficients pinned_coefficients(const SpectralPair& spec, const ChainParams& params) {
  if (!params.pinned())
    throw Error(ErrorKind::pinning_required, "pinned asymptote needs omega0 > 0");
  const double w0 = params.omega0(), w0p = params.omega0_prime(), w1 = params.omega1();
  const double acoustic = std::sqrt(w0 / kTwoPi);
  const double optical = std::sqrt(w0p / kTwoPi);
  return {acoustic * checked_real(spec.q(0.0)) / w1,
          acoustic * checked_real(spec.p(0.0)) / (w1 * w0),
          optical * checked_real(spec.q(kPi)) / w1,
          optical * checked_real(spec.p(kPi)) / (w1 * w0p)};
}

double fixed_k_asymptote_pinned(const SpectralPair& spec, const ChainParams& params, long k,
                                double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "t must be positive");
  const auto c = pinned_coefficients(spec, params);
  const double phase_acoustic = t * params.omega0() + 0.25 * kPi;
  const double phase_optical = t * params.omega0_prime() - 0.25 * kPi;
  const double parity = (k % 2 == 0) ? 1.0 : -1.0;
  return (c.c1 * std::cos(phase_acoustic) + c.s1 * std::sin(phase_acoustic) +
          parity * (c.c2 * std::cos(phase_optical) + c.s2 * std::sin(phase_optical))) /
         std::sqrt(t);
}

double fixed_k_asymptote_unpinned(const SpectralPair& spec, const ChainParams& params, long k,
                                  double t) {
  if (params.pinned())
    throw Error(ErrorKind::requires_omega0_zero, "unpinned asymptote needs omega0 = 0");
  if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "t must be positive");
  const double w1 = params.omega1();
  const double root = std::sqrt(kPi * w1);
  const double c = checked_real(spec.q(kPi)) / root;
  const double s = checked_real(spec.p(kPi)) / (2.0 * w1 * root);
  const double phase = 2.0 * w1 * t - 0.25 * kPi;
  const double parity = (k % 2 == 0) ? 1.0 : -1.0;
  return checked_real(spec.p(0.0)) / (2.0 * w1) +
         parity * (c * std::cos(phase) + s * std::sin(phase)) / std::sqrt(t);
}

double bessel_time_integral(long k, double t, const ChainParams& params) {
  if (params.pinned())
    throw Error(ErrorKind::requires_omega0_zero, "Bessel representation needs omega0 = 0");
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "t must be non-negative");
  if (t == 0.0) return 0.0;
  const double w1 = params.omega1();
  const int order = static_cast<int>(2 * k);
  auto f = [&](double s) { return specfun::bessel_j(order, 2.0 * w1 * s); };
  const double piece = 0.5 * kPi / w1;
  const long pieces = std::max(1L, static_cast<long>(std::ceil(t / piece)));
  const double h = t / static_cast<double>(pieces);
  double sum = 0.0;
  for (long j = 0; j < pieces; ++j) {
    const double a = h * static_cast<double>(j);
    sum += quad::adaptive(f, a, j + 1 == pieces ? t : a + h, 1e-12, 15).first;
  }
  return sum;
}

double bessel_time_integral_spectral(long k, double t, const ChainParams& params,
                                     const SolverConfig& cfg) {
  if (params.pinned())
    throw Error(ErrorKind::requires_omega0_zero, "Bessel representation needs omega0 = 0");
  return solve_at(forward_transform(LatticeState::spike(0, 1.0, true)), params, t, k, cfg);
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(ErrorKind::invalid_argument, "power fit needs two or more matching points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0))
      throw Error(ErrorKind::invalid_argument, "power fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorKind::invalid_argument, "power fit needs distinct x");
  PowerFit fit{};
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ly = std::log(y[i]);
    const double pred = fit.intercept + fit.slope * std::log(x[i]);
    ss_res += (ly - pred) * (ly - pred);
    ss_tot += (ly - mean) * (ly - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

namespace {

PowerFit fit_above_floor(const std::vector<long>& k_list, const std::vector<double>& values) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < k_list.size(); ++i)
    if (values[i] >= kNoiseFloor) {
      x.push_back(static_cast<double>(std::labs(k_list[i])));
      y.push_back(values[i]);
    }
  if (x.size() < 2)
    throw Error(ErrorKind::values_below_noise_floor,
                "fewer than two values above the 1e-13 noise floor");
  return fit_power_law(x, y);
}

}  // namespace

PowerFit spatial_decay_fit(const SpectralPair& spec, const ChainParams& params, double t_fixed,
                           const std::vector<long>& k_list, const SolverConfig& cfg) {
  std::vector<double> values(k_list.size());
  parallel_for(k_list.size(), [&](std::size_t i) {
    values[i] = std::abs(solve_at(spec, params, t_fixed, k_list[i], cfg));
  });
  return fit_above_floor(k_list, values);
}

double spatial_decay_exponent(const SpectralPair& spec, const ChainParams& params, double t_fixed,
                              const std::vector<long>& k_list, const SolverConfig& cfg) {
  return spatial_decay_fit(spec, params, t_fixed, k_list, cfg).decay();
}

double ray_envelope(const SpectralPair& spec, const ChainParams& params, double beta, long k,
                    long window, const SolverConfig& cfg) {
  double best = 0.0;
  for (long j = k; j < k + std::max(window, 1L); ++j)
    best = std::max(best, std::abs(solve_at(spec, params, beta * std::labs(j), j, cfg)));
  return best;
}

PowerFit ray_decay_fit(const SpectralPair& spec, const ChainParams& params, double beta,
                       const std::vector<long>& k_list, long window, const SolverConfig& cfg) {
  std::vector<double> values(k_list.size());
  parallel_for(k_list.size(), [&](std::size_t i) {
    values[i] = ray_envelope(spec, params, beta, k_list[i], window, cfg);
  });
  return fit_above_floor(k_list, values);
}

long ray_beat_window(const RayGeometry& geo, const ChainParams& params) {
  auto h = [&](double mu) { return mu + geo.beta * dispersion(params, mu); };
  const double gap = std::abs(h(geo.mu_plus) - h(geo.mu_minus));
  if (gap == 0.0) return 8;
  return std::max(8L, static_cast<long>(std::ceil(kTwoPi / gap)) + 2);
}

double ray_residual_envelope(const SpectralPair& spec, const ChainParams& params,
                             const RayGeometry& geo, long k, long window,
                             const SolverConfig& cfg) {
  double best = 0.0;
  for (long j = k; j < k + std::max(window, 1L); ++j) {
    const double exact = solve_at(spec, params, geo.beta * std::labs(j), j, cfg);
    best = std::max(best, std::abs(exact - ray_asymptote(spec, geo, j, params)));
  }
  return best;
}

double fixed_k_residual_envelope(const SpectralPair& spec, const ChainParams& params, long k,
                                 double t, int samples, const SolverConfig& cfg) {
  if (samples < 1) throw Error(ErrorKind::invalid_argument, "samples must be positive");
  const double period = kPi / params.omega1();
  std::vector<double> residual(static_cast<std::size_t>(samples));
  parallel_for(residual.size(), [&](std::size_t i) {
    const double s = t + period * static_cast<double>(i) / static_cast<double>(samples);
    const double predicted = params.pinned() ? fixed_k_asymptote_pinned(spec, params, k, s)
                                             : fixed_k_asymptote_unpinned(spec, params, k, s);
    residual[i] = std::abs(solve_at(spec, params, s, k, cfg) - predicted);
  });
  return *std::max_element(residual.begin(), residual.end());
}

void write_asym_report(const std::vector<AsymptoteReport>& rows, std::ostream& out) {
  out << "regime,k,t,exact,predicted,residual,scaled_residual\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%ld,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.regime.c_str(), r.k,
                  r.t, r.exact, r.predicted, r.residual, r.scaled_residual);
    out << buf;
  }
}

}  // namespace chainwave
