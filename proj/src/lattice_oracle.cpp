#include "chainwave/lattice_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainwave/error.hpp"

namespace chainwave {

namespace {

class Chain {
 public:
  Chain(const LatticeState& state, const ChainParams& params, long radius)
      : radius_(radius),
        w0sq_(params.omega0() * params.omega0()),
        w1sq_(params.omega1() * params.omega1()),
        q_(static_cast<std::size_t>(2 * radius + 1), 0.0),
        p_(q_.size(), 0.0),
        a_(q_.size(), 0.0) {
    for (long k = state.support_min(); k <= state.support_max(); ++k) {
      q_[index(k)] = state.q(k);
      p_[index(k)] = state.p(k);
    }
    accelerate();
  }

  void advance(double h, long steps) {
    const std::size_t n = q_.size();
    for (long s = 0; s < steps; ++s) {
      for (std::size_t i = 0; i < n; ++i) {
        p_[i] += 0.5 * h * a_[i];
        q_[i] += h * p_[i];
      }
      accelerate();
      for (std::size_t i = 0; i < n; ++i) p_[i] += 0.5 * h * a_[i];
    }
  }

  LatticeState state() const { return {-radius_, q_, p_}; }

 private:
  std::size_t index(long k) const { return static_cast<std::size_t>(k + radius_); }

  void accelerate() {
    const std::size_t n = q_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i > 0 ? q_[i - 1] : 0.0;
      const double right = i + 1 < n ? q_[i + 1] : 0.0;
      a_[i] = -w0sq_ * q_[i] + w1sq_ * (left + right - 2.0 * q_[i]);
    }
  }

  long radius_;
  double w0sq_, w1sq_;
  std::vector<double> q_, p_, a_;
};

void check(const LatticeState& state, const ChainParams& params, const OracleConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw Error(ErrorKind::invalid_argument, "dt must be positive");
  if (cfg.radius < 0) throw Error(ErrorKind::invalid_argument, "radius must be non-negative");
  if (cfg.dt * params.omega0_prime() > 0.5)
    throw Error(ErrorKind::unstable_step,
                "dt * omega0' = " + std::to_string(cfg.dt * params.omega0_prime()) +
                    " exceeds 0.5");
  if (!state.empty() && (state.support_min() < -cfg.radius || state.support_max() > cfg.radius))
    throw Error(ErrorKind::support_exceeds_radius,
                "initial support exceeds radius " + std::to_string(cfg.radius));
}

std::vector<LatticeState> run(const LatticeState& state, const ChainParams& params,
                              const std::vector<double>& times, double dt, long radius,
                              long refine) {
  Chain chain(state, params, radius);
  std::vector<LatticeState> out;
  out.reserve(times.size());
  double t = 0.0;
  for (double target : times) {
    if (!(target >= t))
      throw Error(ErrorKind::invalid_argument, "snapshot times must be non-decreasing and >= 0");
    const double span = target - t;
    if (span > 0.0) {
      const long steps = static_cast<long>(std::ceil(span / dt));
      chain.advance(span / static_cast<double>(steps * refine), steps * refine);
    }
    t = target;
    out.push_back(chain.state());
  }
  return out;
}

}  // namespace

long min_radius(const LatticeState& state, const ChainParams& params, long k_max,
                double t_final) {
  return std::max(std::labs(k_max), state.extent()) +
         static_cast<long>(std::ceil(params.omega1() * t_final)) + 50;
}

OracleConfig default_oracle_config(const LatticeState& state, const ChainParams& params,
                                   long k_max, double t_final) {
  OracleConfig cfg;
  cfg.radius = min_radius(state, params, k_max, t_final);
  cfg.dt = 1e-3 / params.omega0_prime();
  cfg.richardson = true;
  return cfg;
}

std::vector<LatticeState> integrate_snapshots(const LatticeState& state,
                                              const ChainParams& params,
                                              const std::vector<double>& times,
                                              const OracleConfig& cfg) {
  check(state, params, cfg);
  auto coarse = run(state, params, times, cfg.dt, cfg.radius, 1);
  if (!cfg.richardson) return coarse;
  const auto fine = run(state, params, times, cfg.dt, cfg.radius, 2);
  for (std::size_t s = 0; s < coarse.size(); ++s) {
    std::vector<double> q(coarse[s].size()), p(coarse[s].size());
    for (long k = -cfg.radius; k <= cfg.radius; ++k) {
      const auto i = static_cast<std::size_t>(k + cfg.radius);
      q[i] = (4.0 * fine[s].q(k) - coarse[s].q(k)) / 3.0;
      p[i] = (4.0 * fine[s].p(k) - coarse[s].p(k)) / 3.0;
    }
    coarse[s] = LatticeState(-cfg.radius, std::move(q), std::move(p));
  }
  return coarse;
}

LatticeState integrate(const LatticeState& state, const ChainParams& params, double t_final,
                       const OracleConfig& cfg) {
  return integrate_snapshots(state, params, {t_final}, cfg).front();
}

double energy_drift(const LatticeState& state, const ChainParams& params, double t_final,
                    const OracleConfig& cfg) {
  check(state, params, cfg);
  const double h0 = energy(state, params);
  const auto end = run(state, params, {t_final}, cfg.dt, cfg.radius, 1).front();
  return std::abs(energy(end, params) - h0) / std::max(h0, 1e-300);
}

double validity_horizon(const OracleConfig& cfg, const ChainParams& params, long k_max) {
  return std::max(0.0, static_cast<double>(cfg.radius - std::labs(k_max) - 50) / params.omega1());
}

}  // namespace chainwave
