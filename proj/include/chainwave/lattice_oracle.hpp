#pragma once

// Brute-force reference: velocity Verlet on the chain truncated to sites
// -radius..radius, with q = p = 0 clamped beyond the ends.

#include <vector>

#include "chainwave/chain_model.hpp"

namespace chainwave {

enum class Boundary { fixed_zero };

struct OracleConfig {
  long radius = 100;
  double dt = 1e-3;
  Boundary boundary = Boundary::fixed_zero;
  /// Combine runs at dt and dt/2 as (4 q_{dt/2} - q_dt) / 3, cancelling the
  /// leading O(dt^2) phase error.
  bool richardson = false;
};

/// max(k_max, state extent) + ceil(w1 t_final) + 50.
long min_radius(const LatticeState& state, const ChainParams& params, long k_max,
                double t_final);

/// Cross-check preset: radius from min_radius, dt = 1e-3 / w0', Richardson on.
OracleConfig default_oracle_config(const LatticeState& state, const ChainParams& params,
                                   long k_max, double t_final);

/// State of the truncated chain at t_final, support [-radius, radius].
LatticeState integrate(const LatticeState& state, const ChainParams& params, double t_final,
                       const OracleConfig& cfg);

/// States at each of the non-decreasing `times`. Each interval between
/// snapshots is split into ceil(interval / dt) equal steps so the snapshot
/// times are hit exactly.
std::vector<LatticeState> integrate_snapshots(const LatticeState& state,
                                              const ChainParams& params,
                                              const std::vector<double>& times,
                                              const OracleConfig& cfg);

/// |H(t_final) - H(0)| / max(H(0), 1e-300) for plain Verlet stepping.
double energy_drift(const LatticeState& state, const ChainParams& params, double t_final,
                    const OracleConfig& cfg);

/// max(0, (radius - k_max - 50) / w1).
double validity_horizon(const OracleConfig& cfg, const ChainParams& params, long k_max);

}  // namespace chainwave
