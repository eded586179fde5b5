// Documented tolerances that the methods do not reach. Kept at their stated
// values; see README "Known failing checks".

#include <cmath>
#include <vector>

#include "chainwave/asymptotics.hpp"
#include "chainwave/bounds.hpp"
#include "chainwave/lattice_oracle.hpp"
#include "chainwave/spectral_solver.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace chainwave;
using chainwave::testing::random_state;

TEST_CASE("Verlet energy drift stays below 1e-8 over t = 100 at dt = 1e-3") {
  const auto s = random_state(1);
  const ChainParams p(1.0, 1.0);
  OracleConfig cfg;
  cfg.radius = min_radius(s, p, 5, 100.0);
  cfg.dt = 1e-3;
  const double drift = energy_drift(s, p, 100.0, cfg);
  INFO("relative drift = " << drift);
  CHECK(drift <= 1e-8);
}

TEST_CASE("logarithmic bound residual stays bounded for a unit velocity spike") {
  const ChainParams p(0.0, 1.0);
  const auto s = LatticeState::spike(0, 1.0, true);
  const auto spec = forward_transform(s);
  double lo = 1e300, hi = -1e300;
  for (double t : {1e2, 1e3, 1e4, 1e5}) {
    const long w = static_cast<long>(1.1 * t) + 50;
    std::vector<long> sites;
    for (long k = -w; k <= w; ++k) sites.push_back(k);
    const auto grid = solve_grid(spec, p, {t}, sites);
    const auto m = max_norm(grid, 0);
    REQUIRE(m.edge_ok);
    const double r = m.value - log_growth_bound(t, s, p);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  INFO("residual range = " << hi - lo);
  CHECK(hi - lo <= 1.0);
}

TEST_CASE("critical ray decays at least like k^-1.3") {
  const ChainParams p(1.0, 1.0);
  const double beta = (1.0 + std::sqrt(5.0)) / 2.0;
  const auto spec = forward_transform(LatticeState::spike(0));
  const auto fit = ray_decay_fit(spec, p, beta, {32, 64, 128, 256}, 8);
  INFO("decay exponent = " << fit.decay());
  CHECK(fit.decay() >= 1.3);
}
