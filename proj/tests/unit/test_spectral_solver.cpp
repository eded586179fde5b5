#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <string>

#include "chainwave/quadrature.hpp"
#include "chainwave/spectral_solver.hpp"
#include "chainwave/specfun.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace chainwave;
using chainwave::testing::kind_of;
using chainwave::testing::random_state;

namespace {

double bessel_series(int n, double x) { return specfun::bessel_j_series(n, x).value; }
double bessel_integral(int n, double x) { return specfun::bessel_j_integral(n, x).value; }

}  // namespace

TEST_CASE("sinc kernel examples") {
  CHECK(sinc_kernel(0.0, 3.0) == 0.0);
  CHECK(sinc_kernel(2.0, 0.0) == 2.0);
  CHECK(sinc_kernel(1.0, kPi / 2) == doctest::Approx(2.0 / kPi).epsilon(1e-15));
}

TEST_CASE("sinc kernel is continuous across the series switch") {
  for (double t : {1.0, 7.0, 1e3}) {
    for (double x : {0.5e-2, 0.999e-2, 1e-2, 1.001e-2, 2e-2}) {
      const double w = x / t;
      CHECK(std::abs(sinc_kernel(t, w) - std::sin(x) / w) <= 1e-15 * t);
    }
  }
}

TEST_CASE("evolved spectrum examples") {
  const ChainParams p(1.0, 1.0);
  const auto spec = forward_transform(random_state(3));
  const auto at0 = evolve_spectrum(spec, p, 0.0);
  for (double lam : {0.0, 1.0, 2.5}) CHECK(std::abs(at0(lam) - spec.q(lam)) <= 1e-15);
  const auto zero = evolve_spectrum(forward_transform(LatticeState::zero()), p, 4.0);
  CHECK(std::abs(zero(0.3)) == 0.0);

  const ChainParams weak(1.0, 1e-9);
  const auto one = forward_transform(LatticeState::spike(0));
  for (double t : {0.5, 3.0, 10.0}) {
    const auto f = evolve_spectrum(one, weak, t);
    for (double lam : {0.2, 3.0}) CHECK(std::abs(f(lam) - std::cos(t)) <= 1e-6);
  }
}

TEST_CASE("solve_at examples") {
  const ChainParams p(0.0, 1.0);
  const auto spike = forward_transform(LatticeState::spike(0));
  CHECK(solve_at(forward_transform(LatticeState::zero()), p, 10.0, 3) == 0.0);
  CHECK(solve_at(spike, p, 1.0, 0) == doctest::Approx(bessel_series(0, 2.0)).epsilon(1e-12));
  CHECK(std::abs(solve_at(spike, p, 1.0, 1) - bessel_series(2, 2.0)) <= 1e-12);
  CHECK(std::abs(solve_at(spike, p, 1.0, -1) - bessel_series(2, 2.0)) <= 1e-12);
}

TEST_CASE("a displacement spike evolves as J_{2k}(2 w1 t) without pinning") {
  for (double w1 : {0.5, 1.0, 2.0}) {
    const ChainParams p(0.0, w1);
    const auto spike = forward_transform(LatticeState::spike(0));
    for (double t : {0.3, 2.0, 9.0}) {
      for (long k = -6; k <= 6; ++k) {
        const double ref = specfun::bessel_j_integral(static_cast<int>(2 * std::labs(k)), 2 * w1 * t).value;
        CHECK(std::abs(solve_at(spike, p, t, k) - ref) <= 1e-12);
      }
    }
  }
}

TEST_CASE("t = 0 reproduces the initial displacements") {
  const auto s = random_state(5);
  const auto spec = forward_transform(s);
  const ChainParams p(0.4, 1.3);
  for (long k = -7; k <= 7; ++k) CHECK(std::abs(solve_at(spec, p, 0.0, k) - s.q(k)) <= 1e-13);
  const auto grid = solve_grid(spec, p, {0.0}, {-7, -5, 0, 3, 5, 7});
  for (std::size_t j = 0; j < grid.sites.size(); ++j)
    CHECK(std::abs(grid.at(0, j) - s.q(grid.sites[j])) <= 1e-13);
}

TEST_CASE("solution is real and even in time for P = 0") {
  const auto s = random_state(9);
  const LatticeState q_only(s.support_min(), {s.q_values().begin(), s.q_values().end()},
                            std::vector<double>(s.size(), 0.0));
  const auto spec = forward_transform(q_only);
  const ChainParams p(0.6, 0.9);
  for (double t : {0.7, 4.0}) {
    for (long k : {-3L, 0L, 2L}) {
      const double direct = checked_real(quad::periodic_mean(
          [&](double lam) {
            return spec.q(lam) * std::cos(-t * dispersion(p, lam)) * std::polar(1.0, -k * lam);
          },
          1024));
      CHECK(std::abs(solve_at(spec, p, t, k) - direct) <= 1e-12);
    }
  }
}

TEST_CASE("solve_grid agrees with solve_at") {
  const auto spec = forward_transform(random_state(13));
  const ChainParams p(1.0, 1.0);
  const std::vector<double> times{0.0, 0.5, 3.0, 12.0, 30.0};
  std::vector<long> sites;
  for (long k = -8; k <= 8; ++k) sites.push_back(k);
  const auto grid = solve_grid(spec, p, times, sites);
  REQUIRE(grid.values.size() == times.size() * sites.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t j = 0; j < sites.size(); ++j)
      CHECK(std::abs(grid.at(i, j) - solve_at(spec, p, times[i], sites[j])) <= 1e-12);
  const auto single = solve_grid(spec, p, {3.0}, {2});
  CHECK(std::abs(single.at(0, 0) - solve_at(spec, p, 3.0, 2)) <= 1e-13);
}

TEST_CASE("solution is linear in the initial data") {
  const auto a = random_state(17), b = random_state(18);
  std::vector<double> q(a.size()), v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    q[i] = 2.0 * a.q_values()[i] - 0.5 * b.q_values()[i];
    v[i] = 2.0 * a.p_values()[i] - 0.5 * b.p_values()[i];
  }
  const LatticeState c(a.support_min(), q, v);
  const ChainParams p(0.2, 1.4);
  for (double t : {1.0, 6.0})
    for (long k : {-4L, 0L, 9L}) {
      const double lhs = solve_at(forward_transform(c), p, t, k);
      const double rhs = 2.0 * solve_at(forward_transform(a), p, t, k) -
                         0.5 * solve_at(forward_transform(b), p, t, k);
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}

TEST_CASE("a shifted state gives a shifted solution") {
  const auto s = random_state(19, 5, 0);
  const LatticeState moved(3, {s.q_values().begin(), s.q_values().end()},
                           {s.p_values().begin(), s.p_values().end()});
  const ChainParams p(0.5, 1.0);
  for (long k = -4; k <= 4; ++k)
    CHECK(std::abs(solve_at(forward_transform(moved), p, 5.0, k + 3) -
                   solve_at(forward_transform(s), p, 5.0, k)) <= 1e-12);
}

TEST_CASE("coupling rescaling for velocity data without pinning") {
  const auto s = random_state(23);
  const LatticeState p_only(s.support_min(), std::vector<double>(s.size(), 0.0),
                            {s.p_values().begin(), s.p_values().end()});
  const auto spec = forward_transform(p_only);
  const double w1 = 1.7;
  for (double t : {0.5, 3.0, 20.0})
    for (long k : {-3L, 0L, 5L})
      CHECK(std::abs(solve_at(spec, ChainParams(0.0, w1), t, k) -
                     solve_at(spec, ChainParams(0.0, 0.5), 2 * w1 * t, k) / (2 * w1)) <= 1e-10);
}

TEST_CASE("starting mesh does not change the converged value") {
  const auto spec = forward_transform(random_state(29));
  const ChainParams p(1.0, 1.0);
  SolverConfig big;
  big.mesh_points = 1 << 14;
  for (long k : {-10L, 0L, 25L}) CHECK(std::abs(solve_at(spec, p, 40.0, k) - solve_at(spec, p, 40.0, k, big)) <= 1e-12);
}

TEST_CASE("initial mesh covers the oscillation budget") {
  const ChainParams p(0.0, 1.0);
  const auto n = initial_mesh(10, 0, 100.0, p);
  CHECK((n & (n - 1)) == 0);
  CHECK(static_cast<double>(n) >= 10 + 100.0 * p.omega0_prime() / kPi);
  CHECK(initial_mesh(1000, 0, 100.0, p) > n);
}

TEST_CASE("solver configuration validation and mesh cap") {
  SolverConfig bad;
  bad.mesh_points = 100;
  CHECK(kind_of([&] { bad.validate(); }) == ErrorKind::invalid_argument);
  SolverConfig small;
  small.mesh_points = 16;
  small.max_mesh = 64;
  const auto spec = forward_transform(LatticeState::spike(0));
  CHECK(kind_of([&] { solve_at(spec, ChainParams(0.0, 1.0), 1e3, 0, small); }) == ErrorKind::no_convergence);
  CHECK(kind_of([&] { solve_grid(spec, ChainParams(0.0, 1.0), {1e3}, {0}, small); }) == ErrorKind::no_convergence);
  CHECK(kind_of([&] { solve_at(spec, ChainParams(0.0, 1.0), -1.0, 0); }) == ErrorKind::invalid_argument);
}

TEST_CASE("windowed maximum") {
  const ChainParams p(0.0, 1.0);
  std::vector<long> sites;
  for (long k = -40; k <= 40; ++k) sites.push_back(k);
  const auto zero = solve_grid(forward_transform(LatticeState::zero()), p, {5.0}, sites);
  CHECK(max_norm(zero, 0).value == 0.0);
  const auto spike = forward_transform(LatticeState::spike(0));
  const auto g = solve_grid(spike, p, {0.0, 5.0}, sites);
  CHECK(max_norm(g, 0).value == doctest::Approx(1.0).epsilon(1e-13));
  double ref = 0.0;
  for (long k = -40; k <= 40; ++k) ref = std::max(ref, std::abs(bessel_integral(static_cast<int>(2 * std::labs(k)), 10.0)));
  CHECK(max_norm(g, 1).value == doctest::Approx(ref).epsilon(1e-11));
  CHECK(max_norm(g, 1).edge_ok);
  const auto narrow = solve_grid(spike, p, {5.0}, {-2, -1, 0, 1, 2});
  CHECK(!max_norm(narrow, 0).edge_ok);
}

TEST_CASE("CSV output layout") {
  const auto g = solve_grid(forward_transform(LatticeState::spike(0)), ChainParams(0.0, 1.0),
                            {0.0, 1.0}, {-1, 0, 1});
  std::ostringstream os;
  write_csv(g, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,k,q");
  int rows = 0;
  std::string first;
  while (std::getline(is, line)) {
    if (rows == 0) first = line;
    ++rows;
  }
  CHECK(rows == 6);
  CHECK(first == "0,-1,0");
}

TEST_CASE("CHAINWAVE_THREADS controls the worker count") {
  setenv("CHAINWAVE_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  setenv("CHAINWAVE_THREADS", "junk", 1);
  CHECK(thread_count() >= 1);
  setenv("CHAINWAVE_THREADS", "1", 1);
  const auto spec = forward_transform(random_state(31));
  const ChainParams p(1.0, 1.0);
  const std::vector<double> times{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
  const std::vector<long> sites{-5, 0, 5};
  const auto serial = solve_grid(spec, p, times, sites);
  setenv("CHAINWAVE_THREADS", "4", 1);
  const auto parallel = solve_grid(spec, p, times, sites);
  unsetenv("CHAINWAVE_THREADS");
  CHECK(serial.values == parallel.values);
}

TEST_CASE("parallel_for rethrows task exceptions") {
  setenv("CHAINWAVE_THREADS", "4", 1);
  CHECK_THROWS_AS(parallel_for(32,
                               [](std::size_t i) {
                                 if (i == 17) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  unsetenv("CHAINWAVE_THREADS");
}
