#pragma once

// Exact solution of the infinite chain:
//
//   q_k(t) = (1/2pi) int_0^{2pi} [Q cos(t w) + P sin(t w)/w] e^{-ik lambda} dlambda.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "chainwave/chain_model.hpp"

namespace chainwave {

struct SolverConfig {
  std::size_t mesh_points = 256;  // starting mesh; raised to the oscillation budget
  double tolerance = 1e-12;
  std::size_t max_mesh = std::size_t{1} << 24;

  /// Throws invalid_argument unless mesh_points >= 16 is a power of two,
  /// tolerance > 0 and max_mesh >= mesh_points.
  void validate() const;
};

/// sin(t w)/w, with the Taylor series t sum (-1)^m (t w)^{2m}/(2m+1)! when t w < 1e-2.
double sinc_kernel(double t, double omega) noexcept;

/// lambda -> Q(lambda) cos(t w(lambda)) + P(lambda) sinc_kernel(t, w(lambda)).
std::function<cplx(double)> evolve_spectrum(const SpectralPair& spec, const ChainParams& params,
                                            double t);

/// Smallest power-of-two trapezoid mesh that resolves sites up to |k| = k_max
/// at time t for data of the given bandwidth (-1 for closed forms).
std::size_t initial_mesh(long k_max, long bandwidth, double t, const ChainParams& params);

/// q_k(t), with mesh doubling until successive estimates differ by less than
/// cfg.tolerance (or the rounding floor of the sum). Closed-form spectra go
/// through the graded singular quadrature instead of the uniform mesh.
double solve_at(const SpectralPair& spec, const ChainParams& params, double t, long k,
                const SolverConfig& cfg = {});

struct SolutionGrid {
  ChainParams params;
  std::vector<double> times;
  std::vector<long> sites;
  std::vector<double> values;  // row-major: values[i * sites.size() + j]

  double at(std::size_t i, std::size_t j) const { return values[i * sites.size() + j]; }
};

/// One mesh evaluation and one FFT per time slice (per doubling step). Time
/// slices run in parallel on up to thread_count() threads.
SolutionGrid solve_grid(const SpectralPair& spec, const ChainParams& params,
                        const std::vector<double>& times, const std::vector<long>& sites,
                        const SolverConfig& cfg = {});

struct WindowedMax {
  double value;
  /// False when a window edge value exceeds 1e-3 of the interior maximum.
  bool edge_ok;
};

WindowedMax max_norm(const SolutionGrid& grid, std::size_t t_index);

/// Header `t,k,q`, t-major rows, 17 significant digits.
void write_csv(const SolutionGrid& grid, std::ostream& out);

/// CHAINWAVE_THREADS if set to a positive integer, else hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. The first
/// exception thrown by any task is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace chainwave
