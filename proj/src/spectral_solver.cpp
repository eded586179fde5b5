#include "chainwave/spectral_solver.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "chainwave/error.hpp"
#include "chainwave/quadrature.hpp"
#include "fft.hpp"

namespace chainwave {

namespace {

// Successive estimates closer than this multiple of eps x (mean |integrand|)
// are indistinguishable from summation noise.
constexpr double kRoundingFloor = 1e3 * std::numeric_limits<double>::epsilon();

bool converged(double a, double b, double tol, double mass) {
  return std::abs(a - b) <= tol + kRoundingFloor * mass;
}

struct Integrand {
  const SpectralPair& spec;
  const ChainParams& params;
  double t;

  cplx operator()(double lambda) const {
    const double w = dispersion(params, lambda);
    cplx v = spec.q(lambda) * std::cos(t * w);
    const cplx pv = spec.p(lambda);
    if (pv != cplx{}) v += pv * sinc_kernel(t, w);
    return v;
  }
};

double solve_closed_form(const SpectralPair& spec, const ChainParams& params, double t, long k,
                         const SolverConfig& cfg) {
  if (!spec.real_even())
    throw Error(ErrorKind::invalid_argument, "closed-form spectra must be real and even");
  const Integrand f{spec, params, t};
  const double kd = static_cast<double>(k);
  const double rate = std::labs(k) + t * params.omega1() + 1.0;
  const auto& rule = quad::gauss_legendre(16);

  auto estimate = [&](int level, double& mass) {
    const auto panels = quad::folded_singular_panels(rate, level);
    if (panels.size() * rule.nodes.size() > cfg.max_mesh)
      throw Error(ErrorKind::no_convergence,
                  "singular quadrature exceeded max_mesh at t=" + std::to_string(t));
    double sum = 0.0, abs_sum = 0.0;
    for (const auto& pn : panels) {
      const double mid = 0.5 * (pn.a + pn.b), half = 0.5 * (pn.b - pn.a);
      double s = 0.0, sa = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = mid + half * rule.nodes[i];
        const double lambda = 2.0 * u * u;
        const double g = f(lambda).real() * std::cos(kd * lambda) * 4.0 * u;
        s += rule.weights[i] * g;
        sa += rule.weights[i] * std::abs(g);
      }
      sum += half * s;
      abs_sum += half * sa;
    }
    mass = abs_sum / kPi;
    return sum / kPi;
  };

  double mass = 0.0;
  double prev = estimate(0, mass);
  for (int level = 1;; ++level) {
    const double cur = estimate(level, mass);
    if (converged(cur, prev, cfg.tolerance, mass)) return cur;
    prev = cur;
  }
}

}  // namespace

void SolverConfig::validate() const {
  if (mesh_points < 16 || !std::has_single_bit(mesh_points))
    throw Error(ErrorKind::invalid_argument, "mesh_points must be a power of two >= 16");
  if (!(tolerance > 0.0)) throw Error(ErrorKind::invalid_argument, "tolerance must be positive");
  if (max_mesh < mesh_points)
    throw Error(ErrorKind::invalid_argument, "max_mesh must be at least mesh_points");
}

double sinc_kernel(double t, double omega) noexcept {
  const double x = t * omega;
  if (x >= 1e-2) return std::sin(x) / omega;
  // t * sum_{m<8} (-1)^m x^{2m} / (2m+1)!
  const double x2 = x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 8; ++m) {
    term *= -x2 / ((2.0 * m) * (2.0 * m + 1.0));
    sum += term;
  }
  return t * sum;
}

std::function<cplx(double)> evolve_spectrum(const SpectralPair& spec, const ChainParams& params,
                                            double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "t must be non-negative");
  return [spec, params, t](double lambda) { return Integrand{spec, params, t}(lambda); };
}

std::size_t initial_mesh(long k_max, long bandwidth, double t, const ChainParams& params) {
  const double budget = 8.0 * (static_cast<double>(std::labs(k_max)) +
                               static_cast<double>(std::max(bandwidth, 0L)) +
                               t * params.omega0_prime() / kPi + 16.0);
  if (budget > 0x1p62) throw Error(ErrorKind::no_convergence, "mesh budget overflow");
  return std::bit_ceil(static_cast<std::size_t>(std::ceil(budget)));
}

double solve_at(const SpectralPair& spec, const ChainParams& params, double t, long k,
                const SolverConfig& cfg) {
  cfg.validate();
  if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "t must be non-negative");
  if (spec.kind() == SpectralPair::Kind::closed_form)
    return solve_closed_form(spec, params, t, k, cfg);

  const Integrand f{spec, params, t};
  const double kd = static_cast<double>(k);
  std::size_t n = std::max(cfg.mesh_points, initial_mesh(k, spec.bandwidth(), t, params));
  if (n > cfg.max_mesh)
    throw Error(ErrorKind::no_convergence, "required mesh exceeds max_mesh");

  // Running sums over the mesh; doubling adds only the odd-index points.
  cplx sum{};
  double abs_sum = 0.0;
  auto add_points = [&](std::size_t count, std::size_t first, std::size_t step) {
    const double h = kTwoPi / static_cast<double>(count);
    for (std::size_t j = first; j < count; j += step) {
      const double lambda = h * static_cast<double>(j);
      const cplx v = f(lambda) * std::polar(1.0, -kd * lambda);
      sum += v;
      abs_sum += std::abs(v);
    }
  };
  add_points(n, 0, 1);
  cplx prev = sum / static_cast<double>(n);
  while (true) {
    const std::size_t m = 2 * n;
    if (m > cfg.max_mesh)
      throw Error(ErrorKind::no_convergence,
                  "mesh doubling did not stabilise below max_mesh at t=" + std::to_string(t));
    add_points(m, 1, 2);
    const cplx cur = sum / static_cast<double>(m);
    const double mass = abs_sum / static_cast<double>(m);
    n = m;
    if (std::abs(cur - prev) <= cfg.tolerance + kRoundingFloor * mass)
      return checked_real(cur);
    prev = cur;
  }
}

SolutionGrid solve_grid(const SpectralPair& spec, const ChainParams& params,
                        const std::vector<double>& times, const std::vector<long>& sites,
                        const SolverConfig& cfg) {
  cfg.validate();
  for (double t : times)
    if (!(t >= 0.0)) throw Error(ErrorKind::invalid_argument, "times must be non-negative");
  SolutionGrid grid{params, times, sites, std::vector<double>(times.size() * sites.size(), 0.0)};
  if (times.empty() || sites.empty()) return grid;

  const std::size_t ns = sites.size();
  if (spec.kind() == SpectralPair::Kind::closed_form) {
    parallel_for(times.size() * ns, [&](std::size_t idx) {
      grid.values[idx] = solve_at(spec, params, times[idx / ns], sites[idx % ns], cfg);
    });
    return grid;
  }

  long k_max = 0;
  for (long k : sites) k_max = std::max(k_max, std::labs(k));

  parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    const Integrand f{spec, params, t};
    std::size_t n = std::max(cfg.mesh_points, initial_mesh(k_max, spec.bandwidth(), t, params));
    auto slice = [&](std::size_t m, double& mass) {
      if (m > cfg.max_mesh)
        throw Error(ErrorKind::no_convergence, "grid mesh exceeds max_mesh");
      std::vector<cplx> samples(m);
      double abs_sum = 0.0;
      const double h = kTwoPi / static_cast<double>(m);
      for (std::size_t j = 0; j < m; ++j) {
        samples[j] = f(h * static_cast<double>(j));
        abs_sum += std::abs(samples[j]);
      }
      mass = abs_sum / static_cast<double>(m);
      const auto coef = detail::dft(samples);
      std::vector<double> out(ns);
      const long mm = static_cast<long>(m);
      for (std::size_t j = 0; j < ns; ++j) {
        const long idx = ((sites[j] % mm) + mm) % mm;
        out[j] = checked_real(coef[static_cast<std::size_t>(idx)] / static_cast<double>(m));
      }
      return out;
    };
    double mass = 0.0;
    auto prev = slice(n, mass);
    while (true) {
      n *= 2;
      auto cur = slice(n, mass);
      double diff = 0.0;
      for (std::size_t j = 0; j < ns; ++j) diff = std::max(diff, std::abs(cur[j] - prev[j]));
      if (diff <= cfg.tolerance + kRoundingFloor * mass) {
        std::copy(cur.begin(), cur.end(), grid.values.begin() + static_cast<long>(i * ns));
        return;
      }
      prev = std::move(cur);
    }
  });
  return grid;
}

WindowedMax max_norm(const SolutionGrid& grid, std::size_t t_index) {
  if (t_index >= grid.times.size())
    throw Error(ErrorKind::invalid_argument, "time index out of range");
  const std::size_t ns = grid.sites.size();
  if (ns == 0) return {0.0, true};
  double best = 0.0;
  std::size_t lo = 0, hi = 0;
  for (std::size_t j = 0; j < ns; ++j) {
    best = std::max(best, std::abs(grid.at(t_index, j)));
    if (grid.sites[j] < grid.sites[lo]) lo = j;
    if (grid.sites[j] > grid.sites[hi]) hi = j;
  }
  const double edge = std::max(std::abs(grid.at(t_index, lo)), std::abs(grid.at(t_index, hi)));
  return {best, ns < 3 ? best == 0.0 : edge <= 1e-3 * best};
}

void write_csv(const SolutionGrid& grid, std::ostream& out) {
  out << "t,k,q\n";
  char buf[96];
  for (std::size_t i = 0; i < grid.times.size(); ++i)
    for (std::size_t j = 0; j < grid.sites.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%ld,%.17g\n", grid.times[i], grid.sites[j],
                    grid.at(i, j));
      out << buf;
    }
}

unsigned thread_count() {
  if (const char* env = std::getenv("CHAINWAVE_THREADS")) {
    unsigned v = 0;
    const char* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, v);
    if (ec == std::errc{} && ptr == end && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace chainwave
