#include "chainwave/chain_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "chainwave/error.hpp"
#include "chainwave/quadrature.hpp"
#include "fft.hpp"

namespace chainwave {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::quadrature_failure: return "quadrature-failure";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::unstable_step: return "unstable-step";
    case ErrorKind::support_exceeds_radius: return "support-exceeds-radius";
    case ErrorKind::pinning_required: return "pinning-required";
    case ErrorKind::requires_omega0_zero: return "requires-omega0-zero";
    case ErrorKind::requires_t_ge_1: return "requires-t-ge-1";
    case ErrorKind::alpha_out_of_range: return "alpha-out-of-range";
    case ErrorKind::epsilon_out_of_range: return "epsilon-out-of-range";
    case ErrorKind::mesh_not_converged: return "mesh-not-converged";
    case ErrorKind::not_supersonic: return "not-supersonic";
    case ErrorKind::pole: return "pole-at-nonpositive-integer";
    case ErrorKind::symmetry_violation: return "symmetry-violation";
    case ErrorKind::values_below_noise_floor: return "values-below-noise-floor";
    case ErrorKind::config_invalid: return "config-invalid";
  }
  return "unknown";
}

ChainParams::ChainParams(double omega0, double omega1, double spacing)
    : omega0_(omega0), omega1_(omega1), spacing_(spacing) {
  if (!(omega0 >= 0.0) || !std::isfinite(omega0))
    throw Error(ErrorKind::invalid_argument, "omega0 must be >= 0");
  if (!(omega1 > 0.0) || !std::isfinite(omega1))
    throw Error(ErrorKind::invalid_argument, "omega1 must be positive");
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw Error(ErrorKind::invalid_argument, "spacing must be positive");
}

double ChainParams::omega0_prime() const noexcept {
  return std::sqrt(omega0_ * omega0_ + 4.0 * omega1_ * omega1_);
}

LatticeState::LatticeState(long support_min, std::vector<double> q, std::vector<double> p)
    : support_min_(support_min), q_(std::move(q)), p_(std::move(p)) {
  if (q_.size() != p_.size())
    throw Error(ErrorKind::invalid_argument, "q and p must have the same length");
  for (std::size_t i = 0; i < q_.size(); ++i)
    if (!std::isfinite(q_[i]) || !std::isfinite(p_[i]))
      throw Error(ErrorKind::invalid_argument, "lattice values must be finite");
  if (q_.empty()) support_min_ = 0;
}

LatticeState LatticeState::spike(long site, double amplitude, bool velocity) {
  return velocity ? LatticeState(site, {0.0}, {amplitude}) : LatticeState(site, {amplitude}, {0.0});
}

long LatticeState::extent() const noexcept {
  if (empty()) return 0;
  return std::max(std::labs(support_min()), std::labs(support_max()));
}

double LatticeState::q(long k) const noexcept {
  if (empty() || k < support_min() || k > support_max()) return 0.0;
  return q_[static_cast<std::size_t>(k - support_min_)];
}

double LatticeState::p(long k) const noexcept {
  if (empty() || k < support_min() || k > support_max()) return 0.0;
  return p_[static_cast<std::size_t>(k - support_min_)];
}

namespace {
double l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

cplx eval_trig(std::span<const double> coef, long k0, double lambda) {
  if (coef.empty()) return {0.0, 0.0};
  const cplx step = std::polar(1.0, lambda);
  cplx phase = std::polar(1.0, static_cast<double>(k0) * lambda);
  cplx sum{0.0, 0.0};
  for (double c : coef) {
    sum += c * phase;
    phase *= step;
  }
  return sum;
}

cplx eval_centered(const std::vector<cplx>& coef, double lambda) {
  // coef[m + N/2] holds mode m for m in [-N/2, N/2]
  if (coef.empty()) return {0.0, 0.0};
  const long half = static_cast<long>(coef.size() / 2);
  const cplx step = std::polar(1.0, lambda);
  cplx phase = std::polar(1.0, -static_cast<double>(half) * lambda);
  cplx sum{0.0, 0.0};
  for (const cplx& c : coef) {
    sum += c * phase;
    phase *= step;
  }
  return sum;
}

std::vector<cplx> centered_coefficients(const std::vector<cplx>& samples) {
  const std::size_t n = samples.size();
  const auto raw = detail::dft(samples);
  const long half = static_cast<long>(n / 2);
  std::vector<cplx> coef(n + 1, cplx{0.0, 0.0});
  for (long m = -half; m <= half; ++m) {
    const std::size_t idx = static_cast<std::size_t>((m % static_cast<long>(n) + n) % n);
    cplx c = raw[idx] / static_cast<double>(n);
    if (n % 2 == 0 && std::labs(m) == half) c *= 0.5;  // split the Nyquist mode
    coef[static_cast<std::size_t>(m + half)] = c;
  }
  return coef;
}

std::size_t next_pow2(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(n, 16)); }
}  // namespace

double LatticeState::q_norm() const noexcept { return l2(q_); }
double LatticeState::p_norm() const noexcept { return l2(p_); }

std::vector<double> LatticeState::positions(const ChainParams& params) const {
  std::vector<double> x(q_.size());
  for (std::size_t i = 0; i < q_.size(); ++i)
    x[i] = static_cast<double>(support_min_ + static_cast<long>(i)) * params.spacing() + q_[i];
  return x;
}

SpectralPair SpectralPair::trig_polynomial(const LatticeState& state) {
  SpectralPair s;
  s.kind_ = Kind::trig_polynomial;
  s.coefficients_ = state;
  return s;
}

SpectralPair SpectralPair::closed_form(std::shared_ptr<const ClosedFormSpectrum> form) {
  if (!form) throw Error(ErrorKind::invalid_argument, "closed form spectrum is null");
  SpectralPair s;
  s.kind_ = Kind::closed_form;
  s.form_ = std::move(form);
  return s;
}

SpectralPair SpectralPair::grid(std::vector<cplx> q_samples, std::vector<cplx> p_samples) {
  if (q_samples.size() != p_samples.size() || q_samples.size() < 2)
    throw Error(ErrorKind::invalid_argument, "grid spectra need matching sample counts >= 2");
  SpectralPair s;
  s.kind_ = Kind::grid;
  s.grid_q_coef_ = centered_coefficients(q_samples);
  s.grid_p_coef_ = centered_coefficients(p_samples);
  s.grid_q_ = std::move(q_samples);
  s.grid_p_ = std::move(p_samples);
  return s;
}

cplx SpectralPair::q(double lambda) const {
  switch (kind_) {
    case Kind::trig_polynomial:
      return eval_trig(coefficients_.q_values(), coefficients_.support_min(), lambda);
    case Kind::closed_form: return form_->q(lambda);
    case Kind::grid: return eval_centered(grid_q_coef_, lambda);
  }
  return {};
}

cplx SpectralPair::p(double lambda) const {
  switch (kind_) {
    case Kind::trig_polynomial:
      return eval_trig(coefficients_.p_values(), coefficients_.support_min(), lambda);
    case Kind::closed_form: return form_->p(lambda);
    case Kind::grid: return eval_centered(grid_p_coef_, lambda);
  }
  return {};
}

bool SpectralPair::singular() const noexcept {
  return kind_ == Kind::closed_form && form_->singular();
}

bool SpectralPair::real_even() const noexcept {
  if (kind_ == Kind::closed_form) return form_->real_even();
  if (kind_ == Kind::trig_polynomial) {
    const auto& c = coefficients_;
    for (long k = c.support_min(); k <= c.support_max(); ++k)
      if (c.q(k) != c.q(-k) || c.p(k) != c.p(-k)) return false;
    return true;
  }
  return false;
}

long SpectralPair::bandwidth() const noexcept {
  switch (kind_) {
    case Kind::trig_polynomial: return coefficients_.extent();
    case Kind::closed_form: return -1;
    case Kind::grid: return static_cast<long>(grid_q_.size() / 2);
  }
  return -1;
}

double dispersion(const ChainParams& params, double lambda) noexcept {
  const double w0 = params.omega0();
  const double w1 = params.omega1();
  // 1 - cos(lambda) = 2 sin^2(lambda/2), accurate near lambda = 0
  const double s = std::sin(0.5 * lambda);
  return std::sqrt(w0 * w0 + 4.0 * w1 * w1 * s * s);
}

double group_velocity(const ChainParams& params, double lambda) noexcept {
  const double w = dispersion(params, lambda);
  if (w == 0.0) return params.omega1();
  return params.omega1() * params.omega1() * std::sin(lambda) / w;
}

SpectralPair forward_transform(const LatticeState& state) {
  return SpectralPair::trig_polynomial(state);
}

double checked_real(cplx value, double rel_tol) {
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw Error(ErrorKind::quadrature_failure, "non-finite value");
  if (std::abs(value.imag()) > rel_tol * (1.0 + std::abs(value.real())))
    throw Error(ErrorKind::symmetry_violation,
                "imaginary residue " + std::to_string(value.imag()) + " exceeds tolerance");
  return value.real();
}

std::pair<double, double> inverse_transform(const SpectralPair& spec, long k) {
  const double kd = static_cast<double>(k);
  switch (spec.kind()) {
    case SpectralPair::Kind::trig_polynomial: {
      const std::size_t n = next_pow2(2 * static_cast<std::size_t>(spec.bandwidth() + std::labs(k)) + 2);
      const cplx q = quad::periodic_mean(
          [&](double l) { return spec.q(l) * std::polar(1.0, -kd * l); }, n);
      const cplx p = quad::periodic_mean(
          [&](double l) { return spec.p(l) * std::polar(1.0, -kd * l); }, n);
      return {checked_real(q), checked_real(p)};
    }
    case SpectralPair::Kind::grid: {
      const std::size_t n = spec.grid_size();
      if (n <= 2 * static_cast<std::size_t>(std::labs(k)))
        throw Error(ErrorKind::quadrature_failure,
                    "grid of " + std::to_string(n) + " points cannot resolve mode " +
                        std::to_string(k));
      const cplx q = quad::periodic_mean(
          [&](double l) { return spec.q(l) * std::polar(1.0, -kd * l); }, n);
      const cplx p = quad::periodic_mean(
          [&](double l) { return spec.p(l) * std::polar(1.0, -kd * l); }, n);
      return {checked_real(q), checked_real(p)};
    }
    case SpectralPair::Kind::closed_form: {
      if (!spec.real_even())
        throw Error(ErrorKind::invalid_argument, "closed forms must be real and even");
      const double rate = std::labs(k) + 1.0;
      auto mean = [&](bool want_q, int level) {
        return quad::folded_singular_mean(
            [&](double l) {
              return (want_q ? spec.q(l) : spec.p(l)).real() * std::cos(kd * l);
            },
            rate, level);
      };
      double out[2];
      for (int which = 0; which < 2; ++which) {
        double prev = mean(which == 0, 0);
        bool ok = false;
        for (int level = 1; level <= 10; ++level) {
          const double cur = mean(which == 0, level);
          if (std::abs(cur - prev) <= 1e-12 * (1.0 + std::abs(cur))) {
            prev = cur;
            ok = true;
            break;
          }
          prev = cur;
        }
        if (!ok) throw Error(ErrorKind::no_convergence, "inverse transform of closed form");
        out[which] = prev;
      }
      return {out[0], out[1]};
    }
  }
  return {0.0, 0.0};
}

double energy(const LatticeState& state, const ChainParams& params) {
  if (state.empty()) return 0.0;
  const double w0 = params.omega0();
  const double w1 = params.omega1();
  double kinetic = 0.0, onsite = 0.0, bonds = 0.0;
  for (long k = state.support_min(); k <= state.support_max(); ++k) {
    kinetic += state.p(k) * state.p(k);
    onsite += state.q(k) * state.q(k);
  }
  for (long k = state.support_min(); k <= state.support_max() + 1; ++k) {
    const double d = state.q(k) - state.q(k - 1);
    bonds += d * d;
  }
  return 0.5 * kinetic + 0.5 * w0 * w0 * onsite + 0.5 * w1 * w1 * bonds;
}

LatticeState displacement_transform(const LatticeState& state) {
  if (state.empty()) return {};
  const long lo = state.support_min() - 1;
  const long hi = state.support_max();
  std::vector<double> z, u;
  z.reserve(static_cast<std::size_t>(hi - lo + 1));
  u.reserve(z.capacity());
  for (long k = lo; k <= hi; ++k) {
    z.push_back(state.q(k + 1) - state.q(k));
    u.push_back(state.p(k + 1) - state.p(k));
  }
  return {lo, std::move(z), std::move(u)};
}

double total_velocity_sum(const LatticeState& state) {
  double s = 0.0;
  for (double v : state.p_values()) s += v;
  return s;
}

}  // namespace chainwave
