#pragma once

// Physical parameters, lattice states and their spectral (Fourier) images for
// the infinite harmonic chain
//
//   q''_k = -w0^2 q_k + w1^2 (q_{k+1} - q_k) - w1^2 (q_k - q_{k-1}).

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace chainwave {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Pinning frequency w0 >= 0, coupling frequency w1 > 0, lattice spacing a > 0.
class ChainParams {
 public:
  ChainParams(double omega0, double omega1, double spacing = 1.0);

  double omega0() const noexcept { return omega0_; }
  double omega1() const noexcept { return omega1_; }
  double spacing() const noexcept { return spacing_; }

  /// sqrt(w0^2 + 4 w1^2): the top of the dispersion band, reached at lambda = pi.
  double omega0_prime() const noexcept;

  bool pinned() const noexcept { return omega0_ > 0.0; }

 private:
  double omega0_;
  double omega1_;
  double spacing_;
};

/// Finitely supported real displacement/velocity data. Sites outside
/// [support_min, support_max] are exactly zero.
class LatticeState {
 public:
  LatticeState() = default;
  LatticeState(long support_min, std::vector<double> q, std::vector<double> p);

  static LatticeState zero() { return {}; }
  /// q = amplitude * delta_{k,site}, p = 0 (or the reverse with `velocity`).
  static LatticeState spike(long site, double amplitude = 1.0, bool velocity = false);

  long support_min() const noexcept { return support_min_; }
  long support_max() const noexcept { return support_min_ + static_cast<long>(q_.size()) - 1; }
  std::size_t size() const noexcept { return q_.size(); }
  bool empty() const noexcept { return q_.empty(); }
  /// max |k| over the support (0 for the empty state).
  long extent() const noexcept;

  double q(long k) const noexcept;
  double p(long k) const noexcept;
  std::span<const double> q_values() const noexcept { return q_; }
  std::span<const double> p_values() const noexcept { return p_; }

  double q_norm() const noexcept;
  double p_norm() const noexcept;

  /// Absolute positions x_k = k a + q_k over the support.
  std::vector<double> positions(const ChainParams& params) const;

 private:
  long support_min_ = 0;
  std::vector<double> q_;
  std::vector<double> p_;
};

/// A named closed-form spectrum (Q, P) such as the slow-growth families.
/// Implementations are immutable.
class ClosedFormSpectrum {
 public:
  virtual ~ClosedFormSpectrum() = default;
  virtual std::string name() const = 0;
  virtual cplx q(double lambda) const = 0;
  virtual cplx p(double lambda) const = 0;
  /// Integrable singularity at lambda = 0 (mod 2 pi).
  virtual bool singular() const = 0;
  /// Q(-lambda) = Q(lambda) and P(-lambda) = P(lambda), both real.
  virtual bool real_even() const = 0;
};

/// 2 pi-periodic spectral images Q(lambda), P(lambda).
class SpectralPair {
 public:
  enum class Kind { trig_polynomial, closed_form, grid };

  /// Q = sum_k q_k e^{i k lambda}, P likewise.
  static SpectralPair trig_polynomial(const LatticeState& state);
  static SpectralPair closed_form(std::shared_ptr<const ClosedFormSpectrum> form);
  /// Samples on lambda_j = 2 pi j / N, j = 0..N-1; evaluated elsewhere by
  /// trigonometric interpolation.
  static SpectralPair grid(std::vector<cplx> q_samples, std::vector<cplx> p_samples);

  Kind kind() const noexcept { return kind_; }
  cplx q(double lambda) const;
  cplx p(double lambda) const;

  bool singular() const noexcept;
  bool real_even() const noexcept;
  /// Highest Fourier mode present, or -1 if unbounded (closed forms).
  long bandwidth() const noexcept;
  std::size_t grid_size() const noexcept { return grid_q_.size(); }

  /// Trig-polynomial coefficients; empty state for other kinds.
  const LatticeState& coefficients() const noexcept { return coefficients_; }
  const ClosedFormSpectrum* form() const noexcept { return form_.get(); }

 private:
  SpectralPair() = default;

  Kind kind_ = Kind::trig_polynomial;
  LatticeState coefficients_;
  std::shared_ptr<const ClosedFormSpectrum> form_;
  // grid representation: samples and their centred Fourier coefficients
  std::vector<cplx> grid_q_, grid_p_;
  std::vector<cplx> grid_q_coef_, grid_p_coef_;
};

/// w(lambda) = sqrt(w0^2 + 2 w1^2 (1 - cos lambda)).
double dispersion(const ChainParams& params, double lambda) noexcept;
/// dw/dlambda = w1^2 sin(lambda) / w(lambda); where w vanishes (unpinned, lambda = 0)
/// the limit from the right, w1.
double group_velocity(const ChainParams& params, double lambda) noexcept;

SpectralPair forward_transform(const LatticeState& state);

/// (1/2pi) int_0^{2pi} (Q, P)(lambda) e^{-ik lambda} dlambda. Real parts; the
/// imaginary residue is checked against 1e-10 x magnitude.
std::pair<double, double> inverse_transform(const SpectralPair& spec, long k);

double energy(const LatticeState& state, const ChainParams& params);

/// z_k = q_{k+1} - q_k, u_k = p_{k+1} - p_k on [support_min - 1, support_max].
LatticeState displacement_transform(const LatticeState& state);

double total_velocity_sum(const LatticeState& state);

/// Real part of `value`; throws symmetry_violation if the imaginary part
/// exceeds `rel_tol` x (1 + |value|).
double checked_real(cplx value, double rel_tol = 1e-10);

}  // namespace chainwave
