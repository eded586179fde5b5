#include <cmath>
#include <sstream>
#include <string>

#include "chainwave/bounds.hpp"
#include "chainwave/quadrature.hpp"
#include "chainwave/spectral_solver.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace chainwave;
using chainwave::testing::kind_of;
using chainwave::testing::random_state;

namespace {

std::vector<long> window(long half) {
  std::vector<long> out;
  for (long k = -half; k <= half; ++k) out.push_back(k);
  return out;
}

// Reference pieces in s = sqrt(1/2 - alpha), straight from std::tgamma.
double a_of_s(double s) {
  const double alpha = 0.5 - s * s;
  return std::sqrt(std::tgamma(1 - alpha) / (2 * std::sqrt(kPi) * std::tgamma(s * s)));
}

double phi_of_s(double s) {
  const double alpha = 0.5 - s * s;
  return 2 * a_of_s(s) * std::tgamma(1 - alpha) * std::sin(kPi * alpha / 2) / (kPi * alpha);
}

// int_0^{1/sqrt 2} f(s) s^{2 eps - 1} ds with s = r^{1/(2 eps)}, which makes the
// integrand bounded: (1/(2 eps)) int f(s(r)) dr.
double reference(const std::function<double(double)>& f, double eps) {
  const double r_max = std::pow(std::sqrt(0.5), 2 * eps);
  return quad::adaptive([&](double r) { return r == 0.0 ? f(0.0) : f(std::pow(r, 1 / (2 * eps))) / (2 * eps); },
                        0.0, r_max, 1e-12, 20).first;
}

}  // namespace

TEST_CASE("energy bound examples") {
  CHECK(energy_sup_bound(ChainParams(1.0, 1.0), 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(energy_sup_bound(ChainParams(2.0, 1.0), 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(energy_sup_bound(ChainParams(1.0, 1.0), 0.0) == 0.0);
  CHECK(kind_of([] { energy_sup_bound(ChainParams(0.0, 1.0), 1.0); }) == ErrorKind::pinning_required);
}

TEST_CASE("energy bound holds along a pinned trajectory") {
  const ChainParams p(1.0, 1.0);
  const auto s = random_state(2);
  const double bound = energy_sup_bound(p, energy(s, p));
  std::vector<double> times;
  for (int i = 0; i <= 50; ++i) times.push_back(2.0 * i);
  const auto grid = solve_grid(forward_transform(s), p, times, window(170));
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto m = max_norm(grid, i);
    CHECK(m.edge_ok);
    CHECK(m.value <= bound + 1e-9);
  }
}

TEST_CASE("square-root growth bound") {
  const ChainParams p(0.0, 1.0);
  CHECK(sqrt_growth_bound(4.0, 0.0, 1.0, p) == doctest::Approx(4.0));
  CHECK(sqrt_growth_bound(0.0, 0.7, 1.0, p) == doctest::Approx(0.7));
  const auto spike = forward_transform(LatticeState::spike(0, 1.0, true));
  for (double t : {1.0, 10.0, 100.0}) {
    const auto g = solve_grid(spike, p, {t}, window(static_cast<long>(t) + 60));
    CHECK(max_norm(g, 0).value <= sqrt_growth_bound(t, 0.0, 1.0, p));
  }
}

TEST_CASE("logarithmic bound slope part") {
  const ChainParams p(0.0, 1.0);
  const LatticeState q_only(0, {0.6, 0.8}, {0.0, 0.0});
  CHECK(log_growth_bound(50.0, q_only, p) == doctest::Approx(1.0));
  CHECK(log_growth_bound(std::exp(1.0), LatticeState::spike(0, 1.0, true), p) ==
        doctest::Approx(std::sqrt(2.0) / kPi).epsilon(1e-15));
  CHECK(kind_of([&] { log_growth_bound(0.5, q_only, p); }) == ErrorKind::requires_t_ge_1);
  CHECK(kind_of([&] { log_growth_bound(5.0, q_only, ChainParams(1.0, 1.0)); }) ==
        ErrorKind::requires_omega0_zero);
}

TEST_CASE("alpha normalization") {
  CHECK(alpha_normalization(1e-7) == doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(1e-6));
  const double a = 0.25;
  CHECK(alpha_normalization(a) ==
        doctest::Approx(std::sqrt(std::tgamma(0.75) / (2 * std::sqrt(kPi) * std::tgamma(0.25))))
            .epsilon(1e-14));
  for (double alpha : {0.1, 0.25, 0.4}) CHECK(std::abs(alpha_normalization_integral(alpha) - 1.0) <= 1e-8);
  CHECK(kind_of([] { alpha_normalization(0.5); }) == ErrorKind::alpha_out_of_range);
  CHECK(kind_of([] { alpha_normalization(0.0); }) == ErrorKind::alpha_out_of_range);
}

TEST_CASE("alpha normalization agrees with the beta-function form") {
  for (double alpha : {0.05, 0.2, 0.35, 0.45}) {
    const double integral = 2 * std::tgamma(0.5 - alpha) * std::tgamma(0.5) / std::tgamma(1 - alpha);
    const double a = alpha_normalization(alpha);
    CHECK(a * a * integral == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("leading amplitude") {
  const double a = alpha_normalization(0.25);
  CHECK(alpha_leading_amplitude(0.25) ==
        doctest::Approx(2 * a * std::tgamma(0.75) * std::sin(kPi / 8) / (kPi / 4)).epsilon(1e-14));
  for (double alpha : {1e-2, 1e-3, 1e-5}) {
    const double phi = alpha_leading_amplitude(alpha);
    CHECK(std::isfinite(phi));
    CHECK(phi == doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(2 * alpha));
  }
  const auto fam = GrowthFamily::make(0.3);
  CHECK(fam.a_alpha == alpha_normalization(0.3));
  CHECK(fam.phi_alpha == alpha_leading_amplitude(0.3));
  CHECK(alpha_remainder_bound(0.3, 2.0) == doctest::Approx(4 * fam.a_alpha));
}

TEST_CASE("alpha family spectrum") {
  const auto spec = alpha_spectrum(0.3);
  CHECK(spec.singular());
  CHECK(spec.p(kPi).real() == doctest::Approx(alpha_normalization(0.3)).epsilon(1e-15));
  CHECK(std::abs(spec.q(1.0)) == 0.0);
  for (double lam : {0.01, 0.5, 2.0}) CHECK(spec.p(lam).real() == doctest::Approx(spec.p(kTwoPi - lam).real()).epsilon(1e-13));
}

TEST_CASE("alpha family q0 follows phi t^alpha within the explicit remainder") {
  const ChainParams p(0.0, 0.5);
  for (double alpha : {0.1, 0.3, 0.45}) {
    const auto spec = alpha_spectrum(alpha);
    for (double t : {1.0, 5.0, 50.0, 500.0, 5000.0}) {
      const double q0 = solve_at(spec, p, t, 0);
      CHECK(std::abs(q0 - alpha_leading_amplitude(alpha) * std::pow(t, alpha)) <=
            alpha_remainder_bound(alpha, t));
    }
  }
}

TEST_CASE("epsilon family spectrum matches a direct alpha integral") {
  for (double eps : {0.1, 0.25, 0.4}) {
    const EpsilonFamily fam(eps);
    CHECK(fam.node_count() > 0);
    CHECK(std::abs(fam.q(1.0)) == 0.0);
    for (double lam : {kPi, 1.0, 1e-3}) {
      const double log_sin = std::log(std::abs(std::sin(lam / 2)));
      const double ref = reference(
          [&](double s) {
            if (s == 0.0) return 0.0;
            const double alpha = 0.5 - s * s;
            return 2 * s * a_of_s(s) / phi_of_s(s) * std::exp(-alpha * log_sin);
          },
          eps);
      CHECK(fam.p_real(lam) == doctest::Approx(ref).epsilon(1e-9));
    }
  }
  CHECK(kind_of([] { EpsilonFamily(0.5); }) == ErrorKind::epsilon_out_of_range);
  CHECK(kind_of([] { epsilon_spectrum(-0.1); }) == ErrorKind::epsilon_out_of_range);
}

TEST_CASE("epsilon weight integral converges and bounds the L2 norm") {
  for (double eps : {0.1, 0.3}) {
    const double w0 = w_epsilon_integral(eps, 0);
    const double w1 = w_epsilon_integral(eps, 1);
    CHECK(std::abs(w0 - w1) <= 1e-6 * w1);
    const double ref = reference(
        [&](double s) { return s == 0.0 ? std::sqrt(kPi) : 2 * s / phi_of_s(s); }, eps);
    CHECK(w0 == doctest::Approx(ref).epsilon(1e-6));
    CHECK(epsilon_l2_norm(eps) <= w0);
    CHECK(std::abs(epsilon_l2_norm(eps, 0) - epsilon_l2_norm(eps, 1)) <= 1e-6);
  }
}

TEST_CASE("growth identity") {
  CHECK(growth_identity_lhs(std::exp(2.0), 1.0) == doctest::Approx(0.859140914229523).epsilon(1e-13));
  for (double t : {10.0, 100.0, 1000.0, 1e6})
    for (double delta : {0.6, 0.75, 0.9})
      CHECK(growth_identity_lhs(t, delta) == doctest::Approx(growth_identity_rhs(t, delta)).epsilon(1e-8));
}

TEST_CASE("growth prediction scaling and limit") {
  const double eps = 0.4;
  const ChainParams half(0.0, 0.5), other(0.0, 1.7);
  for (double t : {10.0, 1e3, 1e5}) {
    CHECK(growth_prediction(t, eps, other) ==
          doctest::Approx(growth_prediction(2 * 1.7 * t, eps, half) / (2 * 1.7)).epsilon(1e-13));
  }
  const double t = 1e300;
  const double ratio = growth_prediction(t, eps, half) * std::pow(std::log(t), eps + 0.5) / std::sqrt(t);
  CHECK(ratio == doctest::Approx(growth_limit(eps, half)).epsilon(1e-10));
  CHECK(growth_limit(eps, half) == doctest::Approx(std::tgamma(0.9)).epsilon(1e-13));
  CHECK(kind_of([&] { growth_prediction(10.0, eps, ChainParams(1.0, 1.0)); }) == ErrorKind::requires_omega0_zero);
}

TEST_CASE("bounds report layout") {
  std::ostringstream os;
  write_bounds_report({{1.0, 0.5, "energy", 1.0, 0.5}}, os);
  CHECK(os.str() == "t,M_windowed,bound_name,bound_value,residual\n1,0.5,energy,1,0.5\n");
}
