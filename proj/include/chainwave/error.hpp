#pragma once

#include <stdexcept>
#include <string>

namespace chainwave {

enum class ErrorKind {
  invalid_argument,
  quadrature_failure,
  no_convergence,
  unstable_step,
  support_exceeds_radius,
  pinning_required,
  requires_omega0_zero,
  requires_t_ge_1,
  alpha_out_of_range,
  epsilon_out_of_range,
  mesh_not_converged,
  not_supersonic,
  pole,
  symmetry_violation,
  values_below_noise_floor,
  config_invalid,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace chainwave
