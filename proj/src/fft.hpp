#pragma once

#include <complex>
#include <span>
#include <vector>

namespace chainwave::detail {

/// c_m = sum_j f_j exp(-2 pi i j m / N), unnormalized.
std::vector<std::complex<double>> dft(std::span<const std::complex<double>> f);

}  // namespace chainwave::detail
