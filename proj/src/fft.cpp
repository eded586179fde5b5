#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace chainwave::detail {

namespace {
// the FFTW planner is not reentrant; execution on distinct arrays is
std::mutex planner_mutex;
}  // namespace

std::vector<std::complex<double>> dft(std::span<const std::complex<double>> f) {
  const int n = static_cast<int>(f.size());
  std::vector<std::complex<double>> in(f.begin(), f.end());
  std::vector<std::complex<double>> out(f.size());
  if (n == 0) return out;
  auto* in_ptr = reinterpret_cast<fftw_complex*>(in.data());
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace chainwave::detail
