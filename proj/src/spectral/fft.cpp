#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace sqgad::spectral::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::shared_ptr<const FftPlans> FftPlans::get(int n1, int n2) {
  // The mutex must outlive the cache: plan destructors take it at exit.
  std::mutex& m = planner_mutex();
  static std::map<std::pair<int, int>, std::shared_ptr<const FftPlans>> cache;
  std::lock_guard lock(m);
  auto& slot = cache[{n1, n2}];
  if (!slot) slot = std::make_shared<const FftPlans>(n1, n2);
  return slot;
}

// Only called from get(), which already holds the planner lock.
FftPlans::FftPlans(int n1, int n2) : n1_(n1), n2_(n2) {
  std::vector<double> real(static_cast<std::size_t>(n1) * n2);
  std::vector<std::complex<double>> half(static_cast<std::size_t>(n1) *
                                         (n2 / 2 + 1));
  auto* h = reinterpret_cast<fftw_complex*>(half.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  r2c_ = fftw_plan_dft_r2c_2d(n1, n2, real.data(), h, flags);
  c2r_ = fftw_plan_dft_c2r_2d(n1, n2, h, real.data(), flags);
}

FftPlans::~FftPlans() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
  fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

void FftPlans::forward(std::span<const double> real,
                       std::span<std::complex<double>> half) const {
  // r2c does not modify its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_),
                       const_cast<double*>(real.data()),
                       reinterpret_cast<fftw_complex*>(half.data()));
}

void FftPlans::backward(std::span<const std::complex<double>> half,
                        std::span<double> real) const {
  std::vector<std::complex<double>> scratch(half.begin(), half.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_),
                       reinterpret_cast<fftw_complex*>(scratch.data()),
                       real.data());
}

}  // namespace sqgad::spectral::detail
