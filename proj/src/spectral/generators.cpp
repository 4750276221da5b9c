#include <cmath>
#include <numbers>
#include <random>

#include "sqgad/error.hpp"
#include "sqgad/spectral.hpp"

namespace sqgad::spectral {

SpectralField random_band_limited(std::uint64_t seed, const GridSpec& grid,
                                  const Band& band, double spectrum_slope,
                                  double l2_norm) {
  grid.validate();
  require(band.k_lo >= 0.0 && band.k_hi >= band.k_lo, ErrorCode::InvalidArgument,
          "band must satisfy 0 <= k_lo <= k_hi");
  require(l2_norm > 0.0, ErrorCode::InvalidArgument, "target norm must be positive");
  const double kappa1 = 2.0 * std::numbers::pi / grid.l1;
  const double kappa2 = 2.0 * std::numbers::pi / grid.l2;
  const int m1_max = static_cast<int>(std::floor(band.k_hi / kappa1));
  const int m2_max = static_cast<int>(std::floor(band.k_hi / kappa2));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(grid);
  bool any = false;
  // Visit one representative of each +-k pair in a resolution independent
  // order so the same seed yields the same field on every grid.
  for (int m1 = 0; m1 <= m1_max; ++m1) {
    for (int m2 = -m2_max; m2 <= m2_max; ++m2) {
      if (m1 == 0 && m2 <= 0) continue;
      const double r = std::hypot(m1 * kappa1, m2 * kappa2);
      if (r < band.k_lo || r > band.k_hi) continue;
      require(2 * m1 < grid.n1 && 2 * std::abs(m2) < grid.n2,
              ErrorCode::InvalidArgument, "band exceeds the grid's resolved modes");
      const double sd = std::pow(r, spectrum_slope) / std::sqrt(2.0);
      const double re = normal(rng);
      const double im = normal(rng);
      const Complex c(sd * re, sd * im);
      f.mode(m1, m2) = c;
      f.mode(-m1, -m2) = std::conj(c);
      any = true;
    }
  }
  require(any, ErrorCode::EmptyBand, "band contains no resolved wavenumbers");
  const double norm = sobolev_norm(f, 0.0);
  require(norm > 0.0, ErrorCode::EmptyBand, "band produced a zero field");
  f *= l2_norm / norm;
  return f;
}

SpectralField single_mode(const GridSpec& grid, int m1, int m2, double amplitude,
                          double phase) {
  grid.validate();
  require(2 * std::abs(m1) < grid.n1 && 2 * std::abs(m2) < grid.n2,
          ErrorCode::InvalidArgument, "mode is not resolved below Nyquist");
  require(m1 != 0 || m2 != 0, ErrorCode::InvalidArgument,
          "single mode must not be the mean mode");
  SpectralField f(grid);
  const Complex c = std::polar(amplitude / std::sqrt(2.0), phase);
  f.mode(m1, m2) = c;
  f.mode(-m1, -m2) = std::conj(c);
  return f;
}

}  // namespace sqgad::spectral
