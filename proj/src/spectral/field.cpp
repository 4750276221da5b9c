#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "sqgad/error.hpp"
#include "sqgad/spectral.hpp"

namespace sqgad::spectral {

void GridSpec::validate() const {
  auto even_positive = [](int n) { return n >= 2 && n % 2 == 0; };
  require(even_positive(n1) && even_positive(n2), ErrorCode::InvalidArgument,
          "grid sizes must be positive even integers");
  require(std::isfinite(l1) && std::isfinite(l2) && l1 > 0.0 && l2 > 0.0,
          ErrorCode::InvalidArgument, "domain periods must be positive");
  require(dealias_fraction > 0.0 && dealias_fraction <= 1.0,
          ErrorCode::InvalidArgument, "dealias fraction must lie in (0,1]");
}

int GridSpec::mode(int axis, int index) const {
  const int n = axis == 1 ? n1 : n2;
  return index < n / 2 ? index : index - n;
}

double GridSpec::wavenumber(int axis, int index) const {
  const double l = axis == 1 ? l1 : l2;
  return 2.0 * std::numbers::pi * mode(axis, index) / l;
}

bool GridSpec::is_nyquist(int axis, int index) const {
  return index == (axis == 1 ? n1 : n2) / 2;
}

int GridSpec::dealias_cutoff(int axis) const {
  const int n = axis == 1 ? n1 : n2;
  // Guard against 2/3 * n/2 landing a hair below an integer.
  return static_cast<int>(std::floor(dealias_fraction * (n / 2) + 1e-12));
}

bool GridSpec::retained(int i1, int i2) const {
  return std::abs(mode(1, i1)) <= dealias_cutoff(1) &&
         std::abs(mode(2, i2)) <= dealias_cutoff(2);
}

double GridSpec::spacing(int axis) const {
  return axis == 1 ? l1 / n1 : l2 / n2;
}

SpectralField::SpectralField(const GridSpec& grid)
    : grid_(grid), coeffs_(grid.size()) {
  grid_.validate();
}

SpectralField::SpectralField(const GridSpec& grid, std::vector<Complex> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
  grid_.validate();
  require(coeffs_.size() == grid_.size(), ErrorCode::InvalidArgument,
          "coefficient count does not match the grid");
}

namespace {

int wrap(int m, int n) { return ((m % n) + n) % n; }

}  // namespace

Complex& SpectralField::mode(int m1, int m2) {
  return at(wrap(m1, grid_.n1), wrap(m2, grid_.n2));
}

const Complex& SpectralField::mode(int m1, int m2) const {
  return at(wrap(m1, grid_.n1), wrap(m2, grid_.n2));
}

double SpectralField::hermitian_defect() const {
  double worst = 0.0;
  for (int i1 = 0; i1 < grid_.n1; ++i1) {
    const int j1 = (grid_.n1 - i1) % grid_.n1;
    for (int i2 = 0; i2 < grid_.n2; ++i2) {
      const int j2 = (grid_.n2 - i2) % grid_.n2;
      worst = std::max(worst, std::abs(at(i1, i2) - std::conj(at(j1, j2))));
    }
  }
  return worst;
}

bool SpectralField::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Complex& c) { return c == Complex{}; });
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require(grid_ == other.grid_, ErrorCode::InvalidArgument, "grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require(grid_ == other.grid_, ErrorCode::InvalidArgument, "grid mismatch");
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double factor, SpectralField f) { return f *= factor; }

PhysicalField to_physical(const SpectralField& f) {
  const GridSpec& g = f.grid();
  const auto plans = detail::FftPlans::get(g.n1, g.n2);
  const int half = plans->half();
  std::vector<Complex> h(static_cast<std::size_t>(g.n1) * half);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < half; ++i2) h[i1 * half + i2] = f.at(i1, i2);
  PhysicalField out{g, std::vector<double>(g.size())};
  plans->backward(h, out.values);
  const double scale = 1.0 / std::sqrt(g.area());
  for (auto& v : out.values) v *= scale;
  return out;
}

SpectralField to_spectral(const PhysicalField& f) {
  const GridSpec& g = f.grid;
  g.validate();
  require(f.values.size() == g.size(), ErrorCode::InvalidArgument,
          "physical field size does not match the grid");
  const auto plans = detail::FftPlans::get(g.n1, g.n2);
  const int half = plans->half();
  std::vector<Complex> h(static_cast<std::size_t>(g.n1) * half);
  plans->forward(f.values, h);
  const double scale = std::sqrt(g.area()) / static_cast<double>(g.size());
  SpectralField out(g);
  for (int i1 = 0; i1 < g.n1; ++i1) {
    for (int i2 = 0; i2 < half; ++i2) out.at(i1, i2) = scale * h[i1 * half + i2];
    const int j1 = (g.n1 - i1) % g.n1;
    for (int i2 = half; i2 < g.n2; ++i2)
      out.at(i1, i2) = std::conj(scale * h[j1 * half + (g.n2 - i2)]);
  }
  return out;
}

SpectralField hermitian_projection(const SpectralField& f) {
  const GridSpec& g = f.grid();
  SpectralField out(g);
  for (int i1 = 0; i1 < g.n1; ++i1) {
    const int j1 = (g.n1 - i1) % g.n1;
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const int j2 = (g.n2 - i2) % g.n2;
      out.at(i1, i2) = 0.5 * (f.at(i1, i2) + std::conj(f.at(j1, j2)));
    }
  }
  return out;
}

}  // namespace sqgad::spectral
