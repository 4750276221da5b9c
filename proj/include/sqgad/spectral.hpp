#pragma once

// Real scalar fields on the periodic rectangle [0,l1) x [0,l2), stored as
// Fourier coefficients, together with the anisotropic multipliers and norms.
//
// Normalization: with A = l1*l2 and N = n1*n2, a field f(x) is stored as
//   fhat(k) = sqrt(A) * c_k,    f(x) = sum_k c_k exp(i xi(k).x),
// so that ||f||_{L2}^2 = sum_k |fhat(k)|^2 with unit constant.  Every norm in
// this library uses that convention.
//
// Coefficient layout is row-major with the axis-1 index slow: element
// (i1, i2) lives at i1*n2 + i2.  Index i maps to the integer mode i for
// i < n/2 and to i - n otherwise; the Nyquist index n/2 is mode -n/2.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sqgad/theory.hpp"

namespace sqgad::spectral {

using Complex = std::complex<double>;

struct GridSpec {
  int n1 = 64;
  int n2 = 64;
  double l1 = 6.283185307179586;
  double l2 = 6.283185307179586;
  double dealias_fraction = 2.0 / 3.0;

  void validate() const;
  std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
  double area() const { return l1 * l2; }
  // Integer mode for an array index along an axis (axis is 1 or 2).
  int mode(int axis, int index) const;
  // Physical wavenumber 2*pi*mode/l along an axis.
  double wavenumber(int axis, int index) const;
  bool is_nyquist(int axis, int index) const;
  // Largest retained |mode| along an axis under the dealias mask.
  int dealias_cutoff(int axis) const;
  bool retained(int i1, int i2) const;
  // Grid spacing along an axis.
  double spacing(int axis) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const GridSpec& grid);
  SpectralField(const GridSpec& grid, std::vector<Complex> coeffs);

  const GridSpec& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  const Complex& at(int i1, int i2) const {
    return coeffs_[static_cast<std::size_t>(i1) * grid_.n2 + i2];
  }
  Complex& at(int i1, int i2) {
    return coeffs_[static_cast<std::size_t>(i1) * grid_.n2 + i2];
  }
  // Coefficient of the mode (m1, m2); modes are reduced modulo n.
  Complex& mode(int m1, int m2);
  const Complex& mode(int m1, int m2) const;

  // Largest |f(k) - conj(f(-k))| over the array.
  double hermitian_defect() const;
  bool is_zero() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);

  friend bool operator==(const SpectralField&, const SpectralField&) = default;

 private:
  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double factor, SpectralField f);

// Real collocation values on the uniform grid, same row-major layout.
struct PhysicalField {
  GridSpec grid;
  std::vector<double> values;
};

PhysicalField to_physical(const SpectralField& f);
SpectralField to_spectral(const PhysicalField& f);

// Symmetrize to exact Hermitian form: (f(k) + conj f(-k))/2.
SpectralField hermitian_projection(const SpectralField& f);

// A real Fourier multiplier.
struct MultiplierSymbol {
  enum class Kind {
    AxisPower,       // |xi_axis|^gamma
    IsotropicPower,  // |xi|^s
    MixedPower,      // |xi_1|^d1 |xi_2|^d2
    Dissipation,     // |xi_1|^{2a} + |xi_2|^{2b}
    HeatKernel,      // exp(-t (|xi_1|^{2a} + |xi_2|^{2b}))
  };

  Kind kind = Kind::IsotropicPower;
  int axis = 1;
  double e1 = 0.0;  // gamma, s, d1 or alpha depending on kind
  double e2 = 0.0;  // d2 or beta
  double t = 0.0;

  static MultiplierSymbol axis_power(int axis, double gamma);
  static MultiplierSymbol isotropic_power(double s);
  static MultiplierSymbol mixed_power(double d1, double d2);
  static MultiplierSymbol dissipation(const theory::DissipationParams& p);
  static MultiplierSymbol heat_kernel(const theory::DissipationParams& p,
                                      double t);

  double operator()(double xi1, double xi2) const;
  // True when the symbol blows up at xi = 0.
  bool singular_at_origin() const;
};

// Pointwise multiplication by the symbol.  A singular symbol maps the zero
// mode to zero and throws SingularSymbol if that mode is nonzero.
SpectralField apply_multiplier(const SpectralField& f,
                               const MultiplierSymbol& m);

struct Velocity {
  SpectralField u1;
  SpectralField u2;
};

// u = (-R_2 theta, R_1 theta) with R_j = i xi_j/|xi|.  The zero mode and
// every mode on a Nyquist line carry no velocity.
Velocity riesz_velocity(const SpectralField& theta);

// Spectral partial derivative along an axis; Nyquist lines map to zero.
SpectralField derivative(const SpectralField& f, int axis);

// (sum |xi|^{2s} |fhat|^2)^{1/2}
double sobolev_norm(const SpectralField& f, double s);
// (sum |xi_axis|^{2 gamma} |fhat|^2)^{1/2}
double anisotropic_norm(const SpectralField& f, int axis, double gamma);
// (sum |xi_1|^{2 d1} |xi_2|^{2 d2} |fhat|^2)^{1/2}
double mixed_norm(const SpectralField& f, double d1, double d2);
// Uniform-grid quadrature of |f|^p in physical space; p = inf gives max |f|.
double lp_norm(const SpectralField& f, double p);
double lp_norm(const PhysicalField& f, double p);
// Re sum conj(a) b, the L2 inner product under the fixed normalization.
double inner_product(const SpectralField& a, const SpectralField& b);
// sum lambda(xi) |fhat|^2 = ||Lambda_1^a f||^2 + ||Lambda_2^b f||^2
double dissipation_form(const SpectralField& f,
                        const theory::DissipationParams& params);

// Zero every coefficient outside the dealias mask.
SpectralField dealias(const SpectralField& f);

struct Band {
  double k_lo = 1.0;  // inclusive bounds on |xi|
  double k_hi = 4.0;
};

// Seeded Hermitian field with complex Gaussian coefficients of standard
// deviation |xi|^slope on the band and a zero mean mode, scaled to the given
// L2 norm.  Coefficients depend only on (seed, band, l1, l2, slope), not on
// the resolution, so the same field can be sampled on finer grids.
SpectralField random_band_limited(std::uint64_t seed, const GridSpec& grid,
                                  const Band& band, double spectrum_slope,
                                  double l2_norm = 1.0);

// Field holding a single real cosine mode a*cos(xi(k).x + phase) with
// ||f||_{L2} = amplitude.
SpectralField single_mode(const GridSpec& grid, int m1, int m2,
                          double amplitude, double phase = 0.0);

// Binary snapshot (little endian):
//   char[4] "SQGF", u32 version (=1), u32 endian tag 0x01020304,
//   u32 n1, u32 n2, f64 l1, f64 l2, f64 dealias_fraction,
//   n1*n2 x (f64 re, f64 im) row-major, axis-1 index slow.
void write_snapshot(const SpectralField& f, const std::string& path);
SpectralField read_snapshot(const std::string& path);
std::vector<char> encode_snapshot(const SpectralField& f);
SpectralField decode_snapshot(std::span<const char> bytes);

}  // namespace sqgad::spectral
