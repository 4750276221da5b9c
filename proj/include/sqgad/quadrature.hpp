#pragma once

// Globally adaptive Gauss-Kronrod (10/21 point) integration in one dimension
// and nested two-dimensional integration built on it.

#include <functional>
#include <vector>

namespace sqgad::quadrature {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
  // Integrate one quadrant and multiply by 4 for quadrant-symmetric integrands.
  bool symmetry_reduction = true;

  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  long evaluations = 0;
  int intervals = 0;
};

using Integrand = std::function<double(double)>;
using Integrand2 = std::function<double(double, double)>;

// Integral over [breaks.front(), breaks.back()].  Interior breakpoints seed
// the initial partition.  Throws QuadratureError when the tolerance cannot be
// reached within max_subdivisions.
QuadratureResult integrate(const Integrand& f, std::vector<double> breaks,
                           const QuadratureSpec& spec = {});
QuadratureResult integrate(const Integrand& f, double a, double b,
                           const QuadratureSpec& spec = {});

// Iterated integral  int_{outer} int_{lo(x)}^{hi(x)} f(x, y) dy dx.
// inner_breaks(x) returns interior breakpoints for the inner variable (may be
// empty).  The inner integrals run at a tenth of the outer tolerance; the
// reported error adds the outer estimate and the integrated inner estimates.
struct Region2 {
  std::vector<double> outer_breaks;
  std::function<double(double)> lo;
  std::function<double(double)> hi;
  std::function<std::vector<double>(double)> inner_breaks;
};

QuadratureResult integrate_2d(const Integrand2& f, const Region2& region,
                              const QuadratureSpec& spec = {});

// a, then scale * 2^j for j >= -4 inside (a, b), then b.
std::vector<double> geometric_breaks(double a, double b, double scale);

}  // namespace sqgad::quadrature
