#pragma once

// The linear flow theta_t + (Lambda_1^{2a} + Lambda_2^{2b}) theta = 0: exact
// evolution on the torus, and norms on the whole plane by quadrature of
//   ||Lambda^s theta(t)||^2 = int |xi|^{2s} exp(-2 t lambda(xi)) |theta0^(xi)|^2 dxi.

#include <string>
#include <vector>

#include "sqgad/analysis.hpp"
#include "sqgad/quadrature.hpp"
#include "sqgad/spectral.hpp"
#include "sqgad/theory.hpp"

namespace sqgad::linear {

// |theta0^(xi)| on the plane.  Every kind is even in each coordinate.
struct SpectrumProfile {
  enum class Kind {
    Plateau,          // 1 on |xi| <= r
    SmoothBump,       // exp(-|xi|^2 / (2 sigma^2))
    AxisAnisotropic,  // 1 on |xi_1| <= r1, |xi_2| <= r2
    Annulus,          // 1 on r_in <= |xi| <= r_out; no mass near 0
  };

  Kind kind = Kind::Plateau;
  double r = 1.0;
  double sigma = 1.0;
  double r1 = 1.0;
  double r2 = 1.0;
  double r_in = 0.5;
  double r_out = 1.0;

  static SpectrumProfile plateau(double r);
  static SpectrumProfile smooth_bump(double sigma);
  static SpectrumProfile axis_anisotropic(double r1, double r2);
  static SpectrumProfile annulus(double r_in, double r_out);

  void validate() const;
  double operator()(double xi1, double xi2) const;
  // Same profile with the axes exchanged.
  SpectrumProfile transposed() const;
};

const char* to_string(SpectrumProfile::Kind kind) noexcept;
SpectrumProfile::Kind parse_profile_kind(const std::string& name);

// theta0 multiplied by exp(-t lambda(xi)); t >= 0.
spectral::SpectralField evolve_linear_torus(const spectral::SpectralField& theta0,
                                            const theory::DissipationParams& params,
                                            double t);

struct NormEstimate {
  double value = 0.0;
  double error = 0.0;  // absolute, propagated from the squared integral
  long evaluations = 0;
};

// ||Lambda^s theta(t)||_{L2(R^2)} for t >= 0.  Throws QuadratureError.
NormEstimate linear_norm_quadrature(const SpectrumProfile& profile,
                                    const theory::DissipationParams& params,
                                    double s, double t,
                                    const quadrature::QuadratureSpec& spec = {});

struct DensityPoint {
  double rho = 0.0;
  double mass = 0.0;        // int_{E(rho)} |xi|^{2s} |theta0^|^2
  double error = 0.0;
  double normalized = 0.0;  // mass * rho^{-exponent}
};

// Low-frequency mass on E(rho) = {lambda(xi) <= rho}, normalized by
// rho^{((a+b)(2-p) + 2 min(a,b) s p) / (2 a b p)}.
std::vector<DensityPoint> density_condition_check(
    const SpectrumProfile& profile, const theory::DissipationParams& params,
    double s, double p, const std::vector<double>& rhos,
    const quadrature::QuadratureSpec& spec = {});

// count points from lo to hi, evenly spaced in log t.
std::vector<double> geometric_times(double lo, double hi, std::size_t count);

struct TwoSidedReport {
  theory::DissipationParams params;
  double s = 0.0;
  double p = 1.0;
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<double> errors;
  analysis::RateFit fit;
  analysis::RateVerdict verdict;
  double theory_slope = 0.0;  // negative of the exponent
  double rel_dev = 0.0;       // |fitted - theory| / |theory|
  // inf and sup over the window of norm * (1+t)^{exponent}.
  double sandwich_lo = 0.0;
  double sandwich_hi = 0.0;
  bool pass = false;

  std::string to_json() const;
  std::string to_csv() const;  // t,norm,est_error
};

// Fits the decay of ||Lambda^s theta(t)|| over the given times for a plateau
// profile against the p = 1 exponent.  Points are evaluated on up to jobs
// threads.
TwoSidedReport two_sided_bound_check(const SpectrumProfile& profile,
                                     const theory::DissipationParams& params,
                                     double s, const std::vector<double>& times,
                                     double tol = 0.02,
                                     const quadrature::QuadratureSpec& spec = {},
                                     int jobs = 1);

}  // namespace sqgad::linear
