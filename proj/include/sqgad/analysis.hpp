#pragma once

// Power-law decay fits in the (1+t)^{-E} normal form and verdicts against a
// theoretical exponent.

#include <limits>
#include <string>
#include <vector>

namespace sqgad::analysis {

struct SeriesLabel {
  std::string norm = "l2";       // l2, hs, lp, w_l2, ...
  double s = 0.0;
  double p = 2.0;
  std::string source = "torus";  // torus or quadrature

  std::string to_string() const;
};

struct DecaySeries {
  std::vector<double> times;   // strictly ascending, >= 0
  std::vector<double> values;  // > 0
  SeriesLabel label;

  void validate() const;
  // Copy that stops at the first value <= 0.
  DecaySeries truncated() const;
};

struct Window {
  double t_lo = 0.0;
  double t_hi = std::numeric_limits<double>::infinity();
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  Window window;  // times actually used
  double residual_rms = 0.0;
  std::vector<double> local_slopes;
  std::size_t samples = 0;
  SeriesLabel label;

  double drift() const;  // max - min local slope
};

// Least squares line through (log(1+t), log v) over samples inside the window.
// InsufficientSamples below 8 samples, NonPositiveValue on v <= 0.
RateFit fit_decay_rate(const DecaySeries& series, const Window& window = {});

struct RateVerdict {
  SeriesLabel label;
  double slope = 0.0;
  double theory = 0.0;
  double tol = 0.0;
  double deviation = 0.0;  // |(-slope) - theory|
  double drift = 0.0;      // local slope spread over the window
  Window window;
  double residual_rms = 0.0;
  bool pass = false;

  std::string to_json() const;
};

// Pass iff |(-slope) - theory| <= tol * max(theory, 0.1) and the local slope
// spread is at most 2 * tol * max(theory, 0.1).
RateVerdict compare_to_theory(const RateFit& fit, double theory_exponent,
                              double rel_tol);

// Reads a two-column CSV (t,value) with one header line.
DecaySeries read_series_csv(const std::string& path, const SeriesLabel& label = {});
DecaySeries parse_series_csv(const std::string& text, const SeriesLabel& label = {});

}  // namespace sqgad::analysis
