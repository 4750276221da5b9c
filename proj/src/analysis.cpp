#include "sqgad/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "format.hpp"
#include "sqgad/error.hpp"

namespace sqgad::analysis {

std::string SeriesLabel::to_string() const {
  return norm + "(s=" + detail::format_label(s) + ",p=" + detail::format_label(p) +
         "," + source + ")";
}

void DecaySeries::validate() const {
  require(times.size() == values.size(), ErrorCode::InvalidArgument,
          "times and values differ in length");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(std::isfinite(times[i]) && times[i] >= 0.0, ErrorCode::InvalidArgument,
            "series times must be finite and >= 0");
    require(i == 0 || times[i] > times[i - 1], ErrorCode::InvalidArgument,
            "series times must be strictly ascending");
  }
}

DecaySeries DecaySeries::truncated() const {
  DecaySeries out{{}, {}, label};
  for (std::size_t i = 0; i < times.size() && values[i] > 0.0; ++i) {
    out.times.push_back(times[i]);
    out.values.push_back(values[i]);
  }
  return out;
}

double RateFit::drift() const {
  if (local_slopes.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(local_slopes.begin(), local_slopes.end());
  return *hi - *lo;
}

RateFit fit_decay_rate(const DecaySeries& series, const Window& window) {
  series.validate();
  std::vector<double> x, y, t;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double ti = series.times[i];
    if (ti < window.t_lo || ti > window.t_hi) continue;
    const double v = series.values[i];
    require(std::isfinite(v) && v > 0.0, ErrorCode::NonPositiveValue,
            "series value at t=" + detail::format_double(ti) + " is not positive");
    t.push_back(ti);
    x.push_back(std::log1p(ti));
    y.push_back(std::log(v));
  }
  require(x.size() >= 8, ErrorCode::InsufficientSamples,
          "need at least 8 samples in the fit window, have " + std::to_string(x.size()));

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  RateFit fit;
  fit.label = series.label;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.samples = x.size();
  fit.window = {t.front(), t.back()};
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  const std::size_t m = x.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == m ? m - 1 : i + 1;
    fit.local_slopes.push_back((y[b] - y[a]) / (x[b] - x[a]));
  }
  return fit;
}

RateVerdict compare_to_theory(const RateFit& fit, double theory_exponent,
                              double rel_tol) {
  RateVerdict v;
  v.label = fit.label;
  v.slope = fit.slope;
  v.theory = theory_exponent;
  v.tol = rel_tol;
  v.window = fit.window;
  v.residual_rms = fit.residual_rms;
  const double scale = std::max(theory_exponent, 0.1);
  v.deviation = std::abs(-fit.slope - theory_exponent);
  v.drift = fit.drift();
  v.pass = v.deviation <= rel_tol * scale && v.drift <= 2.0 * rel_tol * scale;
  return v;
}

std::string RateVerdict::to_json() const {
  nlohmann::ordered_json j;
  j["label"] = label.to_string();
  j["slope"] = slope;
  j["theory"] = theory;
  j["tol"] = tol;
  j["pass"] = pass;
  j["window"] = {window.t_lo, window.t_hi};
  j["residual_rms"] = residual_rms;
  j["deviation"] = deviation;
  j["drift"] = drift;
  return j.dump(2);
}

DecaySeries parse_series_csv(const std::string& text, const SeriesLabel& label) {
  DecaySeries out;
  out.label = label;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::InvalidArgument,
            "line " + std::to_string(lineno) + ": expected t,value");
    try {
      const std::string a = line.substr(0, comma);
      std::string b = line.substr(comma + 1);
      const auto next = b.find(',');
      if (next != std::string::npos) b = b.substr(0, next);
      const double t = std::stod(a);
      const double v = std::stod(b);
      out.times.push_back(t);
      out.values.push_back(v);
    } catch (const std::logic_error&) {
      fail(ErrorCode::InvalidArgument,
           "line " + std::to_string(lineno) + ": cannot parse '" + line + "'");
    }
  }
  out.validate();
  return out;
}

DecaySeries read_series_csv(const std::string& path, const SeriesLabel& label) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_series_csv(buf.str(), label);
}

}  // namespace sqgad::analysis
