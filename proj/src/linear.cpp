#include "sqgad/linear.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "format.hpp"
#include "parallel.hpp"
#include "sqgad/error.hpp"

namespace sqgad::linear {

using quadrature::QuadratureSpec;
using quadrature::Region2;
using theory::DissipationParams;

SpectrumProfile SpectrumProfile::plateau(double r) {
  SpectrumProfile p;
  p.kind = Kind::Plateau;
  p.r = r;
  return p;
}

SpectrumProfile SpectrumProfile::smooth_bump(double sigma) {
  SpectrumProfile p;
  p.kind = Kind::SmoothBump;
  p.sigma = sigma;
  return p;
}

SpectrumProfile SpectrumProfile::axis_anisotropic(double r1, double r2) {
  SpectrumProfile p;
  p.kind = Kind::AxisAnisotropic;
  p.r1 = r1;
  p.r2 = r2;
  return p;
}

SpectrumProfile SpectrumProfile::annulus(double r_in, double r_out) {
  SpectrumProfile p;
  p.kind = Kind::Annulus;
  p.r_in = r_in;
  p.r_out = r_out;
  return p;
}

void SpectrumProfile::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  switch (kind) {
    case Kind::Plateau:
      require(positive(r), ErrorCode::InvalidArgument, "plateau radius must be > 0");
      break;
    case Kind::SmoothBump:
      require(positive(sigma), ErrorCode::InvalidArgument, "bump width must be > 0");
      break;
    case Kind::AxisAnisotropic:
      require(positive(r1) && positive(r2), ErrorCode::InvalidArgument,
              "plateau radii must be > 0");
      break;
    case Kind::Annulus:
      require(r_in >= 0.0 && positive(r_out) && r_in < r_out, ErrorCode::InvalidArgument,
              "annulus needs 0 <= r_in < r_out");
      break;
  }
}

double SpectrumProfile::operator()(double xi1, double xi2) const {
  const double k2 = xi1 * xi1 + xi2 * xi2;
  switch (kind) {
    case Kind::Plateau: return k2 <= r * r ? 1.0 : 0.0;
    case Kind::SmoothBump: return std::exp(-k2 / (2.0 * sigma * sigma));
    case Kind::AxisAnisotropic:
      return std::abs(xi1) <= r1 && std::abs(xi2) <= r2 ? 1.0 : 0.0;
    case Kind::Annulus: return k2 >= r_in * r_in && k2 <= r_out * r_out ? 1.0 : 0.0;
  }
  return 0.0;
}

SpectrumProfile SpectrumProfile::transposed() const {
  SpectrumProfile p = *this;
  std::swap(p.r1, p.r2);
  return p;
}

const char* to_string(SpectrumProfile::Kind kind) noexcept {
  switch (kind) {
    case SpectrumProfile::Kind::Plateau: return "PLATEAU";
    case SpectrumProfile::Kind::SmoothBump: return "SMOOTH_BUMP";
    case SpectrumProfile::Kind::AxisAnisotropic: return "AXIS_ANISOTROPIC";
    case SpectrumProfile::Kind::Annulus: return "ANNULUS";
  }
  return "UNKNOWN";
}

SpectrumProfile::Kind parse_profile_kind(const std::string& name) {
  for (auto k : {SpectrumProfile::Kind::Plateau, SpectrumProfile::Kind::SmoothBump,
                 SpectrumProfile::Kind::AxisAnisotropic, SpectrumProfile::Kind::Annulus})
    if (name == to_string(k)) return k;
  fail(ErrorCode::InvalidArgument, "unknown profile '" + name + "'");
}

spectral::SpectralField evolve_linear_torus(const spectral::SpectralField& theta0,
                                            const DissipationParams& params, double t) {
  params.validate();
  require(t >= 0.0, ErrorCode::InvalidArgument, "time must be >= 0");
  return spectral::apply_multiplier(theta0,
                                    spectral::MultiplierSymbol::heat_kernel(params, t));
}

namespace {

// The bump is cut where |theta0^|^2 = exp(-60).
constexpr double kBumpCut = 7.745966692414834;  // sqrt(60)

// First-quadrant support written as an outer variable x with
// xi_1 = map(x), d xi_1 = jac(x) dx, and xi_2 in [lo(x), hi(x)].
struct Quadrant {
  std::vector<double> outer_breaks;
  std::function<double(double)> map;
  std::function<double(double)> jac;
  std::function<double(double)> lo;
  std::function<double(double)> hi;
};

std::vector<double> merge(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// Disk of radius R through xi_1 = R sin x, which keeps the edge smooth.
Quadrant disk(double radius, const std::vector<double>& xi1_breaks) {
  Quadrant q;
  for (double b : xi1_breaks) q.outer_breaks.push_back(std::asin(std::min(1.0, b / radius)));
  q.outer_breaks = merge(q.outer_breaks, {0.0, M_PI / 2});
  q.map = [radius](double x) { return radius * std::sin(x); };
  q.jac = [radius](double x) { return radius * std::cos(x); };
  q.lo = [](double) { return 0.0; };
  q.hi = [radius](double x) { return radius * std::cos(x); };
  return q;
}

Quadrant support_quadrant(const SpectrumProfile& prof, double scale1) {
  using Kind = SpectrumProfile::Kind;
  switch (prof.kind) {
    case Kind::Plateau:
      return disk(prof.r, quadrature::geometric_breaks(0.0, prof.r, scale1));
    case Kind::SmoothBump: {
      const double cut = kBumpCut * prof.sigma;
      return disk(cut, merge(quadrature::geometric_breaks(0.0, cut, scale1),
                             quadrature::geometric_breaks(0.0, cut, prof.sigma)));
    }
    case Kind::AxisAnisotropic: {
      Quadrant q;
      q.outer_breaks = quadrature::geometric_breaks(0.0, prof.r1, scale1);
      q.map = [](double x) { return x; };
      q.jac = [](double) { return 1.0; };
      q.lo = [](double) { return 0.0; };
      const double r2 = prof.r2;
      q.hi = [r2](double) { return r2; };
      return q;
    }
    case Kind::Annulus: {
      Quadrant q = disk(prof.r_out, merge(quadrature::geometric_breaks(0.0, prof.r_out, scale1),
                                          {prof.r_in}));
      const double rin = prof.r_in, rout = prof.r_out;
      q.lo = [rin, rout](double x) {
        const double xi1 = rout * std::sin(x);
        return std::sqrt(std::max(0.0, rin * rin - xi1 * xi1));
      };
      return q;
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown profile kind");
}

double kernel_scale(double t, double gamma) {
  if (t <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(1.0 / (2.0 * t), 1.0 / (2.0 * gamma));
}

}  // namespace

NormEstimate linear_norm_quadrature(const SpectrumProfile& profile,
                                    const DissipationParams& params, double s, double t,
                                    const QuadratureSpec& spec) {
  profile.validate();
  params.validate();
  spec.validate();
  require(s >= 0.0, ErrorCode::InvalidArgument, "Sobolev order must be >= 0");
  require(t >= 0.0 && std::isfinite(t), ErrorCode::InvalidArgument, "time must be >= 0");

  const double c1 = kernel_scale(t, params.alpha);
  const double c2 = kernel_scale(t, params.beta);
  const Quadrant q = support_quadrant(profile, c1);

  Region2 region;
  region.outer_breaks = q.outer_breaks;
  region.lo = q.lo;
  region.hi = q.hi;
  region.inner_breaks = [&](double x) {
    return quadrature::geometric_breaks(q.lo(x), q.hi(x), c2);
  };

  auto integrand_for = [&](double sx, double sy) {
    return [&, sx, sy](double x, double xi2) {
      const double xi1 = q.map(x);
      const double a = sx * xi1, b = sy * xi2;
      const double k2 = a * a + b * b;
      const double weight = s == 0.0 ? 1.0 : std::pow(k2, s);
      const double amp = profile(a, b);
      return weight * std::exp(-2.0 * t * params.symbol(a, b)) * amp * amp * q.jac(x);
    };
  };

  double total = 0.0, error = 0.0;
  long evaluations = 0;
  if (spec.symmetry_reduction) {
    const auto r = quadrature::integrate_2d(integrand_for(1.0, 1.0), region, spec);
    total = 4.0 * r.value;
    error = 4.0 * r.error;
    evaluations = r.evaluations;
  } else {
    for (double sx : {1.0, -1.0})
      for (double sy : {1.0, -1.0}) {
        const auto r = quadrature::integrate_2d(integrand_for(sx, sy), region, spec);
        total += r.value;
        error += r.error;
        evaluations += r.evaluations;
      }
  }
  NormEstimate out;
  out.value = std::sqrt(std::max(total, 0.0));
  out.error = out.value > 0.0 ? error / (2.0 * out.value) : std::sqrt(error);
  out.evaluations = evaluations;
  return out;
}

std::vector<DensityPoint> density_condition_check(const SpectrumProfile& profile,
                                                  const DissipationParams& params,
                                                  double s, double p,
                                                  const std::vector<double>& rhos,
                                                  const QuadratureSpec& spec) {
  profile.validate();
  params.validate();
  theory::DecayQuery{s, p}.validate();
  const double a = params.alpha, b = params.beta;
  const double exponent =
      ((a + b) * (2.0 - p) + 2.0 * std::min(a, b) * s * p) / (2.0 * a * b * p);

  // Support limits of the profile in the first quadrant.
  using Kind = SpectrumProfile::Kind;
  double x_max = std::numeric_limits<double>::infinity();
  std::function<double(double)> supp_lo = [](double) { return 0.0; };
  std::function<double(double)> supp_hi = [](double) {
    return std::numeric_limits<double>::infinity();
  };
  std::vector<double> extra_breaks;
  switch (profile.kind) {
    case Kind::Plateau:
      x_max = profile.r;
      supp_hi = [r = profile.r](double x) { return std::sqrt(std::max(0.0, r * r - x * x)); };
      break;
    case Kind::SmoothBump:
      break;
    case Kind::AxisAnisotropic:
      x_max = profile.r1;
      supp_hi = [r2 = profile.r2](double) { return r2; };
      break;
    case Kind::Annulus:
      x_max = profile.r_out;
      supp_hi = [r = profile.r_out](double x) {
        return std::sqrt(std::max(0.0, r * r - x * x));
      };
      supp_lo = [r = profile.r_in](double x) {
        return std::sqrt(std::max(0.0, r * r - x * x));
      };
      extra_breaks.push_back(profile.r_in);
      break;
  }

  std::vector<DensityPoint> out;
  for (double rho : rhos) {
    require(rho > 0.0 && std::isfinite(rho), ErrorCode::InvalidArgument,
            "rho must be > 0");
    const double x_end = std::min(std::pow(rho, 1.0 / (2.0 * a)), x_max);
    auto e_hi = [rho, a, b](double x) {
      return std::pow(std::max(0.0, rho - std::pow(x, 2.0 * a)), 1.0 / (2.0 * b));
    };
    Region2 region;
    region.outer_breaks = {0.0};
    for (double e : extra_breaks)
      if (e > 0.0 && e < x_end) region.outer_breaks.push_back(e);
    region.outer_breaks.push_back(x_end);
    region.lo = supp_lo;
    region.hi = [&](double x) { return std::min(e_hi(x), supp_hi(x)); };
    DensityPoint pt;
    pt.rho = rho;
    if (x_end > 0.0) {
      const auto r = quadrature::integrate_2d(
          [&](double xi1, double xi2) {
            const double k2 = xi1 * xi1 + xi2 * xi2;
            const double amp = profile(xi1, xi2);
            return (s == 0.0 ? 1.0 : std::pow(k2, s)) * amp * amp;
          },
          region, spec);
      pt.mass = 4.0 * r.value;
      pt.error = 4.0 * r.error;
    }
    pt.normalized = pt.mass * std::pow(rho, -exponent);
    out.push_back(pt);
  }
  return out;
}

std::vector<double> geometric_times(double lo, double hi, std::size_t count) {
  require(lo > 0.0 && hi > lo && count >= 2, ErrorCode::InvalidArgument,
          "need 0 < lo < hi and at least two points");
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo * std::exp(step * static_cast<double>(i));
  out.front() = lo;
  out.back() = hi;
  return out;
}

TwoSidedReport two_sided_bound_check(const SpectrumProfile& profile,
                                     const DissipationParams& params, double s,
                                     const std::vector<double>& times, double tol,
                                     const QuadratureSpec& spec, int jobs) {
  require(profile.kind == SpectrumProfile::Kind::Plateau, ErrorCode::InvalidArgument,
          "two-sided check needs a PLATEAU profile");
  params.validate();
  TwoSidedReport rep;
  rep.params = params;
  rep.s = s;
  rep.p = 1.0;
  rep.times = times;
  rep.norms.assign(times.size(), 0.0);
  rep.errors.assign(times.size(), 0.0);
  detail::parallel_for(times.size(), jobs, [&](std::size_t i) {
    const NormEstimate e = linear_norm_quadrature(profile, params, s, times[i], spec);
    rep.norms[i] = e.value;
    rep.errors[i] = e.error;
  });

  const double exponent = theory::decay_exponent(params, {s, 1.0});
  analysis::DecaySeries series{times, rep.norms, {"hs", s, 1.0, "quadrature"}};
  rep.fit = analysis::fit_decay_rate(series);
  rep.verdict = analysis::compare_to_theory(rep.fit, exponent, tol);
  rep.theory_slope = -exponent;
  rep.rel_dev = std::abs(rep.fit.slope - rep.theory_slope) / std::abs(rep.theory_slope);
  rep.sandwich_lo = std::numeric_limits<double>::infinity();
  rep.sandwich_hi = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double v = rep.norms[i] * std::pow(1.0 + times[i], exponent);
    rep.sandwich_lo = std::min(rep.sandwich_lo, v);
    rep.sandwich_hi = std::max(rep.sandwich_hi, v);
  }
  const bool sandwich_ok = rep.sandwich_lo > 0.0 && std::isfinite(rep.sandwich_hi);
  rep.pass = rep.verdict.pass && sandwich_ok;
  return rep;
}

std::string TwoSidedReport::to_json() const {
  nlohmann::ordered_json j;
  j["alpha"] = params.alpha;
  j["beta"] = params.beta;
  j["s"] = s;
  j["p"] = p;
  j["fitted_slope"] = fit.slope;
  j["theory_slope"] = theory_slope;
  j["rel_dev"] = rel_dev;
  j["window"] = {fit.window.t_lo, fit.window.t_hi};
  j["local_drift"] = fit.drift();
  j["residual_rms"] = fit.residual_rms;
  j["sandwich_lo"] = sandwich_lo;
  j["sandwich_hi"] = sandwich_hi;
  j["tol"] = verdict.tol;
  j["pass"] = pass;
  return j.dump(2);
}

std::string TwoSidedReport::to_csv() const {
  return detail::csv({"t", "norm", "est_error"}, {times, norms, errors});
}

}  // namespace sqgad::linear
