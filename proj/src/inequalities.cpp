#include "sqgad/inequalities.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include <json.hpp>

#include "format.hpp"
#include "parallel.hpp"
#include "sqgad/error.hpp"
#include "sqgad/seed.hpp"

namespace sqgad::inequalities {

using spectral::GridSpec;
using spectral::SpectralField;
using theory::DissipationParams;

InterpolationWeights interpolation_weights(const InterpolationTriple& t) {
  for (double v : {t.delta1, t.delta2, t.eps1, t.eps2, t.gamma1, t.gamma2})
    require(std::isfinite(v) && v >= 0.0, ErrorCode::InvalidArgument,
            "interpolation exponents must be finite and >= 0");
  const double det = t.eps2 * t.gamma1 - t.eps1 * t.gamma2;
  require(det != 0.0, ErrorCode::DegenerateSystem,
          "eps2*gamma1 == eps1*gamma2: the weights are not determined");
  InterpolationWeights w;
  w.mu = (t.delta2 * t.gamma1 - t.delta1 * t.gamma2) / det;
  w.lambda = (t.eps2 * t.delta1 - t.eps1 * t.delta2) / det;
  w.valid = w.mu >= 0.0 && w.lambda >= 0.0 && w.mu + w.lambda <= 1.0;
  return w;
}

double transport_delta(const DissipationParams& params) {
  params.validate();
  return (1.0 - params.alpha * params.beta) / (params.alpha + 1.0);
}

InterpolationTriple transport_triple(const DissipationParams& params) {
  const double d = transport_delta(params);
  return {1.0, 1.0 - d, 0.0, params.beta + 1.0, params.alpha + 1.0, 0.0};
}

namespace {

double ratio_of(double lhs, double rhs) {
  if (lhs == 0.0) return 0.0;
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

void require_nonzero(const SpectralField& f) {
  require(!f.is_zero(), ErrorCode::ZeroField, "the field is identically zero");
}

}  // namespace

double check_aniso_interpolation(const SpectralField& f, const InterpolationTriple& t) {
  const InterpolationWeights w = interpolation_weights(t);
  require(w.valid, ErrorCode::InvalidArgument,
          "triple does not give weights mu, lambda >= 0 with mu + lambda <= 1");
  require_nonzero(f);
  const double lhs = spectral::mixed_norm(f, t.delta1, t.delta2);
  const double rhs = std::pow(spectral::sobolev_norm(f, 0.0), 1.0 - w.mu - w.lambda) *
                     std::pow(spectral::mixed_norm(f, t.eps1, t.eps2), w.mu) *
                     std::pow(spectral::mixed_norm(f, t.gamma1, t.gamma2), w.lambda);
  return ratio_of(lhs, rhs);
}

double check_directional_interpolation(const SpectralField& f, int axis, double gamma,
                                       double varrho) {
  require(axis == 1 || axis == 2, ErrorCode::InvalidArgument, "axis must be 1 or 2");
  require(varrho > 0.0 && gamma >= 0.0 && gamma <= varrho, ErrorCode::InvalidArgument,
          "need 0 <= gamma <= varrho and varrho > 0");
  require_nonzero(f);
  const double theta = gamma / varrho;
  const double lhs = spectral::anisotropic_norm(f, axis, gamma);
  const double rhs = std::pow(spectral::sobolev_norm(f, 0.0), 1.0 - theta) *
                     std::pow(spectral::anisotropic_norm(f, axis, varrho), theta);
  return ratio_of(lhs, rhs);
}

SymbolReport check_symbol_inequalities(const GridSpec& grid, const std::vector<double>& ls,
                                       const std::vector<double>& ks) {
  grid.validate();
  for (double l : ls)
    require(l >= 0.0 && l <= 1.0, ErrorCode::InvalidArgument, "need 0 <= l <= 1");
  for (double k : ks) require(k >= 1.0, ErrorCode::InvalidArgument, "need k >= 1");
  SymbolReport rep;
  auto account = [&](double lhs, double rhs, double& worst) {
    ++rep.checked;
    const double r = ratio_of(lhs, rhs);
    worst = std::max(worst, r);
    if (r > kConstantOneThreshold) ++rep.violations;
  };
  for (int i1 = 0; i1 < grid.n1; ++i1)
    for (int i2 = 0; i2 < grid.n2; ++i2) {
      const double a1 = std::abs(grid.wavenumber(1, i1));
      const double a2 = std::abs(grid.wavenumber(2, i2));
      const double xi = std::hypot(a1, a2);
      if (xi == 0.0) continue;
      for (int order = 0; order < 2; ++order) {
        const double xi_i = order == 0 ? a1 : a2;
        const double xi_j = order == 0 ? a2 : a1;
        for (double k : ks)
          for (double l : ls) {
            account(std::pow(xi_i, k + l) * std::pow(xi_j, 1.0 - l),
                    std::pow(xi_i, k) * xi, rep.max_first);
            account(std::pow(xi_i, k - l) * std::pow(xi_j, l),
                    std::pow(xi_i, k - 1.0) * xi, rep.max_second);
          }
      }
    }
  return rep;
}

std::string InequalityReport::to_json() const {
  nlohmann::ordered_json j;
  j["id"] = id;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params) j["params"][k] = v;
  j["samples"] = samples;
  j["sup_ratio"] = sup_ratio;
  if (threshold > 0.0)
    j["threshold"] = threshold;
  else
    j["threshold"] = nullptr;
  j["pass"] = pass;
  j["seed"] = seed;
  j["violations"] = violations;
  if (!metrics.empty()) {
    j["metrics"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : metrics) j["metrics"][k] = v;
  }
  if (!histogram.empty()) {
    j["sup_ratio_fine"] = sup_ratio_fine;
    j["refinement_change"] = refinement_change;
    j["histogram_edges"] = histogram_edges;
    j["histogram"] = histogram;
  }
  return j.dump(2);
}

namespace {

GridSpec square(int n) {
  GridSpec g;
  g.n1 = n;
  g.n2 = n;
  return g;
}

// Random field shared by the sweeps: band [1, k_hi], k_hi in [2, n/4], and
// spectral slope in [-2, 0], all drawn from the sample's own stream.
SpectralField sweep_field(std::uint64_t seed, std::string_view stream, std::size_t i,
                          int n_for_band, const GridSpec& grid) {
  std::mt19937_64 rng(derive_seed(seed, stream, i));
  std::uniform_real_distribution<double> khi(2.0, n_for_band / 4.0);
  std::uniform_real_distribution<double> slope(-2.0, 0.0);
  const double k = khi(rng);
  const double sl = slope(rng);
  return spectral::random_band_limited(rng(), grid, {1.0, k}, sl);
}

void validate_sweep(const SweepSpec& spec) {
  require(spec.samples > 0, ErrorCode::InvalidArgument, "need at least one sample");
  require(spec.n >= 16 && spec.n % 2 == 0, ErrorCode::InvalidArgument,
          "sweep grid size must be even and >= 16");
}

}  // namespace

InequalityReport sweep_aniso_interpolation(const SweepSpec& spec) {
  validate_sweep(spec);
  const GridSpec grid = square(spec.n);
  std::vector<double> ratios(spec.samples), identity(spec.samples);
  detail::parallel_for(spec.samples, spec.jobs, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(spec.seed, "aniso_triple", i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    InterpolationTriple t;
    double mu = 0.0, lambda = 0.0;
    for (;;) {
      t.eps1 = 2.0 * u(rng);
      t.eps2 = 2.0 * u(rng);
      t.gamma1 = 2.0 * u(rng);
      t.gamma2 = 2.0 * u(rng);
      mu = u(rng);
      lambda = u(rng);
      if (mu + lambda > 1.0) {
        mu = 1.0 - mu;
        lambda = 1.0 - lambda;
      }
      if (std::abs(t.eps2 * t.gamma1 - t.eps1 * t.gamma2) >= 0.05) break;
    }
    t.delta1 = mu * t.eps1 + lambda * t.gamma1;
    t.delta2 = mu * t.eps2 + lambda * t.gamma2;
    const InterpolationWeights w = interpolation_weights(t);
    identity[i] = std::max({std::abs(w.mu - mu), std::abs(w.lambda - lambda),
                            std::abs(t.delta1 - (w.mu * t.eps1 + w.lambda * t.gamma1)),
                            std::abs(t.delta2 - (w.mu * t.eps2 + w.lambda * t.gamma2))});
    if (!w.valid) {
      // Rounding pushed a boundary draw outside the simplex.
      identity[i] = std::max(identity[i], 1.0);
      ratios[i] = 0.0;
      return;
    }
    ratios[i] = check_aniso_interpolation(
        sweep_field(spec.seed, "aniso_field", i, spec.n, grid), t);
  });
  InequalityReport rep;
  rep.id = "ANISO_INTERPOLATION";
  rep.params = {{"n", spec.n}};
  rep.samples = spec.samples;
  rep.threshold = kConstantOneThreshold;
  rep.seed = spec.seed;
  double worst_identity = 0.0;
  for (std::size_t i = 0; i < spec.samples; ++i) {
    rep.sup_ratio = std::max(rep.sup_ratio, ratios[i]);
    worst_identity = std::max(worst_identity, identity[i]);
    if (ratios[i] > rep.threshold || identity[i] > 1e-12) ++rep.violations;
  }
  rep.metrics["max_identity_error"] = worst_identity;
  rep.pass = rep.violations == 0;
  return rep;
}

InequalityReport sweep_directional_interpolation(const SweepSpec& spec) {
  validate_sweep(spec);
  const GridSpec grid = square(spec.n);
  std::vector<double> ratios(spec.samples);
  detail::parallel_for(spec.samples, spec.jobs, [&](std::size_t i) {
    std::mt19937_64 rng(derive_seed(spec.seed, "directional_pair", i));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double varrho = 0.05 + 2.95 * u(rng);
    const double gamma = varrho * u(rng);
    const int axis = u(rng) < 0.5 ? 1 : 2;
    ratios[i] = check_directional_interpolation(
        sweep_field(spec.seed, "directional_field", i, spec.n, grid), axis, gamma, varrho);
  });
  InequalityReport rep;
  rep.id = "DIRECTIONAL_INTERPOLATION";
  rep.params = {{"n", spec.n}};
  rep.samples = spec.samples;
  rep.threshold = kConstantOneThreshold;
  rep.seed = spec.seed;
  for (double r : ratios) {
    rep.sup_ratio = std::max(rep.sup_ratio, r);
    if (r > rep.threshold) ++rep.violations;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

InequalityReport sweep_symbol_facts(const SweepSpec& spec) {
  validate_sweep(spec);
  std::vector<double> ls;
  for (int i = 0; i <= 10; ++i) ls.push_back(i / 10.0);
  const SymbolReport s = check_symbol_inequalities(square(spec.n), ls, {1.0, 1.5, 2.0});
  InequalityReport rep;
  rep.id = "SYMBOL_FACTS";
  rep.params = {{"n", spec.n}};
  rep.samples = s.checked;
  rep.sup_ratio = std::max(s.max_first, s.max_second);
  rep.threshold = kConstantOneThreshold;
  rep.seed = spec.seed;
  rep.violations = s.violations;
  rep.metrics["max_first"] = s.max_first;
  rep.metrics["max_second"] = s.max_second;
  rep.pass = rep.violations == 0;
  return rep;
}

const char* to_string(EmpiricalId id) noexcept {
  switch (id) {
    case EmpiricalId::Embedding: return "EMBEDDING";
    case EmpiricalId::MixedLp: return "MIXED_LP";
    case EmpiricalId::LpDirectional: return "LP_DIRECTIONAL";
  }
  return "UNKNOWN";
}

EmpiricalId parse_empirical_id(const std::string& name) {
  for (auto id : {EmpiricalId::Embedding, EmpiricalId::MixedLp, EmpiricalId::LpDirectional})
    if (name == to_string(id)) return id;
  fail(ErrorCode::InvalidArgument, "unknown inequality id '" + name + "'");
}

double embedding_exponent(double alpha, double beta) {
  return 2.0 * (alpha + beta) / (alpha + beta - 2.0 * alpha * beta);
}

double empirical_ratio(EmpiricalId id, const SpectralField& f, const EmpiricalParams& ep) {
  require_nonzero(f);
  const double a = ep.alpha, b = ep.beta;
  switch (id) {
    case EmpiricalId::Embedding: {
      require(a > 0.0 && b > 0.0 && a + b > 2.0 * a * b, ErrorCode::HypothesisViolated,
              "embedding needs alpha, beta > 0 and alpha + beta > 2 alpha beta");
      const double lhs = spectral::lp_norm(f, embedding_exponent(a, b));
      const double rhs = std::pow(spectral::anisotropic_norm(f, 1, a), b / (a + b)) *
                         std::pow(spectral::anisotropic_norm(f, 2, b), a / (a + b));
      return ratio_of(lhs, rhs);
    }
    case EmpiricalId::MixedLp: {
      require(a > 0.0 && b > 0.0 && ep.p >= 1.0 && ep.p < 2.0,
              ErrorCode::HypothesisViolated, "mixed bound needs alpha, beta > 0, p in [1,2)");
      const double c = 1.0 / ep.p - 0.5;
      const double d = (a + b) * c + a * b;
      const double lhs = spectral::sobolev_norm(f, 0.0);
      const double rhs = std::pow(spectral::lp_norm(f, ep.p), 1.0 - (a + b) * c / d) *
                         std::pow(spectral::anisotropic_norm(f, 1, a), b * c / d) *
                         std::pow(spectral::anisotropic_norm(f, 2, b), a * c / d);
      return ratio_of(lhs, rhs);
    }
    case EmpiricalId::LpDirectional: {
      require(ep.axis == 1 || ep.axis == 2, ErrorCode::HypothesisViolated,
              "axis must be 1 or 2");
      require(ep.sigma > 0.0 && ep.sigma < ep.delta, ErrorCode::HypothesisViolated,
              "directional bound needs 0 < sigma < delta");
      require(ep.p >= 1.0 && ep.p < ep.q, ErrorCode::HypothesisViolated,
              "directional bound needs 1 <= p < q");
      const double th = ep.sigma / ep.delta;
      const double r = 1.0 / ((1.0 / ep.q) * (1.0 - th) + (1.0 / ep.p) * th);
      using spectral::MultiplierSymbol;
      const auto ds = spectral::apply_multiplier(f, MultiplierSymbol::axis_power(ep.axis, ep.sigma));
      const auto dd = spectral::apply_multiplier(f, MultiplierSymbol::axis_power(ep.axis, ep.delta));
      const double lhs = spectral::lp_norm(ds, r);
      const double rhs = std::pow(spectral::lp_norm(f, ep.q), 1.0 - th) *
                         std::pow(spectral::lp_norm(dd, ep.p), th);
      return ratio_of(lhs, rhs);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown inequality id");
}

InequalityReport empirical_ratio_report(EmpiricalId id, const EmpiricalParams& params,
                                        const SweepSpec& spec) {
  validate_sweep(spec);
  const GridSpec coarse = square(spec.n), fine = square(2 * spec.n);
  const std::string stream = std::string("empirical_") + to_string(id);
  std::vector<double> rc(spec.samples), rf(spec.samples);
  detail::parallel_for(spec.samples, spec.jobs, [&](std::size_t i) {
    rc[i] = empirical_ratio(id, sweep_field(spec.seed, stream, i, spec.n, coarse), params);
    rf[i] = empirical_ratio(id, sweep_field(spec.seed, stream, i, spec.n, fine), params);
  });
  InequalityReport rep;
  rep.id = to_string(id);
  rep.params = {{"alpha", params.alpha}, {"beta", params.beta}, {"n", spec.n}};
  if (id != EmpiricalId::Embedding) rep.params["p"] = params.p;
  if (id == EmpiricalId::Embedding)
    rep.params["r"] = embedding_exponent(params.alpha, params.beta);
  if (id == EmpiricalId::LpDirectional) {
    rep.params.erase("alpha");
    rep.params.erase("beta");
    rep.params["q"] = params.q;
    rep.params["sigma"] = params.sigma;
    rep.params["delta"] = params.delta;
    rep.params["axis"] = params.axis;
  }
  rep.samples = spec.samples;
  rep.seed = spec.seed;
  rep.sup_ratio = *std::max_element(rc.begin(), rc.end());
  rep.sup_ratio_fine = *std::max_element(rf.begin(), rf.end());
  rep.refinement_change = std::abs(rep.sup_ratio_fine / rep.sup_ratio - 1.0);
  const double lo = *std::min_element(rc.begin(), rc.end());
  const int bins = 10;
  const double width = (rep.sup_ratio - lo) / bins;
  for (int b = 0; b <= bins; ++b) rep.histogram_edges.push_back(lo + b * width);
  rep.histogram.assign(bins, 0);
  for (double r : rc) {
    int b = width > 0.0 ? static_cast<int>((r - lo) / width) : 0;
    rep.histogram[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
  }
  rep.pass = std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0.0 &&
             std::isfinite(rep.sup_ratio_fine);
  return rep;
}

const char* to_string(Moment m) noexcept {
  switch (m) {
    case Moment::Area: return "AREA";
    case Moment::Xi1Sq: return "XI1_SQ";
    case Moment::Xi2Sq: return "XI2_SQ";
    case Moment::IsoBound: return "ISO_BOUND";
  }
  return "UNKNOWN";
}

Moment parse_moment(const std::string& name) {
  for (auto m : {Moment::Area, Moment::Xi1Sq, Moment::Xi2Sq, Moment::IsoBound})
    if (name == to_string(m)) return m;
  fail(ErrorCode::InvalidArgument, "unknown moment '" + name + "'");
}

double moment_exponent(const DissipationParams& params, Moment m) {
  const double a = params.alpha, b = params.beta;
  switch (m) {
    case Moment::Area: return (a + b) / (2.0 * a * b);
    case Moment::Xi1Sq: return (a + 3.0 * b) / (2.0 * a * b);
    case Moment::Xi2Sq: return (3.0 * a + b) / (2.0 * a * b);
    case Moment::IsoBound: break;
  }
  fail(ErrorCode::InvalidArgument, "ISO_BOUND is not a single power of rho");
}

double splitting_moment(const DissipationParams& params, double rho, Moment m, double s) {
  params.validate();
  require(rho > 0.0 && std::isfinite(rho), ErrorCode::InvalidArgument, "rho must be > 0");
  const double a = params.alpha, b = params.beta;
  switch (m) {
    case Moment::Area:
      return (2.0 / b) * std::beta(1.0 / (2.0 * b), 1.0 / (2.0 * a) + 1.0) *
             std::pow(rho, moment_exponent(params, m));
    case Moment::Xi1Sq:
      return (2.0 / (3.0 * b)) * std::beta(1.0 / (2.0 * b), 3.0 / (2.0 * a) + 1.0) *
             std::pow(rho, moment_exponent(params, m));
    case Moment::Xi2Sq:
      return splitting_moment(params.swapped(), rho, Moment::Xi1Sq);
    case Moment::IsoBound: {
      require(s >= 0.0, ErrorCode::InvalidArgument, "Sobolev order must be >= 0");
      const double c = std::max(1.0, std::pow(2.0, s - 1.0));
      return c * (std::pow(rho, s / a) + std::pow(rho, s / b)) *
             splitting_moment(params, rho, Moment::Area);
    }
  }
  fail(ErrorCode::InvalidArgument, "unknown moment");
}

MomentEstimate splitting_moment_quadrature(const DissipationParams& params, double rho,
                                           Moment m, double s,
                                           const quadrature::QuadratureSpec& spec) {
  params.validate();
  require(rho > 0.0 && std::isfinite(rho), ErrorCode::InvalidArgument, "rho must be > 0");
  const double a = params.alpha, b = params.beta;
  const double x_end = std::pow(rho, 1.0 / (2.0 * a));
  quadrature::Region2 region;
  region.outer_breaks = {0.0, 0.5 * x_end, x_end};
  region.lo = [](double) { return 0.0; };
  region.hi = [=](double x) {
    return std::pow(std::max(0.0, rho - std::pow(x, 2.0 * a)), 1.0 / (2.0 * b));
  };
  auto weight = [m, s](double x, double y) {
    switch (m) {
      case Moment::Area: return 1.0;
      case Moment::Xi1Sq: return x * x;
      case Moment::Xi2Sq: return y * y;
      case Moment::IsoBound: return s == 0.0 ? 1.0 : std::pow(x * x + y * y, s);
    }
    return 0.0;
  };
  const auto r = quadrature::integrate_2d(weight, region, spec);
  return {4.0 * r.value, 4.0 * r.error};
}

void OdeComparison::validate() const {
  require(std::isfinite(x0) && x0 >= 0.0, ErrorCode::InvalidArgument, "need X(0) >= 0");
  require(std::isfinite(nu) && nu > 0.0, ErrorCode::InvalidArgument, "need nu > 0");
  require(std::isfinite(k) && k > 1.0, ErrorCode::InvalidArgument, "need k > 1");
}

double ode_comparison_bound(const OdeComparison& c, double t) {
  c.validate();
  require(t >= 0.0, ErrorCode::InvalidArgument, "need t >= 0");
  if (c.x0 == 0.0) return 0.0;
  return std::pow(std::pow(c.x0, 1.0 - c.k) + (c.k - 1.0) * c.nu * t, -1.0 / (c.k - 1.0));
}

namespace {

template <class Rhs>
double rk4(double x, double t, double h, Rhs&& f) {
  const double k1 = f(t, x);
  const double k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
  const double k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
  const double k4 = f(t + h, x + h * k3);
  return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

OdeReport ode_comparison_verify(const OdeComparison& c, double dt, double t_end,
                                std::size_t perturbed_runs, std::uint64_t seed) {
  c.validate();
  require(dt > 0.0 && t_end > 0.0 && dt <= t_end, ErrorCode::InvalidArgument,
          "need 0 < dt <= t_end");
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  auto power = [&](double x) { return std::pow(std::max(x, 0.0), c.k); };

  OdeReport rep;
  rep.steps = steps;
  rep.perturbed_runs = perturbed_runs;
  double x = c.x0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double t = h * static_cast<double>(i);
    x = rk4(x, t - h, h, [&](double, double v) { return -c.nu * power(v); });
    const double bound = ode_comparison_bound(c, t);
    if (bound > 0.0) {
      rep.max_rel_dev = std::max(rep.max_rel_dev, std::abs(x / bound - 1.0));
      rep.max_ratio = std::max(rep.max_ratio, x / bound);
    }
  }
  const double equality_ratio = rep.max_ratio;
  rep.max_ratio = 0.0;
  for (std::size_t run = 0; run < perturbed_runs; ++run) {
    std::mt19937_64 rng(derive_seed(seed, "ode_forcing", run));
    std::uniform_real_distribution<double> amp(0.0, 2.0), freq(0.1, 5.0),
        phase(0.0, 2.0 * M_PI);
    std::array<double, 3> a{}, w{}, p{};
    for (int j = 0; j < 3; ++j) {
      a[j] = amp(rng);
      w[j] = freq(rng);
      p[j] = phase(rng);
    }
    auto g = [&](double t) {
      double sum = 0.0;
      for (int j = 0; j < 3; ++j) sum += a[j] * (1.0 + std::sin(w[j] * t + p[j]));
      return sum;
    };
    double y = c.x0;
    for (std::size_t i = 1; i <= steps; ++i) {
      const double t = h * static_cast<double>(i);
      y = rk4(y, t - h, h, [&](double s, double v) { return -c.nu * power(v) - g(s) * v; });
      const double bound = ode_comparison_bound(c, t);
      const double r = bound > 0.0 ? y / bound : (y > 0.0 ? INFINITY : 0.0);
      rep.max_ratio = std::max(rep.max_ratio, r);
    }
  }
  rep.saturates = rep.max_rel_dev <= 1e-8;
  rep.below = rep.max_ratio <= 1.0 + 1e-8 && equality_ratio <= 1.0 + 1e-8;
  return rep;
}

ConvolutionReport time_convolution_ratio(double vartheta, double varrho,
                                         const std::vector<double>& times) {
  require(vartheta > 0.0 && varrho > 0.0, ErrorCode::InvalidArgument,
          "need vartheta > 0 and varrho > 0");
  ConvolutionReport rep;
  rep.vartheta = vartheta;
  rep.varrho = varrho;
  rep.times = times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    require(t >= 0.0 && (i == 0 || t > times[i - 1]), ErrorCode::InvalidArgument,
            "times must be ascending and >= 0");
    double v = 0.0;
    if (t > 0.0) {
      // Integrate in u = t - s so the kernel peak sits at the left end.
      const auto r = quadrature::integrate(
          [&](double u) { return std::exp(-vartheta * u) * std::pow(1.0 + t - u, -varrho); },
          quadrature::geometric_breaks(0.0, t, 1.0 / vartheta), {1e-12, 0.0, 4000, true});
      v = r.value * std::pow(1.0 + t, varrho);
    }
    rep.values.push_back(v);
  }
  std::size_t arg = 0;
  for (std::size_t i = 0; i < rep.values.size(); ++i)
    if (rep.values[i] > rep.values[arg]) arg = i;
  rep.sup = rep.values.empty() ? 0.0 : rep.values[arg];
  rep.knee = rep.times.empty() ? 0.0 : rep.times[arg];
  rep.nonincreasing_after_knee = true;
  for (std::size_t i = arg + 1; i < rep.values.size(); ++i)
    if (rep.values[i] > rep.values[i - 1] * (1.0 + 1e-9)) rep.nonincreasing_after_knee = false;
  rep.pass = std::isfinite(rep.sup) && rep.nonincreasing_after_knee;
  return rep;
}

}  // namespace sqgad::inequalities
