#include "sqgad/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "format.hpp"
#include "sqgad/error.hpp"

namespace sqgad::solver {

using spectral::Complex;
using spectral::GridSpec;
using spectral::SpectralField;

const char* to_string(Scheme scheme) noexcept {
  return scheme == Scheme::IfRk4 ? "IF_RK4" : "IF_EULER";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "IF_RK4" || name == "if_rk4" || name == "rk4") return Scheme::IfRk4;
  if (name == "IF_EULER" || name == "if_euler" || name == "euler") return Scheme::IfEuler;
  fail(ErrorCode::InvalidArgument, "unknown scheme '" + name + "'");
}

void SolverConfig::validate() const {
  params.validate();
  grid.validate();
  require(std::isfinite(dt) && dt > 0.0, ErrorCode::InvalidArgument, "dt must be > 0");
  require(std::isfinite(t_end) && t_end > 0.0, ErrorCode::InvalidArgument,
          "t_end must be > 0");
  require(dt <= t_end, ErrorCode::InvalidArgument, "dt must not exceed t_end");
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    require(sample_times[i] >= 0.0 && sample_times[i] <= t_end,
            ErrorCode::InvalidArgument, "sample times must lie in [0, t_end]");
    require(i == 0 || sample_times[i] > sample_times[i - 1],
            ErrorCode::InvalidArgument, "sample times must be strictly ascending");
  }
  for (double p : lp_exponents)
    require(p >= 1.0, ErrorCode::InvalidArgument, "Lebesgue exponents must be >= 1");
  for (double s : sobolev_orders)
    require(s >= 0.0, ErrorCode::InvalidArgument, "Sobolev orders must be >= 0");
  require(cfl > 0.0 && cfl_interval > 0, ErrorCode::InvalidArgument,
          "CFL number and refresh interval must be positive");
}

std::vector<double> uniform_samples(double t_end, std::size_t count) {
  require(count >= 2, ErrorCode::InvalidArgument, "need at least two samples");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = t_end * static_cast<double>(i) / static_cast<double>(count - 1);
  out.back() = t_end;
  return out;
}

SpectralField nonlinear_term(const SpectralField& theta) {
  const GridSpec& g = theta.grid();
  const SpectralField truncated = spectral::dealias(theta);
  const auto velocity = spectral::riesz_velocity(truncated);
  const auto u1 = spectral::to_physical(velocity.u1);
  const auto u2 = spectral::to_physical(velocity.u2);
  const auto d1 = spectral::to_physical(spectral::derivative(truncated, 1));
  const auto d2 = spectral::to_physical(spectral::derivative(truncated, 2));
  spectral::PhysicalField w{g, std::vector<double>(g.size())};
  for (std::size_t j = 0; j < w.values.size(); ++j)
    w.values[j] = -(u1.values[j] * d1.values[j] + u2.values[j] * d2.values[j]);
  return spectral::dealias(spectral::to_spectral(w));
}

namespace {

std::vector<double> symbol_table(const GridSpec& g,
                                 const theory::DissipationParams& params) {
  std::vector<double> lam(g.size());
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      lam[static_cast<std::size_t>(i1) * g.n2 + i2] =
          params.symbol(g.wavenumber(1, i1), g.wavenumber(2, i2));
  return lam;
}

// Integrating-factor stepping with the symbol table computed once.
class Stepper {
 public:
  explicit Stepper(const SolverConfig& cfg)
      : cfg_(cfg), lambda_(symbol_table(cfg.grid, cfg.params)) {}

  const std::vector<double>& lambda() const { return lambda_; }

  SpectralField advance(const SpectralField& theta, double h) const {
    const std::size_t n = lambda_.size();
    std::vector<double> e(n), e2(n);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = std::exp(-lambda_[i] * h);
      e2[i] = std::exp(-0.5 * lambda_[i] * h);
    }
    SpectralField out(cfg_.grid);
    const auto th = theta.coeffs();
    auto o = out.coeffs();
    if (!cfg_.nonlinear) {
      for (std::size_t i = 0; i < n; ++i) o[i] = e[i] * th[i];
      check_finite(out);
      return out;
    }
    const SpectralField k1 = nonlinear_term(theta);
    const auto c1 = k1.coeffs();
    if (cfg_.scheme == Scheme::IfEuler) {
      for (std::size_t i = 0; i < n; ++i) o[i] = e[i] * (th[i] + h * c1[i]);
      check_finite(out);
      return out;
    }
    SpectralField stage(cfg_.grid);
    auto s = stage.coeffs();
    for (std::size_t i = 0; i < n; ++i) s[i] = e2[i] * (th[i] + 0.5 * h * c1[i]);
    const SpectralField k2 = nonlinear_term(stage);
    const auto c2 = k2.coeffs();
    for (std::size_t i = 0; i < n; ++i) s[i] = e2[i] * th[i] + 0.5 * h * c2[i];
    const SpectralField k3 = nonlinear_term(stage);
    const auto c3 = k3.coeffs();
    for (std::size_t i = 0; i < n; ++i) s[i] = e[i] * th[i] + h * e2[i] * c3[i];
    const SpectralField k4 = nonlinear_term(stage);
    const auto c4 = k4.coeffs();
    for (std::size_t i = 0; i < n; ++i)
      o[i] = e[i] * th[i] +
             (h / 6.0) * (e[i] * c1[i] + 2.0 * e2[i] * (c2[i] + c3[i]) + c4[i]);
    check_finite(out);
    return out;
  }

 private:
  static void check_finite(const SpectralField& f) {
    for (const Complex& c : f.coeffs())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw NonFiniteError(std::nan(""), "non-finite coefficient after a step");
  }

  const SolverConfig& cfg_;
  std::vector<double> lambda_;
};

void require_grid(const SpectralField& theta, const SolverConfig& cfg) {
  require(theta.grid() == cfg.grid, ErrorCode::InvalidArgument,
          "field grid does not match the solver grid");
}

// d/dt sum lambda |theta|^2 along the flow.
double dissipation_rate_derivative(const SpectralField& theta,
                                   const std::vector<double>& lambda,
                                   bool nonlinear) {
  const auto th = theta.coeffs();
  long double sum = 0.0L;
  for (std::size_t i = 0; i < th.size(); ++i)
    sum -= 2.0L * lambda[i] * lambda[i] * std::norm(th[i]);
  if (nonlinear) {
    const SpectralField n = nonlinear_term(theta);
    const auto nc = n.coeffs();
    for (std::size_t i = 0; i < th.size(); ++i)
      sum += 2.0L * lambda[i] * (std::conj(th[i]) * nc[i]).real();
  }
  return static_cast<double>(sum);
}

class Recorder {
 public:
  Recorder(const SolverConfig& cfg, const std::vector<double>& lambda)
      : cfg_(cfg), lambda_(lambda) {
    rec_.lp_exponents = cfg.lp_exponents;
    rec_.lp.resize(cfg.lp_exponents.size());
    rec_.sobolev_orders = cfg.sobolev_orders;
    rec_.hs.resize(cfg.sobolev_orders.size());
  }

  void record(double t, const SpectralField& theta) {
    rec_.times.push_back(t);
    rec_.l2.push_back(spectral::sobolev_norm(theta, 0.0));
    if (!cfg_.lp_exponents.empty()) {
      const auto phys = spectral::to_physical(theta);
      for (std::size_t j = 0; j < cfg_.lp_exponents.size(); ++j)
        rec_.lp[j].push_back(spectral::lp_norm(phys, cfg_.lp_exponents[j]));
    }
    for (std::size_t j = 0; j < cfg_.sobolev_orders.size(); ++j)
      rec_.hs[j].push_back(spectral::sobolev_norm(theta, cfg_.sobolev_orders[j]));
    const double a1 = spectral::anisotropic_norm(theta, 1, cfg_.params.alpha);
    const double a2 = spectral::anisotropic_norm(theta, 2, cfg_.params.beta);
    rec_.diss_x1.push_back(a1 * a1);
    rec_.diss_x2.push_back(a2 * a2);
    rec_.diss_rate.push_back(
        dissipation_rate_derivative(theta, lambda_, cfg_.nonlinear));
    if (cfg_.record_spectra) rec_.spectra.push_back(theta);
  }

  TrajectoryRecord take(std::size_t steps) {
    rec_.steps = steps;
    return std::move(rec_);
  }

 private:
  const SolverConfig& cfg_;
  const std::vector<double>& lambda_;
  TrajectoryRecord rec_;
};

}  // namespace

SpectralField step(const SpectralField& theta, const SolverConfig& cfg) {
  return step(theta, cfg, cfg.dt);
}

SpectralField step(const SpectralField& theta, const SolverConfig& cfg, double dt) {
  cfg.validate();
  require_grid(theta, cfg);
  require(dt > 0.0, ErrorCode::InvalidArgument, "step size must be > 0");
  return Stepper(cfg).advance(theta, dt);
}

double cfl_time_step(const SpectralField& theta, const SolverConfig& cfg) {
  const auto v = spectral::riesz_velocity(spectral::dealias(theta));
  const auto u1 = spectral::to_physical(v.u1);
  const auto u2 = spectral::to_physical(v.u2);
  double umax = 0.0;
  for (std::size_t j = 0; j < u1.values.size(); ++j)
    umax = std::max(umax, std::hypot(u1.values[j], u2.values[j]));
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  const double dx = std::min(cfg.grid.spacing(1), cfg.grid.spacing(2));
  return cfg.cfl * dx / umax;
}

TrajectoryRecord evolve(const SpectralField& theta0, const SolverConfig& cfg,
                        const StepObserver& observer) {
  cfg.validate();
  require_grid(theta0, cfg);
  SpectralField theta = theta0;
  const double scale = spectral::sobolev_norm(theta0, 0.0);
  require(std::abs(theta.at(0, 0)) <= 1e-12 * scale, ErrorCode::PreconditionViolated,
          "initial data must be mean-free");
  theta.at(0, 0) = Complex{};

  std::vector<double> samples = cfg.sample_times;
  if (samples.empty()) samples = {0.0, cfg.t_end};

  const Stepper stepper(cfg);
  Recorder recorder(cfg, stepper.lambda());
  double t = 0.0;
  double dt = cfg.dt;
  std::size_t steps = 0;
  for (double target : samples) {
    while (t < target) {
      if (!cfg.fixed_dt && steps % static_cast<std::size_t>(cfg.cfl_interval) == 0)
        dt = std::min(cfg.dt, cfl_time_step(theta, cfg));
      double h = std::min(dt, target - t);
      const bool lands = (target - t) - h <= 1e-9 * h;
      if (lands) h = target - t;
      try {
        theta = stepper.advance(theta, h);
      } catch (const NonFiniteError&) {
        std::ostringstream os;
        os << "solution became non-finite at t=" << t + h;
        throw NonFiniteError(t + h, os.str());
      }
      t = lands ? target : t + h;
      ++steps;
      if (observer) observer(t, theta, h);
    }
    recorder.record(t, theta);
  }
  return recorder.take(steps);
}

std::vector<std::string> TrajectoryRecord::column_names() const {
  std::vector<std::string> names{"t", "l2"};
  for (double p : lp_exponents) names.push_back("lp_" + detail::format_label(p));
  for (double s : sobolev_orders) names.push_back("hs_" + detail::format_label(s));
  names.insert(names.end(), {"diss_x1", "diss_x2", "ddiss_dt"});
  return names;
}

std::vector<std::vector<double>> TrajectoryRecord::columns() const {
  std::vector<std::vector<double>> cols{times, l2};
  cols.insert(cols.end(), lp.begin(), lp.end());
  cols.insert(cols.end(), hs.begin(), hs.end());
  cols.push_back(diss_x1);
  cols.push_back(diss_x2);
  cols.push_back(diss_rate);
  return cols;
}

std::string TrajectoryRecord::to_csv() const {
  return detail::csv(column_names(), columns());
}

std::vector<double> energy_identity_residual_signed(const TrajectoryRecord& traj,
                                                    EnergyQuadrature rule) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double h = traj.times[i + 1] - traj.times[i];
    const double e0 = 0.5 * traj.l2[i] * traj.l2[i];
    const double e1 = 0.5 * traj.l2[i + 1] * traj.l2[i + 1];
    const double d0 = traj.diss_x1[i] + traj.diss_x2[i];
    const double d1 = traj.diss_x1[i + 1] + traj.diss_x2[i + 1];
    double integral = 0.5 * h * (d0 + d1);
    if (rule == EnergyQuadrature::CorrectedTrapezoid)
      integral -= h * h / 12.0 * (traj.diss_rate[i + 1] - traj.diss_rate[i]);
    out.push_back((e1 - e0 + integral) / std::max(e0, 1e-300));
  }
  return out;
}

std::vector<double> energy_identity_residual(const TrajectoryRecord& traj,
                                             EnergyQuadrature rule) {
  auto r = energy_identity_residual_signed(traj, rule);
  for (double& v : r) v = std::abs(v);
  return r;
}

double lp_monotonicity_check(const TrajectoryRecord& traj, double p) {
  const auto it = std::find(traj.lp_exponents.begin(), traj.lp_exponents.end(), p);
  require(it != traj.lp_exponents.end(), ErrorCode::InvalidArgument,
          "Lebesgue exponent " + detail::format_label(p) + " was not recorded");
  const auto& series = traj.lp[static_cast<std::size_t>(it - traj.lp_exponents.begin())];
  if (series.empty() || series.front() == 0.0) return 1.0;
  double worst = 0.0;
  for (double v : series) worst = std::max(worst, v / series.front());
  return worst;
}

double max_principle_check(const TrajectoryRecord& traj) {
  return lp_monotonicity_check(traj, std::numeric_limits<double>::infinity());
}

double max_l2_squared_increase(const TrajectoryRecord& traj) {
  if (traj.size() < 2 || traj.l2.front() == 0.0) return 0.0;
  const double ref = traj.l2.front() * traj.l2.front();
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i)
    worst = std::max(worst, (traj.l2[i + 1] * traj.l2[i + 1] - traj.l2[i] * traj.l2[i]) / ref);
  return worst;
}

EnergyMonitor::EnergyMonitor(const SpectralField& theta0, const SolverConfig& cfg)
    : lambda_(symbol_table(cfg.grid, cfg.params)), nonlinear_(cfg.nonlinear) {
  require_grid(theta0, cfg);
  e0_ = e_ = std::pow(spectral::sobolev_norm(theta0, 0.0), 2);
  d_ = spectral::dissipation_form(theta0, cfg.params);
  rate_ = dissipation_rate_derivative(theta0, lambda_, nonlinear_);
}

void EnergyMonitor::observe(const SpectralField& theta, double h) {
  const auto c = theta.coeffs();
  long double e = 0.0L, d = 0.0L;
  for (std::size_t i = 0; i < c.size(); ++i) {
    e += std::norm(c[i]);
    d += lambda_[i] * std::norm(c[i]);
  }
  const double rate = dissipation_rate_derivative(theta, lambda_, nonlinear_);
  integral_ += 0.5 * (d_ + static_cast<double>(d)) * h - h * h / 12.0 * (rate - rate_);
  if (e0_ > 0.0) {
    worst_growth_ = std::max(worst_growth_, (static_cast<double>(e) - e_) / e0_);
    worst_balance_ = std::max(
        worst_balance_, std::abs(0.5 * (static_cast<double>(e) - e0_) + integral_) / (0.5 * e0_));
  }
  e_ = static_cast<double>(e);
  d_ = static_cast<double>(d);
  rate_ = rate;
  ++steps_;
}

StepObserver EnergyMonitor::observer() {
  return [this](double, const SpectralField& theta, double h) { observe(theta, h); };
}

namespace {

struct DifferenceTrace {
  std::vector<double> times;
  std::vector<SpectralField> w;
  std::vector<double> theta_l2;
  std::vector<double> linear_l2;
  std::vector<double> integral;
};

DifferenceTrace trace_difference(const SpectralField& theta0, SolverConfig cfg) {
  cfg.lp_exponents.clear();
  cfg.sobolev_orders.clear();
  cfg.record_spectra = true;
  cfg.nonlinear = true;

  auto transport = [](const SpectralField& theta) {
    const auto v = spectral::riesz_velocity(theta);
    const double u = std::hypot(spectral::sobolev_norm(v.u1, 0.0),
                                spectral::sobolev_norm(v.u2, 0.0));
    return u * spectral::sobolev_norm(theta, 0.0);
  };

  // Trapezoid per step; sample times are step boundaries so the running
  // value at a sample is exact for the recorded steps.
  std::vector<std::pair<double, double>> running{{0.0, 0.0}};
  double previous = transport(theta0);
  double integral = 0.0;
  auto observer = [&](double t, const SpectralField& theta, double h) {
    const double g = transport(theta);
    integral += 0.5 * h * (previous + g);
    previous = g;
    running.emplace_back(t, integral);
  };
  const TrajectoryRecord traj = evolve(theta0, cfg, observer);

  DifferenceTrace out;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.times[i];
    while (cursor + 1 < running.size() && running[cursor + 1].first <= t) ++cursor;
    const SpectralField linear = spectral::apply_multiplier(
        theta0, spectral::MultiplierSymbol::heat_kernel(cfg.params, t));
    out.times.push_back(t);
    out.w.push_back(traj.spectra[i] - linear);
    out.theta_l2.push_back(traj.l2[i]);
    out.linear_l2.push_back(spectral::sobolev_norm(linear, 0.0));
    out.integral.push_back(running[cursor].second);
  }
  return out;
}

}  // namespace

DifferenceReport difference_run(const SpectralField& theta0, const SolverConfig& cfg,
                                const DifferenceOptions& options) {
  const DifferenceTrace primary = trace_difference(theta0, cfg);
  const GridSpec& g = cfg.grid;
  const double norm_factor = 1.0 / std::sqrt(g.area());

  DifferenceReport report;
  report.times = primary.times;
  report.theta_l2 = primary.theta_l2;
  report.linear_l2 = primary.linear_l2;
  report.transport_integral = primary.integral;
  for (const auto& w : primary.w) report.w_l2.push_back(spectral::sobolev_norm(w, 0.0));

  double kmax = 0.0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      kmax = std::max(kmax, std::hypot(g.wavenumber(1, i1), g.wavenumber(2, i2)));

  if (options.measure_error) {
    SolverConfig fine = cfg;
    fine.dt = 0.5 * cfg.dt;
    fine.cfl = 0.5 * cfg.cfl;
    const DifferenceTrace half = trace_difference(theta0, fine);
    for (std::size_t i = 0; i < primary.w.size(); ++i) {
      const auto a = primary.w[i].coeffs();
      const auto b = half.w[i].coeffs();
      for (std::size_t j = 0; j < a.size(); ++j)
        report.time_error = std::max(report.time_error, std::abs(a[j] - b[j]));
      report.integral_error = std::max(
          report.integral_error,
          kmax * norm_factor * std::abs(primary.integral[i] - half.integral[i]));
    }
    report.q_tol = options.q_tol_factor * report.time_error + report.integral_error;
  } else {
    report.q_tol = options.q_tol;
  }

  for (std::size_t i = 0; i < primary.w.size(); ++i) {
    double worst = 0.0;
    const SpectralField& w = primary.w[i];
    for (int i1 = 0; i1 < g.n1; ++i1) {
      const double xi1 = g.wavenumber(1, i1);
      for (int i2 = 0; i2 < g.n2; ++i2) {
        const double xi = std::hypot(xi1, g.wavenumber(2, i2));
        if (xi == 0.0) continue;
        const double mag = std::abs(w.at(i1, i2));
        const double bound = xi * norm_factor * primary.integral[i];
        ++report.checked;
        if (mag > bound + report.q_tol) ++report.violations;
        if (bound > 0.0) worst = std::max(worst, mag / bound);
        else if (mag > 0.0) worst = std::numeric_limits<double>::infinity();
      }
    }
    report.worst_ratio.push_back(worst);
  }
  return report;
}

std::string DifferenceReport::to_csv() const {
  return detail::csv({"t", "w_l2", "theta_l2", "linear_l2", "transport_integral",
                      "worst_ratio"},
                     {times, w_l2, theta_l2, linear_l2, transport_integral, worst_ratio});
}

}  // namespace sqgad::solver
