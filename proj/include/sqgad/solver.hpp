#pragma once

// Time integration of
//   theta_t + u.grad theta + Lambda_1^{2a} theta + Lambda_2^{2b} theta = 0,
//   u = (-R_2 theta, R_1 theta)
// on the periodic grid.  Dissipation is integrated exactly through the heat
// kernel exp(-lambda(xi) dt); transport is explicit and Galerkin truncated by
// the dealias mask.

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "sqgad/spectral.hpp"
#include "sqgad/theory.hpp"

namespace sqgad::solver {

enum class Scheme { IfRk4, IfEuler };

const char* to_string(Scheme scheme) noexcept;
Scheme parse_scheme(const std::string& name);

struct SolverConfig {
  theory::DissipationParams params;
  spectral::GridSpec grid;
  double dt = 1e-2;  // fixed step, or upper bound when fixed_dt is false
  double t_end = 1.0;
  Scheme scheme = Scheme::IfRk4;
  std::vector<double> sample_times;  // ascending, inside [0, t_end]
  std::vector<double> lp_exponents{1.0, 2.0, std::numeric_limits<double>::infinity()};
  std::vector<double> sobolev_orders{1.0};
  bool record_spectra = false;
  bool nonlinear = true;  // false integrates the linear flow only
  bool fixed_dt = true;
  // Advective limit dt <= cfl * min(dx) / max|u|, refreshed every
  // cfl_interval steps when fixed_dt is false.
  double cfl = 0.5;
  int cfl_interval = 10;

  void validate() const;
};

// count samples spread evenly over [0, t_end], both ends included.
std::vector<double> uniform_samples(double t_end, std::size_t count);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> lp_exponents;
  std::vector<std::vector<double>> lp;  // lp[j][i]: exponent j at sample i
  std::vector<double> sobolev_orders;
  std::vector<std::vector<double>> hs;
  std::vector<double> diss_x1;   // ||Lambda_1^a theta||^2
  std::vector<double> diss_x2;   // ||Lambda_2^b theta||^2
  std::vector<double> diss_rate; // d/dt of diss_x1 + diss_x2, from the state
  std::vector<spectral::SpectralField> spectra;
  std::size_t steps = 0;

  std::size_t size() const { return times.size(); }
  // Columns: t, l2, lp_<p>..., hs_<s>..., diss_x1, diss_x2, ddiss_dt.
  std::string to_csv() const;
  std::vector<std::string> column_names() const;
  std::vector<std::vector<double>> columns() const;
};

// Dealiased spectral representation of -(u.grad) theta, u = R^perp theta.
// The input is projected onto the dealias mask first so the quadratic term
// is an exact Galerkin truncation.
spectral::SpectralField nonlinear_term(const spectral::SpectralField& theta);

// Advance by one step of size dt (cfg.dt if omitted).  Throws NonFiniteError.
spectral::SpectralField step(const spectral::SpectralField& theta,
                             const SolverConfig& cfg);
spectral::SpectralField step(const spectral::SpectralField& theta,
                             const SolverConfig& cfg, double dt);

// Advective step limit for the current state.
double cfl_time_step(const spectral::SpectralField& theta, const SolverConfig& cfg);

// Called after every completed step with (time, state, step size).
using StepObserver =
    std::function<void(double, const spectral::SpectralField&, double)>;

TrajectoryRecord evolve(const spectral::SpectralField& theta0,
                        const SolverConfig& cfg,
                        const StepObserver& observer = {});

enum class EnergyQuadrature {
  Trapezoid,
  // Trapezoid with the Euler-Maclaurin endpoint correction using the
  // recorded d/dt of the dissipation rate; fourth order in the spacing.
  CorrectedTrapezoid,
};

// Per sample interval:
//   (delta(1/2 ||theta||^2) + int (diss_x1 + diss_x2) dt) / max(1/2 ||theta_i||^2, 1e-300)
std::vector<double> energy_identity_residual_signed(
    const TrajectoryRecord& traj,
    EnergyQuadrature rule = EnergyQuadrature::CorrectedTrapezoid);
std::vector<double> energy_identity_residual(
    const TrajectoryRecord& traj,
    EnergyQuadrature rule = EnergyQuadrature::CorrectedTrapezoid);

// max_t ||theta(t)||_p / ||theta_0||_p, 1 when theta_0 = 0.  The exponent must
// have been recorded.
double lp_monotonicity_check(const TrajectoryRecord& traj, double p);
double max_principle_check(const TrajectoryRecord& traj);

// Largest one-sample increase of ||theta||_{L2}^2, relative to ||theta_0||^2.
double max_l2_squared_increase(const TrajectoryRecord& traj);

// Energy balance followed step by step.  After each step of size h it adds
// the dissipation integral over the step (trapezoid with the endpoint
// correction -h^2/12 (D'(t1) - D'(t0)), D = diss_x1 + diss_x2) and tracks
//   |1/2 ||theta||^2 - 1/2 ||theta0||^2 + int_0^t D| / (1/2 ||theta0||^2)
// and the one-step growth of ||theta||^2 relative to ||theta0||^2.
class EnergyMonitor {
 public:
  EnergyMonitor(const spectral::SpectralField& theta0, const SolverConfig& cfg);

  void observe(const spectral::SpectralField& theta, double h);
  StepObserver observer();

  double worst_balance() const { return worst_balance_; }
  double worst_growth() const { return worst_growth_; }
  std::size_t steps() const { return steps_; }

 private:
  std::vector<double> lambda_;
  bool nonlinear_ = true;
  double e0_ = 0.0;
  double e_ = 0.0;
  double d_ = 0.0;
  double rate_ = 0.0;
  double integral_ = 0.0;
  double worst_balance_ = 0.0;
  double worst_growth_ = 0.0;
  std::size_t steps_ = 0;
};

struct DifferenceOptions {
  // Repeat the run at half the step to measure the time-integration error.
  bool measure_error = true;
  double q_tol_factor = 3.0;
  // Used as q_tol when measure_error is false.
  double q_tol = 0.0;
};

// W = theta - theta_linear for the same data, with the pointwise Fourier bound
//   |W(t, xi)| <= |xi| / sqrt(l1 l2) * int_0^t ||u|| ||theta|| dtau + q_tol
// checked on every retained mode at every sample time.  The 1/sqrt(l1 l2)
// factor is the L1 -> sup bound of the coefficient map under this library's
// normalization.
struct DifferenceReport {
  std::vector<double> times;
  std::vector<double> w_l2;
  std::vector<double> theta_l2;
  std::vector<double> linear_l2;
  std::vector<double> transport_integral;  // int_0^t ||u|| ||theta||
  std::vector<double> worst_ratio;  // max over modes of |W| / bound per sample
  double time_error = 0.0;          // max |W_dt - W_dt/2| over samples and modes
  double integral_error = 0.0;      // matching change in the bound
  double q_tol = 0.0;
  std::size_t checked = 0;
  std::size_t violations = 0;

  std::string to_csv() const;
};

DifferenceReport difference_run(const spectral::SpectralField& theta0,
                                const SolverConfig& cfg,
                                const DifferenceOptions& options = {});

}  // namespace sqgad::solver
