#pragma once

// Numerical certification of the interpolation and symbol inequalities used
// in the decay estimates, the splitting-set moments, the ODE comparison
// lemma and a time-convolution bound.
//
// Inequalities whose proof is a pure Holder or pointwise argument have
// constant 1 and are checked against 1 + 1e-10.  The others only get an
// empirical sup of LHS/RHS.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sqgad/quadrature.hpp"
#include "sqgad/spectral.hpp"
#include "sqgad/theory.hpp"

namespace sqgad::inequalities {

inline constexpr double kConstantOneThreshold = 1.0 + 1e-10;

// ||L1^d1 L2^d2 f|| <= ||f||^{1-mu-lambda} ||L1^e1 L2^e2 f||^mu ||L1^g1 L2^g2 f||^lambda
struct InterpolationTriple {
  double delta1 = 0.0, delta2 = 0.0;
  double eps1 = 0.0, eps2 = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0;
};

struct InterpolationWeights {
  double mu = 0.0;
  double lambda = 0.0;
  bool valid = false;  // mu >= 0, lambda >= 0, mu + lambda <= 1
};

// Solves delta = mu eps + lambda gamma.  DegenerateSystem when
// eps2 gamma1 == eps1 gamma2.
InterpolationWeights interpolation_weights(const InterpolationTriple& t);

// The triple used for the transport term: delta = (1, 1 - d) with
// d = (1 - a b)/(a + 1), eps = (0, b + 1), gamma = (a + 1, 0).
double transport_delta(const theory::DissipationParams& params);
InterpolationTriple transport_triple(const theory::DissipationParams& params);

// LHS/RHS of the triple inequality.  ZeroField for f = 0; InvalidArgument for
// an invalid triple.
double check_aniso_interpolation(const spectral::SpectralField& f,
                                 const InterpolationTriple& t);

// ||L_axis^g f|| / (||f||^{1-g/r} ||L_axis^r f||^{g/r}) with 0 <= g <= r, r > 0.
double check_directional_interpolation(const spectral::SpectralField& f, int axis,
                                       double gamma, double varrho);

struct SymbolReport {
  // |xi_i|^{k+l} |xi_j|^{1-l} <= |xi_i|^k |xi|
  double max_first = 0.0;
  // |xi_i|^{k-l} |xi_j|^l <= |xi_i|^{k-1} |xi|
  double max_second = 0.0;
  std::size_t checked = 0;
  std::size_t violations = 0;
};

SymbolReport check_symbol_inequalities(const spectral::GridSpec& grid,
                                       const std::vector<double>& ls,
                                       const std::vector<double>& ks);

// Machine-readable result of one inequality sweep or report.
struct InequalityReport {
  std::string id;
  std::map<std::string, double> params;
  std::size_t samples = 0;
  double sup_ratio = 0.0;
  double threshold = 0.0;  // 0 for empirical reports
  bool pass = false;
  std::uint64_t seed = 0;
  std::size_t violations = 0;
  // Diagnostics such as the largest weight-identity error of a sweep.
  std::map<std::string, double> metrics;
  // Empirical reports only.
  double sup_ratio_fine = 0.0;     // same fields on the doubled grid
  double refinement_change = 0.0;  // |fine/coarse - 1|
  std::vector<double> histogram_edges;
  std::vector<std::size_t> histogram;

  std::string to_json() const;
};

struct SweepSpec {
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  int n = 128;
  int jobs = 1;
};

// Random fields against random valid triples: eps, gamma in [0,2]^2, (mu,
// lambda) uniform on the simplex, delta = mu eps + lambda gamma.
InequalityReport sweep_aniso_interpolation(const SweepSpec& spec);
// Random fields against random 0 <= gamma <= varrho <= 3 on a random axis.
InequalityReport sweep_directional_interpolation(const SweepSpec& spec);
// l in {0, 0.1, ..., 1}, k in {1, 1.5, 2} on the full n x n grid.
InequalityReport sweep_symbol_facts(const SweepSpec& spec);

enum class EmpiricalId {
  Embedding,     // ||f||_{L^r} <= C ||L1^a f||^{b/(a+b)} ||L2^b f||^{a/(a+b)},
                 // r = 2(a+b)/(a+b-2ab)
  MixedLp,       // ||f|| <= C ||f||_p^{1-(a+b)c/D} ||L1^a f||^{bc/D} ||L2^b f||^{ac/D},
                 // c = 1/p - 1/2, D = (a+b)c + ab
  LpDirectional, // ||L_i^s f||_r <= C ||f||_q^{1-s/d} ||L_i^d f||_p^{s/d},
                 // 1/r = (1/q)(1-s/d) + (1/p)(s/d)
};

const char* to_string(EmpiricalId id) noexcept;
EmpiricalId parse_empirical_id(const std::string& name);

struct EmpiricalParams {
  double alpha = 0.25;
  double beta = 0.25;
  double p = 1.5;      // MixedLp, LpDirectional
  double q = 8.0;      // LpDirectional
  double sigma = 0.4;  // LpDirectional
  double delta = 1.0;  // LpDirectional
  int axis = 1;        // LpDirectional
};

// Lebesgue exponent of the embedding, 2(a+b)/(a+b-2ab).
double embedding_exponent(double alpha, double beta);

// LHS/RHS for one field.  HypothesisViolated when the parameters fall outside
// the inequality's hypotheses.
double empirical_ratio(EmpiricalId id, const spectral::SpectralField& f,
                       const EmpiricalParams& params);

// Sup over spec.samples random fields at n and at 2n (same coefficients),
// with a 10-bin histogram of the coarse ratios.  Passes when the sup is
// finite and positive; the refinement change is reported.
InequalityReport empirical_ratio_report(EmpiricalId id, const EmpiricalParams& params,
                                        const SweepSpec& spec);

enum class Moment { Area, Xi1Sq, Xi2Sq, IsoBound };

const char* to_string(Moment m) noexcept;
Moment parse_moment(const std::string& name);

// Closed forms over E(rho) = {|xi_1|^{2a} + |xi_2|^{2b} <= rho}:
//   AREA   (2/b) B(1/(2b), 1/(2a)+1) rho^{(a+b)/(2ab)}
//   XI1_SQ (2/(3b)) B(1/(2b), 3/(2a)+1) rho^{(a+3b)/(2ab)}
//   XI2_SQ the same with the axes exchanged
//   ISO_BOUND max(1, 2^{s-1}) (rho^{s/a} + rho^{s/b}) |E(rho)|, an upper bound
//   for int_E |xi|^{2s}.
double splitting_moment(const theory::DissipationParams& params, double rho, Moment m,
                        double s = 0.0);
// Power of rho for AREA, XI1_SQ and XI2_SQ.
double moment_exponent(const theory::DissipationParams& params, Moment m);

struct MomentEstimate {
  double value = 0.0;
  double error = 0.0;
};

// Direct 2D adaptive quadrature of the same integral; for ISO_BOUND the exact
// int_E |xi|^{2s} that the bound dominates.
MomentEstimate splitting_moment_quadrature(const theory::DissipationParams& params,
                                           double rho, Moment m, double s = 0.0,
                                           const quadrature::QuadratureSpec& spec = {
                                               1e-10, 0.0, 20000, true});

struct OdeComparison {
  double x0 = 1.0;
  double nu = 1.0;
  double k = 2.0;

  void validate() const;
};

// [x0^{1-k} + (k-1) nu t]^{-1/(k-1)}; identically 0 when x0 = 0.
double ode_comparison_bound(const OdeComparison& c, double t);

struct OdeReport {
  double max_rel_dev = 0.0;  // max |X/bound - 1| for X' = -nu X^k
  double max_ratio = 0.0;    // max X/bound over the perturbed runs
  std::size_t steps = 0;
  std::size_t perturbed_runs = 0;
  bool saturates = false;    // max_rel_dev <= 1e-8
  bool below = false;        // every X <= bound (1 + 1e-8)
};

// RK4 with step dt on [0, t_end] for the equality ODE and for runs of
// X' = -nu X^k - g(t) X with random smooth g >= 0.
OdeReport ode_comparison_verify(const OdeComparison& c, double dt, double t_end,
                                std::size_t perturbed_runs = 20,
                                std::uint64_t seed = 1);

struct ConvolutionReport {
  double vartheta = 1.0;
  double varrho = 1.0;
  std::vector<double> times;
  std::vector<double> values;  // (1+t)^rho int_0^t e^{-v(t-s)} (1+s)^{-rho} ds
  double sup = 0.0;
  double knee = 0.0;           // time of the sup
  bool nonincreasing_after_knee = false;
  bool pass = false;
};

ConvolutionReport time_convolution_ratio(double vartheta, double varrho,
                                         const std::vector<double>& times);

}  // namespace sqgad::inequalities
