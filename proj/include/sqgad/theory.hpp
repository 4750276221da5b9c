#pragma once

// Closed-form decay exponents and the large-data regularity region for the
// SQG equation with dissipation |xi_1|^{2 alpha} + |xi_2|^{2 beta}.
//
// Every exponent E is for the unsquared L2 norm: ||.|| <= C (1+t)^{-E}.

namespace sqgad::theory {

struct DissipationParams {
  double alpha = 1.0;
  double beta = 1.0;

  // Throws InvalidArgument unless 0 < alpha <= 1 and 0 < beta <= 1.
  void validate() const;
  // |xi_1|^{2 alpha} + |xi_2|^{2 beta}
  double symbol(double xi1, double xi2) const;
  DissipationParams swapped() const { return {beta, alpha}; }
};

struct DecayQuery {
  double s = 0.0;  // Sobolev order, >= 0
  double p = 2.0;  // Lebesgue exponent of the data in [1, 2]; 2 = no L^p data

  void validate() const;
};

enum class RegionBranch { LowAlpha, HighAlpha, Complement };

const char* to_string(RegionBranch branch) noexcept;

struct RegionVerdict {
  bool admissible = false;
  RegionBranch branch = RegionBranch::Complement;
};

// beta threshold of the region: 1/(2a+1) for a <= 1/2, (1-a)/(2a) above.
double region_threshold(double alpha);

// Strict inequalities; alpha == 1 or beta == 1 falls in the complement.
RegionVerdict regularity_region(const DissipationParams& params);

// ((a+b)(2-p) + 2 min(a,b) s p) / (4 a b p). Reduces to min(a,b) s/(2ab) at p=2.
double decay_exponent(const DissipationParams& params, const DecayQuery& query);

// Splitting value p* = 2(a+b)/(2ab+a+b) that separates the three cases of
// the difference rate.
double difference_critical_p(const DissipationParams& params);

// min{a+(p+1)b, (p+1)a+b} + 2(a+b) - (a+b+2ab) p
double difference_auxiliary(const DissipationParams& params, double p);

enum class DifferenceCase { AtCritical, BelowCritical, AboveCritical };

DifferenceCase difference_case(const DissipationParams& params, double p);

// L2 decay exponent of theta - theta_linear for data in L2 cap L^p, p in [1,2).
double difference_exponent(const DissipationParams& params, double p);

// Exponent for L2-only data; PreconditionViolated unless
// min{a+3b, 3a+b} > 4ab.
double difference_exponent_l2only(const DissipationParams& params);

// Critical case a = b = 1/2 with small L^inf data: (2 + (s-1) p)/p.
double critical_exponent(double s, double p);

// Order of the homogeneous norm that must be small for the complement-region
// small-data result: 2 - 4ab/(a+b).
double small_data_sobolev_order(const DissipationParams& params);

}  // namespace sqgad::theory
