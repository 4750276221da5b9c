#include "sqgad/theory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sqgad/error.hpp"

namespace sqgad::theory {

namespace {

constexpr double kCriticalRelTol = 1e-12;

std::string describe(const DissipationParams& p) {
  std::ostringstream os;
  os << "(alpha=" << p.alpha << ", beta=" << p.beta << ")";
  return os.str();
}

}  // namespace

void DissipationParams::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v > 0.0 && v <= 1.0; };
  require(ok(alpha) && ok(beta), ErrorCode::InvalidArgument,
          "dissipation powers must lie in (0,1]: " + describe(*this));
}

double DissipationParams::symbol(double xi1, double xi2) const {
  return std::pow(std::abs(xi1), 2.0 * alpha) +
         std::pow(std::abs(xi2), 2.0 * beta);
}

void DecayQuery::validate() const {
  require(std::isfinite(s) && s >= 0.0, ErrorCode::InvalidArgument,
          "Sobolev order s must be >= 0");
  require(std::isfinite(p) && p >= 1.0 && p <= 2.0,
          ErrorCode::InvalidArgument, "Lebesgue exponent p must lie in [1,2]");
}

const char* to_string(RegionBranch branch) noexcept {
  switch (branch) {
    case RegionBranch::LowAlpha: return "LOW_ALPHA";
    case RegionBranch::HighAlpha: return "HIGH_ALPHA";
    case RegionBranch::Complement: return "COMPLEMENT";
  }
  return "UNKNOWN";
}

double region_threshold(double alpha) {
  if (alpha <= 0.5) return 1.0 / (2.0 * alpha + 1.0);
  return (1.0 - alpha) / (2.0 * alpha);
}

RegionVerdict regularity_region(const DissipationParams& params) {
  params.validate();
  const double a = params.alpha;
  const double b = params.beta;
  if (a >= 1.0 || b >= 1.0) return {false, RegionBranch::Complement};
  if (b > region_threshold(a)) {
    return {true, a <= 0.5 ? RegionBranch::LowAlpha : RegionBranch::HighAlpha};
  }
  return {false, RegionBranch::Complement};
}

double decay_exponent(const DissipationParams& params, const DecayQuery& query) {
  params.validate();
  query.validate();
  const double a = params.alpha;
  const double b = params.beta;
  const double p = query.p;
  return ((a + b) * (2.0 - p) + 2.0 * std::min(a, b) * query.s * p) /
         (4.0 * a * b * p);
}

double difference_critical_p(const DissipationParams& params) {
  params.validate();
  const double a = params.alpha;
  const double b = params.beta;
  return 2.0 * (a + b) / (2.0 * a * b + a + b);
}

double difference_auxiliary(const DissipationParams& params, double p) {
  params.validate();
  const double a = params.alpha;
  const double b = params.beta;
  return std::min(a + (p + 1.0) * b, (p + 1.0) * a + b) + 2.0 * (a + b) -
         (a + b + 2.0 * a * b) * p;
}

DifferenceCase difference_case(const DissipationParams& params, double p) {
  const double pc = difference_critical_p(params);
  if (std::abs(p - pc) <= kCriticalRelTol * pc) return DifferenceCase::AtCritical;
  return p < pc ? DifferenceCase::BelowCritical : DifferenceCase::AboveCritical;
}

double difference_exponent(const DissipationParams& params, double p) {
  params.validate();
  require(std::isfinite(p) && p >= 1.0 && p < 2.0, ErrorCode::InvalidArgument,
          "difference exponent needs p in [1,2)");
  const double a = params.alpha;
  const double b = params.beta;
  const double denom = 4.0 * a * b * p;
  const double cubic = std::min(a + 3.0 * b, 3.0 * a + b);
  const double aux = difference_auxiliary(params, p);
  switch (difference_case(params, p)) {
    case DifferenceCase::AtCritical:
      return std::min(a + (p + 1.0) * b, (p + 1.0) * a + b) / denom;
    case DifferenceCase::BelowCritical:
      return std::min(cubic * p, aux) / denom;
    case DifferenceCase::AboveCritical:
      return std::min(cubic * p + 2.0 * (a + b) * (2.0 - p) - 4.0 * a * b * p,
                      aux) /
             denom;
  }
  return 0.0;
}

double difference_exponent_l2only(const DissipationParams& params) {
  params.validate();
  const double a = params.alpha;
  const double b = params.beta;
  const double cubic = std::min(a + 3.0 * b, 3.0 * a + b);
  require(cubic > 4.0 * a * b, ErrorCode::PreconditionViolated,
          "L2-only difference rate needs min{a+3b,3a+b} > 4ab at " +
              describe(params));
  return (cubic - 4.0 * a * b) / (8.0 * a * b);
}

double critical_exponent(double s, double p) {
  require(std::isfinite(s) && s >= 0.0, ErrorCode::InvalidArgument,
          "Sobolev order s must be >= 0");
  require(std::isfinite(p) && p >= 1.0 && p <= 2.0,
          ErrorCode::InvalidArgument, "Lebesgue exponent p must lie in [1,2]");
  return (2.0 + (s - 1.0) * p) / p;
}

double small_data_sobolev_order(const DissipationParams& params) {
  params.validate();
  const double a = params.alpha;
  const double b = params.beta;
  return 2.0 - 4.0 * a * b / (a + b);
}

}  // namespace sqgad::theory
