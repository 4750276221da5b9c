#include "doctest.h"

#include <cmath>

#include "sqgad/error.hpp"
#include "sqgad/theory.hpp"

using namespace sqgad;
using namespace sqgad::theory;

namespace {

// Independent transcription of the exponent, evaluated term by term.
double decay_oracle(double a, double b, double s, double p) {
  const double m = a < b ? a : b;
  return ((a + b) * (2.0 - p) + 2.0 * m * s * p) / (4.0 * a * b * p);
}

double diff_oracle(double a, double b, double p) {
  const double m1 = std::fmin(a + (p + 1) * b, (p + 1) * a + b);
  const double m3 = std::fmin(a + 3 * b, 3 * a + b);
  const double aux = m1 + 2 * (a + b) - (a + b + 2 * a * b) * p;
  const double ps = 2 * (a + b) / (2 * a * b + a + b);
  const double den = 4 * a * b * p;
  if (std::fabs(p - ps) <= 1e-12 * ps) return m1 / den;
  if (p < ps) return std::fmin(m3 * p, aux) / den;
  return std::fmin(m3 * p + 2 * (a + b) * (2 - p) - 4 * a * b * p, aux) / den;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(DissipationParams({0.0, 0.5}).validate(), Error);
  CHECK_THROWS_AS(DissipationParams({0.5, 1.5}).validate(), Error);
  CHECK_NOTHROW(DissipationParams({1.0, 1.0}).validate());
  CHECK_THROWS_AS(DecayQuery({-1.0, 1.0}).validate(), Error);
  CHECK_THROWS_AS(DecayQuery({0.0, 2.5}).validate(), Error);
  CHECK(DissipationParams{0.3, 0.7}.symbol(0.0, 0.0) == 0.0);
  CHECK(DissipationParams{0.3, 0.7}.symbol(2.0, 0.0) == doctest::Approx(std::pow(2.0, 0.6)));
}

TEST_CASE("region examples") {
  auto v = regularity_region({0.4, 0.6});
  CHECK(v.admissible);
  CHECK(v.branch == RegionBranch::LowAlpha);
  v = regularity_region({0.5, 0.5});
  CHECK_FALSE(v.admissible);
  v = regularity_region({0.75, 0.2});
  CHECK(v.admissible);
  CHECK(v.branch == RegionBranch::HighAlpha);
  CHECK(regularity_region({1.0, 0.9}).branch == RegionBranch::Complement);
  CHECK(regularity_region({0.9, 1.0}).branch == RegionBranch::Complement);
  CHECK(std::string(to_string(RegionBranch::LowAlpha)) == "LOW_ALPHA");
}

TEST_CASE("region branches meet at one half") {
  CHECK(region_threshold(0.5) == 0.5);
  CHECK(1.0 / (2 * 0.5 + 1) == (1 - 0.5) / (2 * 0.5));
  CHECK(std::fabs(region_threshold(0.5 + 1e-9) - 0.5) < 1e-8);
}

TEST_CASE("decay exponent examples") {
  CHECK(decay_exponent({1, 1}, {0, 1}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(decay_exponent({0.7, 0.8}, {0, 2}) == 0.0);
  CHECK(decay_exponent({0.5, 0.5}, {1, 2}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(decay_exponent({0.6, 0.9}, {1, 1}) == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("decay exponent matches oracle, swap symmetry and the isotropic reduction") {
  for (double a = 0.05; a <= 1.0; a += 0.095)
    for (double b = 0.05; b <= 1.0; b += 0.095)
      for (double s : {0.0, 0.5, 1.0, 2.0})
        for (double p : {1.0, 1.3, 1.7, 2.0}) {
          const double e = decay_exponent({a, b}, {s, p});
          CHECK(e == doctest::Approx(decay_oracle(a, b, s, p)).epsilon(1e-13));
          CHECK(e == decay_exponent({b, a}, {s, p}));
          if (s == 0.0) {
            CHECK(decay_exponent({a, a}, {s, p}) ==
                  ((2 * a) * (2 - p) + 2 * a * s * p) / (4 * a * a * p));
          }
          if (p == 2.0) {
            CHECK(e == doctest::Approx(std::fmin(a, b) * s / (2 * a * b)).epsilon(1e-13));
          }
        }
}

TEST_CASE("difference exponent cases and values") {
  CHECK(difference_critical_p({1, 1}) == doctest::Approx(1.0));
  CHECK(difference_case({1, 1}, 1.0) == DifferenceCase::AtCritical);
  CHECK(difference_exponent({1, 1}, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(difference_critical_p({0.5, 0.5}) == doctest::Approx(4.0 / 3.0));
  CHECK(difference_case({0.5, 0.5}, 1.0) == DifferenceCase::BelowCritical);
  CHECK(difference_exponent({0.5, 0.5}, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(difference_auxiliary({1, 1}, 1.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(difference_exponent({1, 1}, 2.0), Error);
}

TEST_CASE("difference exponent is continuous across the critical p") {
  for (double a : {0.2, 0.5, 0.8})
    for (double b : {0.3, 0.6, 0.9}) {
      const double ps = difference_critical_p({a, b});
      if (ps >= 2.0 || ps <= 1.0) continue;
      const double at = difference_exponent({a, b}, ps);
      CHECK(difference_exponent({a, b}, ps * (1 - 1e-9)) == doctest::Approx(at).epsilon(1e-7));
      CHECK(difference_exponent({a, b}, ps * (1 + 1e-9)) == doctest::Approx(at).epsilon(1e-7));
    }
}

TEST_CASE("difference exponent exceeds the undifferenced rate on the sample grid") {
  double min_gap = 1e300;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j)
      for (int k = 0; k < 10; ++k) {
        const double a = 0.05 + 0.95 * i / 19.0;
        const double b = 0.05 + 0.95 * j / 19.0;
        const double p = 1.0 + 0.9 * k / 9.0;
        const double d = difference_exponent({a, b}, p);
        CHECK(d == doctest::Approx(diff_oracle(a, b, p)).epsilon(1e-13));
        min_gap = std::fmin(min_gap, d - decay_exponent({a, b}, {0.0, p}));
      }
  CHECK(min_gap > 0.0);
  CHECK(min_gap == doctest::Approx(0.01316).epsilon(1e-3));
}

TEST_CASE("L2-only difference exponent") {
  CHECK(difference_exponent_l2only({0.5, 0.5}) == doctest::Approx(0.5));
  CHECK(difference_exponent_l2only({0.25, 1.0}) == doctest::Approx(0.375));
  try {
    difference_exponent_l2only({1, 1});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}

TEST_CASE("critical exponent") {
  CHECK(critical_exponent(1, 1) == 2.0);
  CHECK(critical_exponent(1, 2) == 1.0);
  CHECK(critical_exponent(2, 2) == 2.0);
  for (double s : {0.0, 1.0, 1.5})
    for (double p : {1.0, 1.5, 2.0})
      CHECK(critical_exponent(s, p) == doctest::Approx(decay_exponent({0.5, 0.5}, {s, p})));
}

TEST_CASE("small-data Sobolev order") {
  CHECK(small_data_sobolev_order({1, 1}) == doctest::Approx(0.0));
  CHECK(small_data_sobolev_order({0.5, 0.5}) == doctest::Approx(1.0));
}
