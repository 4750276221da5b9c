#include "doctest.h"

#include <cmath>

#include "sqgad/error.hpp"
#include "sqgad/linear.hpp"

using namespace sqgad;
using namespace sqgad::linear;
using sqgad::quadrature::QuadratureSpec;

TEST_CASE("quadrature driver") {
  using namespace sqgad::quadrature;
  auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
  r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, {1e-10, 0, 4000, true});
  CHECK(std::abs(r.value - 2.0 / 3.0) < 1e-10);
  CHECK(r.error < 1e-9);
  r = integrate([](double x) { return std::sin(x); }, M_PI, 0.0);
  CHECK(r.value == doctest::Approx(-2.0));
  QuadratureSpec tight{1e-15, 0, 5, true};
  try {
    integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, tight);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.code() == ErrorCode::QuadratureNoConvergence);
    CHECK(e.estimate() > 0.0);
  }
  Region2 tri{{0.0, 1.0}, [](double) { return 0.0; }, [](double x) { return 1.0 - x; }, {}};
  const auto t = integrate_2d([](double x, double y) { return x * y; }, tri);
  CHECK(t.value == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
  const auto g = geometric_breaks(0.0, 1.0, 0.25);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[1] == doctest::Approx(0.25 / 16));
}

TEST_CASE("profiles") {
  const auto p = SpectrumProfile::plateau(1.0);
  CHECK(p(0.5, 0.5) == 1.0);
  CHECK(p(0.9, 0.9) == 0.0);
  CHECK(SpectrumProfile::smooth_bump(2.0)(0, 0) == 1.0);
  const auto a = SpectrumProfile::axis_anisotropic(1.0, 3.0);
  CHECK(a(0.5, 2.5) == 1.0);
  CHECK(a.transposed()(0.5, 2.5) == 0.0);
  CHECK(SpectrumProfile::annulus(0.5, 1.0)(0.1, 0.1) == 0.0);
  CHECK_THROWS_AS(SpectrumProfile::plateau(-1).validate(), Error);
  CHECK_THROWS_AS(SpectrumProfile::annulus(2, 1).validate(), Error);
  CHECK(parse_profile_kind("SMOOTH_BUMP") == SpectrumProfile::Kind::SmoothBump);
  CHECK_THROWS_AS(parse_profile_kind("DISK"), Error);
}

TEST_CASE("torus evolution") {
  spectral::GridSpec g;
  g.n1 = g.n2 = 16;
  const auto m = spectral::single_mode(g, 1, 0, 1.0);
  for (double a : {0.2, 0.7, 1.0}) {
    const auto e = evolve_linear_torus(m, {a, 0.4}, 2.0);
    CHECK(std::abs(e.mode(1, 0) - std::exp(-2.0) * m.mode(1, 0)) < 1e-16);
  }
  const auto f = spectral::random_band_limited(1, g, {1, 7}, 0.0);
  CHECK(evolve_linear_torus(f, {0.6, 0.8}, 0.0) == f);
  const auto ab = evolve_linear_torus(evolve_linear_torus(f, {0.6, 0.8}, 0.3), {0.6, 0.8}, 0.5);
  const auto c = evolve_linear_torus(f, {0.6, 0.8}, 0.8);
  for (std::size_t i = 0; i < ab.coeffs().size(); ++i)
    CHECK(std::abs(ab.coeffs()[i] - c.coeffs()[i]) < 1e-14);
  CHECK_THROWS_AS(evolve_linear_torus(f, {0.6, 0.8}, -1.0), Error);
}

TEST_CASE("norm quadrature against closed forms") {
  const auto p = SpectrumProfile::plateau(1.0);
  auto r = linear_norm_quadrature(p, {0.5, 0.5}, 0.0, 0.0);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-9));
  r = linear_norm_quadrature(p, {0.5, 0.5}, 0.0, 1e-9);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-8));
  // s = 1 at t = 0: int_{disk} |xi|^2 = pi/2.
  r = linear_norm_quadrature(p, {0.3, 0.9}, 1.0, 0.0);
  CHECK(r.value == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-9));
  // Gaussian bump against the heat kernel at alpha = beta = 1:
  // int exp(-|xi|^2 (1/sigma^2 + 2t)) = pi / (1/sigma^2 + 2t).
  const auto bump = SpectrumProfile::smooth_bump(1.5);
  for (double t : {0.0, 0.3, 10.0}) {
    r = linear_norm_quadrature(bump, {1, 1}, 0.0, t);
    CHECK(r.value == doctest::Approx(std::sqrt(M_PI / (1 / 2.25 + 2 * t))).epsilon(1e-8));
  }
  // Rectangle with alpha = beta = 1 separates into error functions.
  const auto rect = SpectrumProfile::axis_anisotropic(1.0, 2.0);
  const double t = 0.7, k = std::sqrt(2 * t);
  const double exact = M_PI / (2 * t) * std::erf(k * 1.0) * std::erf(k * 2.0);
  r = linear_norm_quadrature(rect, {1, 1}, 0.0, t);
  CHECK(r.value == doctest::Approx(std::sqrt(exact)).epsilon(1e-9));
  CHECK(r.error < 1e-7 * r.value);
  // Diamond kernel: int_{R^2} e^{-2t(|x|+|y|)} = (2 / (2t))^2 = 1/t^2, and the
  // unit disk holds all but an exp(-2t) fraction of it for large t.
  r = linear_norm_quadrature(p, {0.5, 0.5}, 0.0, 1e4);
  CHECK(r.value == doctest::Approx(1e-4).epsilon(1e-8));
}

TEST_CASE("quadrant symmetry and axis swap") {
  QuadratureSpec full;
  full.symmetry_reduction = false;
  const auto p = SpectrumProfile::plateau(1.0);
  const auto a = linear_norm_quadrature(p, {0.6, 0.9}, 1.0, 3.0);
  const auto b = linear_norm_quadrature(p, {0.6, 0.9}, 1.0, 3.0, full);
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-9));
  const auto rect = SpectrumProfile::axis_anisotropic(0.7, 2.0);
  const auto c = linear_norm_quadrature(rect, {0.4, 0.8}, 0.5, 5.0);
  const auto d = linear_norm_quadrature(rect.transposed(), {0.8, 0.4}, 0.5, 5.0);
  CHECK(c.value == doctest::Approx(d.value).epsilon(1e-8));
}

TEST_CASE("norms decrease in time") {
  for (const auto& prof : {SpectrumProfile::plateau(1.0), SpectrumProfile::smooth_bump(1.0),
                           SpectrumProfile::axis_anisotropic(1, 2),
                           SpectrumProfile::annulus(0.5, 1.0)}) {
    double prev = INFINITY;
    for (double t : {0.0, 0.1, 1.0, 10.0, 100.0}) {
      const double v = linear_norm_quadrature(prof, {0.6, 0.9}, 0.5, t).value;
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("density condition") {
  const std::vector<double> rhos{0.1, 0.05, 0.02, 0.01};
  const auto diamond = density_condition_check(SpectrumProfile::plateau(1.0), {0.5, 0.5},
                                               0.0, 1.0, rhos, {1e-10, 0, 4000, true});
  for (const auto& pt : diamond) CHECK(pt.normalized == doctest::Approx(2.0).epsilon(1e-8));
  // s = 0: the area scales exactly with the normalizing power.
  const auto area = density_condition_check(SpectrumProfile::plateau(1.0), {0.6, 0.9},
                                            0.0, 1.0, {0.1, 0.03, 0.01});
  for (const auto& pt : area)
    CHECK(pt.normalized == doctest::Approx(area.front().normalized).epsilon(1e-7));
  // s = 1, a < b: the xi_1^2 part decays faster than the normalizing power, so
  // the series settles only as rho -> 0.
  const auto general = density_condition_check(SpectrumProfile::plateau(1.0), {0.6, 0.9},
                                               1.0, 1.0, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5});
  double prev_drift = INFINITY;
  for (std::size_t i = 1; i < general.size(); ++i) {
    const double drift = std::abs(general[i].normalized / general[i - 1].normalized - 1.0);
    CHECK(drift < prev_drift);
    prev_drift = drift;
  }
  CHECK(prev_drift < 0.01);
  const auto hole = density_condition_check(SpectrumProfile::annulus(0.5, 1.0), {0.6, 0.9},
                                            0.0, 1.0, {1.0, 0.1, 0.01});
  CHECK(hole.front().normalized > 0.0);
  CHECK(hole.back().normalized == 0.0);
}

TEST_CASE("two-sided check on the diamond kernel") {
  const auto times = geometric_times(1e2, 1e4, 11);
  CHECK(times.front() == 1e2);
  CHECK(times.back() == 1e4);
  const auto rep = two_sided_bound_check(SpectrumProfile::plateau(1.0), {0.5, 0.5}, 0.0, times);
  CHECK(rep.pass);
  CHECK(rep.fit.slope == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(rep.theory_slope == -1.0);
  CHECK(rep.sandwich_lo > 0.0);
  CHECK(rep.sandwich_hi / rep.sandwich_lo < 1.1);
  CHECK(rep.to_json().find("\"fitted_slope\"") != std::string::npos);
  CHECK(rep.to_csv().rfind("t,norm,est_error\n", 0) == 0);
  CHECK_THROWS_AS(two_sided_bound_check(SpectrumProfile::smooth_bump(1.0), {0.5, 0.5}, 0.0, times),
                  Error);
}
