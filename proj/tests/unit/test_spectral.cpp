#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "sqgad/error.hpp"
#include "sqgad/spectral.hpp"

using namespace sqgad;
using namespace sqgad::spectral;

namespace {

GridSpec grid(int n = 32, double l1 = 2 * M_PI, double l2 = 2 * M_PI) {
  GridSpec g;
  g.n1 = n;
  g.n2 = n;
  g.l1 = l1;
  g.l2 = l2;
  return g;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    m = std::fmax(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

// Direct O(N^2) evaluation of the field at the collocation points.
std::vector<double> direct_synthesis(const SpectralField& f) {
  const GridSpec& g = f.grid();
  std::vector<double> out(g.size());
  for (int j1 = 0; j1 < g.n1; ++j1)
    for (int j2 = 0; j2 < g.n2; ++j2) {
      const double x1 = j1 * g.l1 / g.n1, x2 = j2 * g.l2 / g.n2;
      std::complex<double> sum = 0.0;
      for (int i1 = 0; i1 < g.n1; ++i1)
        for (int i2 = 0; i2 < g.n2; ++i2) {
          const double ph = g.wavenumber(1, i1) * x1 + g.wavenumber(2, i2) * x2;
          sum += f.at(i1, i2) * std::polar(1.0, ph);
        }
      out[static_cast<std::size_t>(j1) * g.n2 + j2] = sum.real() / std::sqrt(g.area());
    }
  return out;
}

}  // namespace

TEST_CASE("grid wavenumbers and mask") {
  const GridSpec g = grid(16);
  CHECK(g.mode(1, 0) == 0);
  CHECK(g.mode(1, 7) == 7);
  CHECK(g.mode(1, 8) == -8);
  CHECK(g.mode(1, 15) == -1);
  CHECK(g.is_nyquist(2, 8));
  CHECK(g.wavenumber(1, 3) == doctest::Approx(3.0));
  CHECK(grid(16, 4 * M_PI).wavenumber(1, 3) == doctest::Approx(1.5));
  CHECK(g.dealias_cutoff(1) == 5);
  CHECK_FALSE(g.retained(8, 0));
  GridSpec bad = g;
  bad.n1 = 15;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("transform matches direct synthesis and round trips") {
  const GridSpec g = grid(12);
  const auto f = random_band_limited(7, g, {1.0, 4.0}, -1.0);
  const auto phys = to_physical(f);
  const auto direct = direct_synthesis(f);
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(phys.values[i] == doctest::Approx(direct[i]).epsilon(1e-12).scale(1.0));
  const auto back = to_spectral(phys);
  CHECK(max_diff(back, f) < 1e-12 * sobolev_norm(f, 0));
}

TEST_CASE("random fields are deterministic, Hermitian and mean free") {
  const GridSpec g = grid(32);
  const auto a = random_band_limited(1, g, {1.0, 6.0}, -0.5);
  const auto b = random_band_limited(1, g, {1.0, 6.0}, -0.5);
  CHECK(a == b);
  CHECK(a.hermitian_defect() < 1e-15);
  CHECK(a.at(0, 0) == Complex{});
  CHECK(sobolev_norm(a, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_FALSE(a == random_band_limited(2, g, {1.0, 6.0}, -0.5));
  // Resolution independence.
  const auto fine = random_band_limited(1, grid(64), {1.0, 6.0}, -0.5);
  CHECK(std::abs(fine.mode(3, -2) - a.mode(3, -2)) < 1e-15);
  CHECK_THROWS_AS(random_band_limited(1, g, {20.0, 21.0}, 0.0), Error);
  CHECK_THROWS_AS(random_band_limited(1, g, {1.2, 1.3}, 0.0), Error);
}

TEST_CASE("unit band has energy only on the unit shell") {
  const GridSpec g = grid(16);
  const auto f = random_band_limited(3, g, {1.0, 1.0}, 0.0);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const double k = std::hypot(g.wavenumber(1, i1), g.wavenumber(2, i2));
      if (std::abs(k - 1.0) > 1e-12) CHECK(std::abs(f.at(i1, i2)) == 0.0);
    }
}

TEST_CASE("multiplier examples") {
  const GridSpec g = grid(16);
  const auto e1 = single_mode(g, 1, 0, 1.0);
  const auto d = apply_multiplier(e1, MultiplierSymbol::dissipation({0.3, 0.7}));
  CHECK(max_diff(d, e1) < 1e-15);
  const auto f = random_band_limited(4, g, {1, 5}, 0.0);
  CHECK(apply_multiplier(f, MultiplierSymbol::isotropic_power(0)) == f);
  const auto m = single_mode(g, 0, 2, 1.0);
  const auto s = apply_multiplier(m, MultiplierSymbol::axis_power(2, 0.5));
  CHECK(std::abs(s.mode(0, 2)) == doctest::Approx(std::sqrt(2.0) * std::abs(m.mode(0, 2))));
  CHECK(MultiplierSymbol::heat_kernel({0.5, 0.5}, 3.0)(0, 0) == 1.0);
  CHECK(MultiplierSymbol::isotropic_power(0)(0, 0) == 1.0);
  CHECK(MultiplierSymbol::isotropic_power(1.5)(0, 0) == 0.0);
}

TEST_CASE("negative powers require a zero mean") {
  const GridSpec g = grid(16);
  auto f = random_band_limited(5, g, {1, 5}, 0.0);
  CHECK_NOTHROW(apply_multiplier(f, MultiplierSymbol::isotropic_power(-1)));
  f.at(0, 0) = 0.5;
  try {
    apply_multiplier(f, MultiplierSymbol::isotropic_power(-1));
    FAIL("expected SingularSymbol");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularSymbol);
  }
}

TEST_CASE("multipliers commute") {
  const GridSpec g = grid(32);
  const auto f = random_band_limited(6, g, {1, 10}, 0.0);
  const auto a = MultiplierSymbol::mixed_power(0.3, 1.2);
  const auto b = MultiplierSymbol::heat_kernel({0.6, 0.8}, 0.7);
  const auto ab = apply_multiplier(apply_multiplier(f, a), b);
  const auto ba = apply_multiplier(apply_multiplier(f, b), a);
  CHECK(max_diff(ab, ba) < 1e-13);
}

TEST_CASE("riesz velocity") {
  const GridSpec g = grid(16);
  SpectralField t(g);
  t.mode(1, 0) = 1.0;
  t.mode(-1, 0) = 1.0;
  const auto v = riesz_velocity(t);
  CHECK(std::abs(v.u1.mode(1, 0)) == 0.0);
  CHECK(std::abs(v.u2.mode(1, 0) - Complex(0, 1)) < 1e-15);

  const auto f = random_band_limited(8, g, {1, 7}, 0.0);
  const auto u = riesz_velocity(f);
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2) {
      const Complex div = g.wavenumber(1, i1) * u.u1.at(i1, i2) +
                          g.wavenumber(2, i2) * u.u2.at(i1, i2);
      const double mag = std::hypot(std::abs(u.u1.at(i1, i2)), std::abs(u.u2.at(i1, i2)));
      CHECK(std::abs(div) <= 1e-14 * std::fmax(mag, 1e-300) * 16);
    }
  const double ul2 = std::hypot(sobolev_norm(u.u1, 0), sobolev_norm(u.u2, 0));
  CHECK(ul2 == doctest::Approx(sobolev_norm(f, 0)).epsilon(1e-13));
  CHECK(u.u1.hermitian_defect() < 1e-15);
}

TEST_CASE("norms") {
  const GridSpec g = grid(32, 2 * M_PI, 3.0);
  const SpectralField zero(g);
  CHECK(sobolev_norm(zero, 1.3) == 0.0);
  CHECK(lp_norm(zero, 1.0) == 0.0);
  CHECK(lp_norm(zero, INFINITY) == 0.0);

  const auto m = single_mode(grid(32), 1, 0, 2.5);
  CHECK(sobolev_norm(m, 0) == doctest::Approx(2.5));
  CHECK(sobolev_norm(m, 3.7) == doctest::Approx(2.5));
  // a cos(x) with ||.||_2 = 2.5 on the 2pi square has max 2.5*sqrt(2)/(2pi).
  CHECK(lp_norm(m, INFINITY) == doctest::Approx(2.5 * std::sqrt(2.0) / (2 * M_PI)).epsilon(1e-13));

  const auto f = random_band_limited(9, g, {1, 8}, -0.5, 3.0);
  CHECK(lp_norm(f, 2.0) == doctest::Approx(sobolev_norm(f, 0)).epsilon(1e-12));
  CHECK(inner_product(f, f) == doctest::Approx(9.0).epsilon(1e-12));
  const theory::DissipationParams p{0.6, 0.8};
  const double a1 = anisotropic_norm(f, 1, p.alpha), a2 = anisotropic_norm(f, 2, p.beta);
  CHECK(a1 * a1 + a2 * a2 == doctest::Approx(dissipation_form(f, p)).epsilon(1e-12));
  CHECK(mixed_norm(f, 0.0, 0.0) == doctest::Approx(sobolev_norm(f, 0)).epsilon(1e-14));
  CHECK(mixed_norm(f, 0.7, 0.0) == doctest::Approx(anisotropic_norm(f, 1, 0.7)).epsilon(1e-14));
  // Cauchy-Schwarz on the torus.
  CHECK(lp_norm(f, 1.0) <= std::sqrt(g.area()) * lp_norm(f, 2.0) * (1 + 1e-12));
}

TEST_CASE("dealias") {
  const GridSpec g = grid(16);
  const auto f = random_band_limited(10, g, {1, 4}, 0.0);
  CHECK(dealias(f) == f);
  SpectralField ny(g);
  ny.at(8, 0) = 1.0;
  CHECK(dealias(ny).is_zero());
  const auto h = random_band_limited(11, g, {1, 7}, 0.0);
  CHECK(dealias(dealias(h)) == dealias(h));
}

TEST_CASE("snapshot round trip") {
  const GridSpec g = grid(8, 2.0, 5.0);
  const auto f = random_band_limited(12, g, {1, 3}, 0.0);
  const auto bytes = encode_snapshot(f);
  CHECK(bytes.size() == 4 + 4 * 4 + 3 * 8 + g.size() * 16);
  CHECK(std::string(bytes.data(), 4) == "SQGF");
  CHECK(decode_snapshot(bytes) == f);
  const auto path = (std::filesystem::temp_directory_path() / "sqgad_snap_test.bin").string();
  write_snapshot(f, path);
  CHECK(read_snapshot(path) == f);
  std::filesystem::remove(path);
  auto broken = bytes;
  broken[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(broken), Error);
  broken = bytes;
  broken.pop_back();
  CHECK_THROWS_AS(decode_snapshot(broken), Error);
}
