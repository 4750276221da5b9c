#include "doctest.h"

#include <cmath>

#include "sqgad/error.hpp"
#include "sqgad/solver.hpp"

using namespace sqgad;
using namespace sqgad::spectral;
using namespace sqgad::solver;

namespace {

GridSpec grid(int n) {
  GridSpec g;
  g.n1 = n;
  g.n2 = n;
  return g;
}

SolverConfig config(int n, double alpha, double beta, double dt, double t_end) {
  SolverConfig cfg;
  cfg.params = {alpha, beta};
  cfg.grid = grid(n);
  cfg.dt = dt;
  cfg.t_end = t_end;
  return cfg;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    m = std::fmax(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

}  // namespace

TEST_CASE("scheme names") {
  CHECK(parse_scheme("IF_RK4") == Scheme::IfRk4);
  CHECK(parse_scheme("IF_EULER") == Scheme::IfEuler);
  CHECK(std::string(to_string(Scheme::IfEuler)) == "IF_EULER");
  CHECK_THROWS_AS(parse_scheme("rk45"), Error);
}

TEST_CASE("config validation") {
  auto cfg = config(16, 0.5, 0.5, 0.1, 1.0);
  CHECK_NOTHROW(cfg.validate());
  cfg.dt = 2.0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.dt = 0.1;
  cfg.sample_times = {0.0, 0.5, 0.4};
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.sample_times = {0.0, 1.5};
  CHECK_THROWS_AS(cfg.validate(), Error);
  const auto u = uniform_samples(2.0, 5);
  CHECK(u.size() == 5);
  CHECK(u[2] == 1.0);
  CHECK(u.back() == 2.0);
}

TEST_CASE("nonlinear term: plane waves are steady, zero maps to zero") {
  const GridSpec g = grid(32);
  const auto m = single_mode(g, 2, 3, 1.0, 0.4);
  CHECK(sobolev_norm(nonlinear_term(m), 0) < 1e-13);
  CHECK(nonlinear_term(SpectralField(g)).is_zero());
}

TEST_CASE("nonlinear term is skew on the truncated space") {
  const GridSpec g = grid(32);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto f = random_band_limited(seed, g, {1, 15}, -0.5);
    const double ratio = std::abs(inner_product(nonlinear_term(f), f)) /
                         std::pow(sobolev_norm(f, 0), 2);
    CHECK(ratio <= 1e-12);
  }
}

TEST_CASE("nonlinear term agrees with a direct convolution") {
  // Triad of modes: the product is computed by hand in Fourier space.
  const GridSpec g = grid(16);
  const double c = 1.0 / std::sqrt(g.area());
  SpectralField t(g);
  t.mode(1, 0) = 0.7;
  t.mode(-1, 0) = 0.7;
  t.mode(0, 2) = Complex(0.2, 0.3);
  t.mode(0, -2) = Complex(0.2, -0.3);
  const auto n = nonlinear_term(t);
  const auto u = riesz_velocity(t);
  // -(u.grad theta)^ at k = sum over p + q = k of u(p).(i q) theta(q), scaled by
  // c because the product of two stored coefficient arrays carries sqrt(A).
  auto expected = [&](int k1, int k2) {
    Complex sum = 0.0;
    for (int p1 = -2; p1 <= 2; ++p1)
      for (int p2 = -2; p2 <= 2; ++p2) {
        const int q1 = k1 - p1, q2 = k2 - p2;
        if (std::abs(q1) > 2 || std::abs(q2) > 2) continue;
        sum += u.u1.mode(p1, p2) * Complex(0, q1) * t.mode(q1, q2) +
               u.u2.mode(p1, p2) * Complex(0, q2) * t.mode(q1, q2);
      }
    return -c * sum;
  };
  for (int k1 = -3; k1 <= 3; ++k1)
    for (int k2 = -4; k2 <= 4; ++k2)
      CHECK(std::abs(n.mode(k1, k2) - expected(k1, k2)) < 1e-14);
  CHECK(std::abs(n.mode(1, 2)) > 1e-3);
}

TEST_CASE("linear mode reproduces the heat kernel") {
  auto cfg = config(32, 0.6, 0.8, 0.05, 1.0);
  cfg.nonlinear = false;
  cfg.record_spectra = true;
  cfg.sample_times = uniform_samples(1.0, 6);
  const auto f = random_band_limited(3, cfg.grid, {1, 10}, 0.0);
  const auto one = step(f, cfg);
  const auto exact = apply_multiplier(f, MultiplierSymbol::heat_kernel(cfg.params, cfg.dt));
  CHECK(max_diff(one, exact) < 1e-14);
  const auto traj = evolve(f, cfg);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto h = apply_multiplier(f, MultiplierSymbol::heat_kernel(cfg.params, traj.times[i]));
    CHECK(sobolev_norm(traj.spectra[i] - h, 0) <= 1e-12 * sobolev_norm(h, 0));
  }
  CHECK(lp_monotonicity_check(traj, 2.0) <= 1.0);
}

TEST_CASE("zero data stays zero") {
  auto cfg = config(16, 0.5, 0.5, 0.1, 1.0);
  cfg.sample_times = uniform_samples(1.0, 3);
  const SpectralField zero(cfg.grid);
  CHECK(step(zero, cfg).is_zero());
  const auto traj = evolve(zero, cfg);
  for (double v : traj.l2) CHECK(v == 0.0);
  for (double r : energy_identity_residual(traj)) CHECK(r == 0.0);
  CHECK(max_principle_check(traj) == 1.0);
}

TEST_CASE("mean mode must vanish") {
  auto cfg = config(16, 0.5, 0.5, 0.1, 1.0);
  auto f = random_band_limited(1, cfg.grid, {1, 4}, 0.0);
  f.at(0, 0) = 0.1;
  CHECK_THROWS_AS(evolve(f, cfg), Error);
}

TEST_CASE("grid mismatch is rejected") {
  auto cfg = config(16, 0.5, 0.5, 0.1, 1.0);
  const auto f = random_band_limited(1, grid(32), {1, 4}, 0.0);
  CHECK_THROWS_AS(step(f, cfg), Error);
}

TEST_CASE("blow-up guard reports the time") {
  auto cfg = config(16, 0.5, 0.5, 0.5, 2.0);
  cfg.sample_times = {0.0, 2.0};
  auto f = random_band_limited(2, cfg.grid, {1, 5}, 0.0);
  f *= 1e160;
  try {
    evolve(f, cfg);
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= 2.0);
  }
}

TEST_CASE("nonlinear run: energy decreases, deterministic output") {
  auto cfg = config(32, 0.6, 0.8, 0.01, 1.0);
  cfg.sample_times = uniform_samples(1.0, 11);
  const auto f = random_band_limited(11, cfg.grid, {1, 6}, 0.0, 2.0);
  const auto a = evolve(f, cfg);
  const auto b = evolve(f, cfg);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.steps == 100);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a.l2[i] < a.l2[i - 1]);
  CHECK(max_l2_squared_increase(a) <= 0.0);
  CHECK(a.column_names().front() == "t");
  CHECK(a.column_names()[2] == "lp_1");
  CHECK(a.column_names()[4] == "lp_inf");
  CHECK(a.column_names()[5] == "hs_1");
  CHECK(a.column_names().back() == "ddiss_dt");
}

TEST_CASE("recorded dissipation derivative matches finite differences") {
  auto cfg = config(32, 0.6, 0.8, 1e-5, 2e-5);
  cfg.sample_times = {0.0, 1e-5, 2e-5};
  const auto f = random_band_limited(12, cfg.grid, {1, 6}, 0.0, 3.0);
  const auto traj = evolve(f, cfg);
  const auto d = [&](std::size_t i) { return traj.diss_x1[i] + traj.diss_x2[i]; };
  const double fd = (d(2) - d(0)) / 2e-5;
  CHECK(traj.diss_rate[1] == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("energy residual shrinks with the sample spacing") {
  auto cfg = config(32, 0.6, 0.8, 1e-3, 0.2);
  const auto f = random_band_limited(13, cfg.grid, {1, 6}, 0.0, 2.0);
  auto worst = [&](std::size_t count, EnergyQuadrature rule) {
    cfg.sample_times = uniform_samples(0.2, count);
    double w = 0.0;
    for (double r : energy_identity_residual(evolve(f, cfg), rule)) w = std::fmax(w, r);
    return w;
  };
  const double t1 = worst(11, EnergyQuadrature::Trapezoid);
  const double t2 = worst(21, EnergyQuadrature::Trapezoid);
  const double c1 = worst(11, EnergyQuadrature::CorrectedTrapezoid);
  const double c2 = worst(21, EnergyQuadrature::CorrectedTrapezoid);
  MESSAGE("trapezoid " << t1 << " " << t2 << " corrected " << c1 << " " << c2);
  CHECK(c1 < t1);
  CHECK(std::log2(t1 / t2) > 1.5);
  CHECK(std::log2(c1 / c2) > 3.0);
}

TEST_CASE("per-step energy balance converges at fourth order in dt") {
  auto cfg = config(32, 0.6, 0.8, 2e-2, 1.0);
  cfg.sample_times = {0.0, 1.0};
  const auto f = random_band_limited(21, cfg.grid, {1, 4}, 0.0, 5.0);
  auto balance = [&](double dt) {
    cfg.dt = dt;
    EnergyMonitor m(f, cfg);
    evolve(f, cfg, m.observer());
    CHECK(m.steps() == static_cast<std::size_t>(std::lround(1.0 / dt)));
    CHECK(m.worst_growth() <= 0.0);
    return m.worst_balance();
  };
  const double b1 = balance(2e-2);
  const double b2 = balance(1e-2);
  const double b3 = balance(5e-3);
  MESSAGE("balance " << b1 << " " << b2 << " " << b3);
  CHECK(std::log2(b1 / b2) > 3.5);
  CHECK(std::log2(b2 / b3) > 3.5);

  // Zero data: nothing to balance.
  const auto zero = SpectralField(cfg.grid);
  EnergyMonitor idle(zero, cfg);
  idle.observe(zero, 0.1);
  CHECK(idle.worst_balance() == 0.0);
}

TEST_CASE("convergence orders of the two schemes") {
  auto base = config(32, 0.6, 0.8, 0.1, 0.8);
  base.lp_exponents.clear();
  base.sobolev_orders.clear();
  base.record_spectra = true;
  base.sample_times = {0.8};
  const auto f = random_band_limited(21, base.grid, {1, 6}, 0.0, 8.0);
  auto run = [&](Scheme s, double dt) {
    auto c = base;
    c.scheme = s;
    c.dt = dt;
    return evolve(f, c).spectra.back();
  };
  const auto ref = run(Scheme::IfRk4, 0.8 / 1024);
  auto order = [&](Scheme s, double dt) {
    const double e1 = sobolev_norm(run(s, dt) - ref, 0);
    const double e2 = sobolev_norm(run(s, dt / 2) - ref, 0);
    return std::log2(e1 / e2);
  };
  CHECK(order(Scheme::IfEuler, 0.8 / 32) == doctest::Approx(1.0).epsilon(0.3));
  CHECK(order(Scheme::IfRk4, 0.8 / 16) == doctest::Approx(4.0).epsilon(0.075));
}

TEST_CASE("CFL stepping lands on the sample times") {
  auto cfg = config(32, 0.6, 0.8, 0.05, 1.0);
  cfg.fixed_dt = false;
  cfg.sample_times = {0.0, 0.33, 1.0};
  const auto f = random_band_limited(4, cfg.grid, {1, 6}, 0.0, 20.0);
  CHECK(cfl_time_step(f, cfg) > 0.0);
  CHECK(std::isinf(cfl_time_step(SpectralField(cfg.grid), cfg)));
  const auto traj = evolve(f, cfg);
  CHECK(traj.times[1] == 0.33);
  CHECK(traj.times[2] == 1.0);
}

TEST_CASE("difference run: plane wave has no difference, bound holds on random data") {
  auto cfg = config(32, 0.6, 0.8, 0.02, 0.4);
  cfg.sample_times = uniform_samples(0.4, 5);
  const auto m = single_mode(cfg.grid, 1, 2, 1.0);
  const auto single = difference_run(m, cfg);
  for (double w : single.w_l2) CHECK(w <= 1e-12);
  CHECK(single.violations == 0);

  const auto zero = difference_run(SpectralField(cfg.grid), cfg);
  for (double w : zero.w_l2) CHECK(w == 0.0);

  const auto f = random_band_limited(5, cfg.grid, {1, 6}, 0.0, 3.0);
  const auto rep = difference_run(f, cfg);
  CHECK(rep.violations == 0);
  CHECK(rep.checked == 5 * (cfg.grid.size() - 1));
  CHECK(rep.time_error > 0.0);
  CHECK(rep.q_tol >= 3.0 * rep.time_error);
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    CHECK(rep.w_l2[i] <= rep.theta_l2[i] + rep.linear_l2[i]);
    CHECK(rep.worst_ratio[i] <= 1.0);
  }
  CHECK(rep.w_l2.back() > 0.0);
  const auto text = rep.to_csv();
  CHECK(text.rfind("t,w_l2,theta_l2,linear_l2,transport_integral,worst_ratio\n", 0) == 0);
}
