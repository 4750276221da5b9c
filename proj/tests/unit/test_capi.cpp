#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>
#include <vector>

#include "sqgad/sqgad.h"

namespace {

struct Report {
  sqg_report* r = nullptr;
  ~Report() { sqg_report_free(r); }
};

nlohmann::json summary(const sqg_report* r) { return nlohmann::json::parse(sqg_report_json(r)); }

std::string artifact(const sqg_report* r, const std::string& name) {
  for (size_t i = 0; i < sqg_report_artifact_count(r); ++i) {
    if (name == sqg_report_artifact_name(r, i)) {
      size_t size = 0;
      const char* data = sqg_report_artifact_data(r, i, &size);
      return std::string(data, size);
    }
  }
  return {};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sqgad_capi_" + name);
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(sqg_version()).size() > 0);
  CHECK(std::string(sqg_status_name(SQG_OK)) == "OK");
  CHECK(std::string(sqg_status_name(SQG_CONFIG)) == "CONFIG");
  CHECK(std::string(sqg_status_name(static_cast<sqg_status>(55))) == "UNKNOWN");
  CHECK(std::string(sqg_status_name(SQG_BUFFER_TOO_SMALL)) == "BUFFER_TOO_SMALL");
  CHECK(sqg_derive_seed(1, "a") == sqg_derive_seed(1, "a"));
  CHECK(sqg_derive_seed(1, "a") != sqg_derive_seed(1, "b"));
}

TEST_CASE("theory through the C interface") {
  double e = 0;
  REQUIRE(sqg_decay_exponent(1, 1, 0, 1, &e) == SQG_OK);
  CHECK(e == doctest::Approx(0.5).epsilon(1e-15));
  REQUIRE(sqg_decay_exponent(0.6, 0.9, 1, 1, &e) == SQG_OK);
  CHECK(e == doctest::Approx(1.25).epsilon(1e-14));

  int admissible = -1;
  sqg_region_branch branch{};
  REQUIRE(sqg_regularity_region(0.3, 0.7, &admissible, &branch) == SQG_OK);
  CHECK(admissible == 1);
  CHECK(branch == SQG_BRANCH_LOW_ALPHA);
  REQUIRE(sqg_regularity_region(1, 1, &admissible, &branch) == SQG_OK);
  CHECK(branch == SQG_BRANCH_COMPLEMENT);

  CHECK(sqg_decay_exponent(0, 1, 0, 1, &e) == SQG_INVALID_ARGUMENT);
  CHECK(std::string(sqg_last_error()).size() > 0);
  CHECK(sqg_decay_exponent(1, 1, 0, 1, nullptr) == SQG_NULL_POINTER);
  REQUIRE(sqg_decay_exponent(1, 1, 0, 1, &e) == SQG_OK);
  CHECK(std::string(sqg_last_error()).empty());
}

TEST_CASE("field handles") {
  sqg_grid_desc g;
  sqg_grid_default(&g);
  g.n1 = g.n2 = 16;
  sqg_field* f = nullptr;
  REQUIRE(sqg_field_random(&g, 7, 1, 4, 0, 2.0, &f) == SQG_OK);
  double l2 = 0;
  REQUIRE(sqg_field_norm(f, SQG_NORM_SOBOLEV, 0, &l2) == SQG_OK);
  CHECK(l2 == doctest::Approx(2.0).epsilon(1e-13));

  size_t count = 0;
  CHECK(sqg_field_coeffs(f, nullptr, 0, &count) == SQG_BUFFER_TOO_SMALL);
  CHECK(count == 256);
  std::vector<double> c(2 * count);
  REQUIRE(sqg_field_coeffs(f, c.data(), c.size(), &count) == SQG_OK);

  const auto path = temp_path("field.sqgf").string();
  REQUIRE(sqg_field_save(f, path.c_str()) == SQG_OK);
  sqg_field* back = nullptr;
  REQUIRE(sqg_field_load(path.c_str(), &back) == SQG_OK);
  std::vector<double> d(c.size());
  REQUIRE(sqg_field_coeffs(back, d.data(), d.size(), &count) == SQG_OK);
  CHECK(c == d);
  std::filesystem::remove(path);

  sqg_field* later = nullptr;
  REQUIRE(sqg_field_evolve_linear(f, 0.5, 0.5, 1.0, &later) == SQG_OK);
  double l2_later = 0;
  REQUIRE(sqg_field_norm(later, SQG_NORM_SOBOLEV, 0, &l2_later) == SQG_OK);
  CHECK(l2_later < l2);

  CHECK(sqg_field_load(temp_path("missing").string().c_str(), &back) == SQG_IO);
  sqg_field_free(f);
  sqg_field_free(back);
  sqg_field_free(later);
  sqg_field_free(nullptr);
}

TEST_CASE("trajectory handles") {
  sqg_grid_desc g;
  sqg_grid_default(&g);
  g.n1 = g.n2 = 16;
  sqg_field* f = nullptr;
  REQUIRE(sqg_field_random(&g, 3, 1, 4, 0, 1.0, &f) == SQG_OK);
  sqg_solver_config cfg;
  sqg_solver_config_default(&cfg);
  cfg.alpha = 0.6;
  cfg.beta = 0.8;
  cfg.dt = 1e-2;
  cfg.t_end = 0.5;
  cfg.sample_count = 6;
  const double lp[] = {2.0, INFINITY};
  const double hs[] = {1.0};
  sqg_trajectory* t = nullptr;
  REQUIRE(sqg_evolve(f, &cfg, lp, 2, hs, 1, &t) == SQG_OK);
  CHECK(sqg_trajectory_rows(t) == 6);
  REQUIRE(sqg_trajectory_columns(t) > 2);
  CHECK(std::string(sqg_trajectory_column_name(t, 0)) == "t");
  std::vector<double> times(6);
  REQUIRE(sqg_trajectory_column(t, 0, times.data(), times.size()) == SQG_OK);
  CHECK(times.back() == doctest::Approx(0.5));
  CHECK(sqg_trajectory_column(t, 999, times.data(), times.size()) == SQG_OUT_OF_RANGE);

  size_t count = 0;
  std::vector<double> res(5);
  REQUIRE(sqg_trajectory_energy_residuals(t, res.data(), res.size(), &count) == SQG_OK);
  CHECK(count == 5);
  double ratio = 0;
  REQUIRE(sqg_trajectory_lp_ratio(t, INFINITY, &ratio) == SQG_OK);
  CHECK(ratio < 1.01);
  CHECK(sqg_trajectory_lp_ratio(t, 3.0, &ratio) != SQG_OK);
  CHECK(std::string(sqg_trajectory_csv(t)).rfind("t,", 0) == 0);
  sqg_trajectory_free(t);
  sqg_field_free(f);
}

TEST_CASE("command schemas") {
  REQUIRE(sqg_command_count() == 8);
  for (size_t i = 0; i < sqg_command_count(); ++i) {
    const char* json = nullptr;
    REQUIRE(sqg_command_schema(sqg_command_name(i), &json) == SQG_OK);
    const auto schema = nlohmann::json::parse(json);
    CHECK(schema["command"] == sqg_command_name(i));
    CHECK(schema["keys"].size() >= 5);
  }
  const char* json = nullptr;
  CHECK(sqg_command_schema("nope", &json) == SQG_CONFIG);
}

TEST_CASE("rates command") {
  Report r;
  REQUIRE(sqg_run("rates", R"({"alpha": [1, 0.5], "beta": "1, 0.5", "s": 0, "p": [1]})", &r.r) ==
          SQG_OK);
  CHECK(sqg_report_passed(r.r) == 1);
  const auto s = summary(r.r);
  CHECK(s["results"]["rows"] == 4);
  CHECK(s["config"]["alpha"] == nlohmann::json::array({1.0, 0.5}));
  const std::string csv = artifact(r.r, "rates.csv");
  CHECK(csv.find("\n1,1,0,1,0,COMPLEMENT,0.5,") != std::string::npos);
}

TEST_CASE("configuration errors") {
  Report r;
  CHECK(sqg_run("rates", R"({"alhpa": 1})", &r.r) == SQG_CONFIG);
  CHECK(std::string(sqg_last_error()).find("alhpa") != std::string::npos);
  CHECK(sqg_run("rates", R"({"alpha": "x"})", &r.r) == SQG_CONFIG);
  CHECK(sqg_run("rates", "{not json", &r.r) == SQG_CONFIG);
  CHECK(sqg_run("nope", nullptr, &r.r) == SQG_CONFIG);
  CHECK(sqg_run("fit", R"({"theory": 2})", &r.r) == SQG_CONFIG);
  CHECK(std::string(sqg_last_error()).find("series") != std::string::npos);
  CHECK(sqg_run("rates", R"({"alpha": 2})", &r.r) == SQG_INVALID_ARGUMENT);
  CHECK(r.r == nullptr);
}

TEST_CASE("fit command") {
  const auto path = temp_path("series.csv");
  {
    std::ofstream out(path);
    out << "t,value\n";
    for (int i = 0; i < 40; ++i) {
      const double t = std::pow(10.0, 4.0 * i / 39.0);
      out << t << ',' << std::pow(1 + t, -2.0) << '\n';
    }
  }
  const std::string cfg = R"({"series": ")" + path.string() + R"(", "theory": 2})";
  Report r;
  REQUIRE(sqg_run("fit", cfg.c_str(), &r.r) == SQG_OK);
  CHECK(sqg_report_passed(r.r) == 1);
  Report bad;
  const std::string wrong = R"({"series": ")" + path.string() + R"(", "theory": 1})";
  REQUIRE(sqg_run("fit", wrong.c_str(), &bad.r) == SQG_OK);
  CHECK(sqg_report_passed(bad.r) == 0);
  CHECK(summary(bad.r)["failures"] == nlohmann::json::array({"decay_rate"}));
  std::filesystem::remove(path);

  Report missing;
  const std::string gone = R"({"series": ")" + path.string() + R"(", "theory": 1})";
  CHECK(sqg_run("fit", gone.c_str(), &missing.r) == SQG_IO);
}

TEST_CASE("runs are deterministic") {
  const char* cfg = R"({"n1": 16, "n2": 16, "t_end": 0.2, "dt": 0.01, "samples": 5, "seed": 9})";
  Report a, b;
  REQUIRE(sqg_run("simulate", cfg, &a.r) == SQG_OK);
  REQUIRE(sqg_run("simulate", cfg, &b.r) == SQG_OK);
  CHECK(std::string(sqg_report_json(a.r)) == sqg_report_json(b.r));
  CHECK(artifact(a.r, "trajectory.csv") == artifact(b.r, "trajectory.csv"));
  CHECK(sqg_report_passed(a.r) == 1);
}

TEST_CASE("linear-decay, splitting and ineq commands") {
  Report lin;
  REQUIRE(sqg_run("linear-decay", R"({"alpha": 0.5, "beta": 0.5, "s": [0]})", &lin.r) == SQG_OK);
  CHECK(sqg_report_passed(lin.r) == 1);
  CHECK(artifact(lin.r, "linear_s0.csv").rfind("t,norm,est_error\n", 0) == 0);

  Report split;
  REQUIRE(sqg_run("splitting", R"({"alpha": [0.5, 0.7], "beta": [0.3], "rho": [1], "iso_s": [1]})",
                  &split.r) == SQG_OK);
  CHECK(sqg_report_passed(split.r) == 1);
  CHECK(summary(split.r)["results"]["rows"] == 8);

  Report ineq;
  REQUIRE(sqg_run("ineq",
                  R"({"n": 32, "samples": 20, "ids": "ANISO_INTERPOLATION, ODE_COMPARISON, TIME_CONVOLUTION"})",
                  &ineq.r) == SQG_OK);
  CHECK(sqg_report_passed(ineq.r) == 1);
  CHECK(sqg_report_artifact_count(ineq.r) == 3);
}
