#include "sqgad/sqgad.h"

#include <cmath>
#include <map>
#include <mutex>
#include <new>
#include <string>
#include <vector>

#include "runs.hpp"
#include "sqgad/error.hpp"
#include "sqgad/linear.hpp"
#include "sqgad/seed.hpp"
#include "sqgad/solver.hpp"
#include "sqgad/spectral.hpp"
#include "sqgad/theory.hpp"

struct sqg_field {
  sqgad::spectral::SpectralField f;
};

struct sqg_trajectory {
  sqgad::solver::TrajectoryRecord rec;
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::string csv;
};

struct sqg_report {
  sqgad::runs::RunResult result;
  std::string json;
};

namespace {

thread_local std::string last_error;

sqg_status record(sqg_status status, const std::string& what) {
  last_error = what;
  return status;
}

template <class Fn>
sqg_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return SQG_OK;
  } catch (const sqgad::Error& e) {
    return record(static_cast<sqg_status>(static_cast<int>(e.code())), e.what());
  } catch (const nlohmann::json::exception& e) {
    return record(SQG_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return record(SQG_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return record(SQG_INTERNAL, e.what());
  } catch (...) {
    return record(SQG_INTERNAL, "unknown exception");
  }
}

#define SQG_REQUIRE_PTR(p)                                   \
  do {                                                       \
    if (!(p)) return record(SQG_NULL_POINTER, #p " is null"); \
  } while (0)

sqgad::spectral::GridSpec to_grid(const sqg_grid_desc& g) {
  sqgad::spectral::GridSpec out;
  out.n1 = g.n1;
  out.n2 = g.n2;
  out.l1 = g.l1;
  out.l2 = g.l2;
  out.dealias_fraction = g.dealias_fraction;
  out.validate();
  return out;
}

}  // namespace

extern "C" {

const char* sqg_version(void) { return SQGAD_VERSION; }

const char* sqg_status_name(sqg_status status) {
  switch (status) {
    case SQG_OK: return "OK";
    case SQG_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case SQG_PRECONDITION_VIOLATED: return "PRECONDITION_VIOLATED";
    case SQG_SINGULAR_SYMBOL: return "SINGULAR_SYMBOL";
    case SQG_EMPTY_BAND: return "EMPTY_BAND";
    case SQG_NON_FINITE: return "NON_FINITE";
    case SQG_QUADRATURE_NO_CONVERGENCE: return "QUADRATURE_NO_CONVERGENCE";
    case SQG_ZERO_FIELD: return "ZERO_FIELD";
    case SQG_DEGENERATE_SYSTEM: return "DEGENERATE_SYSTEM";
    case SQG_HYPOTHESIS_VIOLATED: return "HYPOTHESIS_VIOLATED";
    case SQG_INSUFFICIENT_SAMPLES: return "INSUFFICIENT_SAMPLES";
    case SQG_NON_POSITIVE_VALUE: return "NON_POSITIVE_VALUE";
    case SQG_IO: return "IO";
    case SQG_CONFIG: return "CONFIG";
    case SQG_NULL_POINTER: return "NULL_POINTER";
    case SQG_BUFFER_TOO_SMALL: return "BUFFER_TOO_SMALL";
    case SQG_OUT_OF_RANGE: return "OUT_OF_RANGE";
    case SQG_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* sqg_last_error(void) { return last_error.c_str(); }

uint64_t sqg_derive_seed(uint64_t seed, const char* stream) {
  return sqgad::derive_seed(seed, stream ? stream : "");
}

sqg_status sqg_regularity_region(double alpha, double beta, int* admissible,
                                 sqg_region_branch* branch) {
  SQG_REQUIRE_PTR(admissible);
  SQG_REQUIRE_PTR(branch);
  return guarded([&] {
    const auto v = sqgad::theory::regularity_region({alpha, beta});
    *admissible = v.admissible ? 1 : 0;
    *branch = static_cast<sqg_region_branch>(static_cast<int>(v.branch));
  });
}

sqg_status sqg_decay_exponent(double alpha, double beta, double s, double p, double* out) {
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = sqgad::theory::decay_exponent({alpha, beta}, {s, p}); });
}

sqg_status sqg_difference_exponent(double alpha, double beta, double p, double* out) {
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = sqgad::theory::difference_exponent({alpha, beta}, p); });
}

sqg_status sqg_difference_exponent_l2only(double alpha, double beta, double* out) {
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = sqgad::theory::difference_exponent_l2only({alpha, beta}); });
}

sqg_status sqg_difference_critical_p(double alpha, double beta, double* out) {
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = sqgad::theory::difference_critical_p({alpha, beta}); });
}

sqg_status sqg_critical_exponent(double s, double p, double* out) {
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = sqgad::theory::critical_exponent(s, p); });
}

sqg_status sqg_small_data_order(double alpha, double beta, double* out) {
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = sqgad::theory::small_data_sobolev_order({alpha, beta}); });
}

void sqg_grid_default(sqg_grid_desc* grid) {
  if (!grid) return;
  const sqgad::spectral::GridSpec g;
  *grid = {g.n1, g.n2, g.l1, g.l2, g.dealias_fraction};
}

sqg_status sqg_field_zero(const sqg_grid_desc* grid, sqg_field** out) {
  SQG_REQUIRE_PTR(grid);
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = new sqg_field{sqgad::spectral::SpectralField(to_grid(*grid))}; });
}

sqg_status sqg_field_random(const sqg_grid_desc* grid, uint64_t seed, double k_lo, double k_hi,
                            double slope, double l2_norm, sqg_field** out) {
  SQG_REQUIRE_PTR(grid);
  SQG_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new sqg_field{sqgad::spectral::random_band_limited(seed, to_grid(*grid),
                                                              {k_lo, k_hi}, slope, l2_norm)};
  });
}

sqg_status sqg_field_single_mode(const sqg_grid_desc* grid, int m1, int m2, double amplitude,
                                 double phase, sqg_field** out) {
  SQG_REQUIRE_PTR(grid);
  SQG_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new sqg_field{sqgad::spectral::single_mode(to_grid(*grid), m1, m2, amplitude, phase)};
  });
}

sqg_status sqg_field_load(const char* path, sqg_field** out) {
  SQG_REQUIRE_PTR(path);
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = new sqg_field{sqgad::spectral::read_snapshot(path)}; });
}

sqg_status sqg_field_save(const sqg_field* field, const char* path) {
  SQG_REQUIRE_PTR(field);
  SQG_REQUIRE_PTR(path);
  return guarded([&] { sqgad::spectral::write_snapshot(field->f, path); });
}

void sqg_field_free(sqg_field* field) { delete field; }

sqg_status sqg_field_grid(const sqg_field* field, sqg_grid_desc* out) {
  SQG_REQUIRE_PTR(field);
  SQG_REQUIRE_PTR(out);
  const auto& g = field->f.grid();
  *out = {g.n1, g.n2, g.l1, g.l2, g.dealias_fraction};
  last_error.clear();
  return SQG_OK;
}

sqg_status sqg_field_coeffs(const sqg_field* field, double* re_im, size_t capacity,
                            size_t* count) {
  SQG_REQUIRE_PTR(field);
  SQG_REQUIRE_PTR(count);
  const auto c = field->f.coeffs();
  *count = c.size();
  if (capacity < 2 * c.size() || !re_im)
    return record(SQG_BUFFER_TOO_SMALL, "need " + std::to_string(2 * c.size()) + " doubles");
  for (size_t i = 0; i < c.size(); ++i) {
    re_im[2 * i] = c[i].real();
    re_im[2 * i + 1] = c[i].imag();
  }
  last_error.clear();
  return SQG_OK;
}

sqg_status sqg_field_set_coeffs(sqg_field* field, const double* re_im, size_t count) {
  SQG_REQUIRE_PTR(field);
  SQG_REQUIRE_PTR(re_im);
  auto c = field->f.coeffs();
  if (count != c.size())
    return record(SQG_INVALID_ARGUMENT, "expected " + std::to_string(c.size()) + " coefficients");
  for (size_t i = 0; i < c.size(); ++i) c[i] = {re_im[2 * i], re_im[2 * i + 1]};
  last_error.clear();
  return SQG_OK;
}

sqg_status sqg_field_norm(const sqg_field* field, sqg_norm_kind kind, double param,
                          double* out) {
  SQG_REQUIRE_PTR(field);
  SQG_REQUIRE_PTR(out);
  return guarded([&] {
    namespace sp = sqgad::spectral;
    switch (kind) {
      case SQG_NORM_SOBOLEV: *out = sp::sobolev_norm(field->f, param); return;
      case SQG_NORM_LP: *out = sp::lp_norm(field->f, param); return;
      case SQG_NORM_AXIS1: *out = sp::anisotropic_norm(field->f, 1, param); return;
      case SQG_NORM_AXIS2: *out = sp::anisotropic_norm(field->f, 2, param); return;
    }
    sqgad::fail(sqgad::ErrorCode::InvalidArgument, "unknown norm kind");
  });
}

sqg_status sqg_field_evolve_linear(const sqg_field* field, double alpha, double beta, double t,
                                   sqg_field** out) {
  SQG_REQUIRE_PTR(field);
  SQG_REQUIRE_PTR(out);
  return guarded([&] {
    *out = new sqg_field{sqgad::linear::evolve_linear_torus(field->f, {alpha, beta}, t)};
  });
}

void sqg_solver_config_default(sqg_solver_config* cfg) {
  if (!cfg) return;
  const sqgad::solver::SolverConfig d;
  *cfg = {d.params.alpha, d.params.beta, d.dt, d.t_end, SQG_SCHEME_IF_RK4, 11,
          d.nonlinear ? 1 : 0, d.fixed_dt ? 1 : 0, d.cfl};
}

sqg_status sqg_evolve(const sqg_field* theta0, const sqg_solver_config* cfg, const double* lp,
                      size_t n_lp, const double* hs, size_t n_hs, sqg_trajectory** out) {
  SQG_REQUIRE_PTR(theta0);
  SQG_REQUIRE_PTR(cfg);
  SQG_REQUIRE_PTR(out);
  if ((n_lp && !lp) || (n_hs && !hs)) return record(SQG_NULL_POINTER, "exponent list is null");
  return guarded([&] {
    sqgad::solver::SolverConfig c;
    c.params = {cfg->alpha, cfg->beta};
    c.grid = theta0->f.grid();
    c.dt = cfg->dt;
    c.t_end = cfg->t_end;
    c.scheme = cfg->scheme == SQG_SCHEME_IF_EULER ? sqgad::solver::Scheme::IfEuler
                                                  : sqgad::solver::Scheme::IfRk4;
    c.sample_times = sqgad::solver::uniform_samples(cfg->t_end, cfg->sample_count);
    c.lp_exponents.assign(lp, lp + n_lp);
    c.sobolev_orders.assign(hs, hs + n_hs);
    c.nonlinear = cfg->nonlinear != 0;
    c.fixed_dt = cfg->fixed_dt != 0;
    c.cfl = cfg->cfl;
    auto* t = new sqg_trajectory{sqgad::solver::evolve(theta0->f, c), {}, {}, {}};
    t->names = t->rec.column_names();
    t->columns = t->rec.columns();
    t->csv = t->rec.to_csv();
    *out = t;
  });
}

void sqg_trajectory_free(sqg_trajectory* traj) { delete traj; }

size_t sqg_trajectory_rows(const sqg_trajectory* traj) { return traj ? traj->rec.size() : 0; }

size_t sqg_trajectory_columns(const sqg_trajectory* traj) {
  return traj ? traj->names.size() : 0;
}

const char* sqg_trajectory_column_name(const sqg_trajectory* traj, size_t column) {
  if (!traj || column >= traj->names.size()) return nullptr;
  return traj->names[column].c_str();
}

sqg_status sqg_trajectory_column(const sqg_trajectory* traj, size_t column, double* out,
                                 size_t capacity) {
  SQG_REQUIRE_PTR(traj);
  if (column >= traj->columns.size()) return record(SQG_OUT_OF_RANGE, "no such column");
  const auto& col = traj->columns[column];
  if (!out || capacity < col.size())
    return record(SQG_BUFFER_TOO_SMALL, "need " + std::to_string(col.size()) + " doubles");
  std::copy(col.begin(), col.end(), out);
  last_error.clear();
  return SQG_OK;
}

const char* sqg_trajectory_csv(const sqg_trajectory* traj) {
  return traj ? traj->csv.c_str() : nullptr;
}

sqg_status sqg_trajectory_energy_residuals(const sqg_trajectory* traj, double* out,
                                           size_t capacity, size_t* count) {
  SQG_REQUIRE_PTR(traj);
  SQG_REQUIRE_PTR(count);
  std::vector<double> res;
  const sqg_status st =
      guarded([&] { res = sqgad::solver::energy_identity_residual(traj->rec); });
  if (st != SQG_OK) return st;
  *count = res.size();
  if (!out || capacity < res.size())
    return record(SQG_BUFFER_TOO_SMALL, "need " + std::to_string(res.size()) + " doubles");
  std::copy(res.begin(), res.end(), out);
  return SQG_OK;
}

sqg_status sqg_trajectory_lp_ratio(const sqg_trajectory* traj, double p, double* out) {
  SQG_REQUIRE_PTR(traj);
  SQG_REQUIRE_PTR(out);
  return guarded([&] { *out = sqgad::solver::lp_monotonicity_check(traj->rec, p); });
}

size_t sqg_command_count(void) { return sqgad::runs::command_names().size(); }

const char* sqg_command_name(size_t index) {
  const auto& names = sqgad::runs::command_names();
  return index < names.size() ? names[index].c_str() : nullptr;
}

sqg_status sqg_command_schema(const char* command, const char** json) {
  SQG_REQUIRE_PTR(command);
  SQG_REQUIRE_PTR(json);
  static std::mutex mutex;
  static std::map<std::string, std::string> cache;
  return guarded([&] {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(command);
    if (it == cache.end())
      it = cache.emplace(command, sqgad::runs::command_schema(command).dump()).first;
    *json = it->second.c_str();
  });
}

sqg_status sqg_run(const char* command, const char* config_json, sqg_report** out) {
  SQG_REQUIRE_PTR(command);
  SQG_REQUIRE_PTR(out);
  return guarded([&] {
    nlohmann::json config = nlohmann::json::object();
    if (config_json && *config_json) {
      try {
        config = nlohmann::json::parse(config_json);
      } catch (const nlohmann::json::parse_error& e) {
        sqgad::fail(sqgad::ErrorCode::Config, std::string("configuration JSON: ") + e.what());
      }
    }
    auto* r = new sqg_report{sqgad::runs::run_command(command, config), {}};
    r->json = r->result.summary.dump(2) + "\n";
    *out = r;
  });
}

void sqg_report_free(sqg_report* report) { delete report; }

int sqg_report_passed(const sqg_report* report) { return report && report->result.pass ? 1 : 0; }

const char* sqg_report_json(const sqg_report* report) {
  return report ? report->json.c_str() : nullptr;
}

size_t sqg_report_artifact_count(const sqg_report* report) {
  return report ? report->result.artifacts.size() : 0;
}

const char* sqg_report_artifact_name(const sqg_report* report, size_t index) {
  if (!report || index >= report->result.artifacts.size()) return nullptr;
  return report->result.artifacts[index].name.c_str();
}

const char* sqg_report_artifact_data(const sqg_report* report, size_t index, size_t* size) {
  if (!report || index >= report->result.artifacts.size()) {
    if (size) *size = 0;
    return nullptr;
  }
  const auto& a = report->result.artifacts[index];
  if (size) *size = a.data.size();
  return a.data.data();
}

}  // extern "C"
