#include "runs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "format.hpp"
#include "parallel.hpp"
#include "sqgad/analysis.hpp"
#include "sqgad/error.hpp"
#include "sqgad/inequalities.hpp"
#include "sqgad/linear.hpp"
#include "sqgad/seed.hpp"
#include "sqgad/solver.hpp"
#include "sqgad/spectral.hpp"
#include "sqgad/theory.hpp"

#ifndef SQGAD_VERSION
#define SQGAD_VERSION "0.0.0"
#endif

namespace sqgad::runs {
namespace {

using detail::format_double;
using detail::format_label;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586;

[[noreturn]] void config_error(const std::string& what) {
  fail(ErrorCode::Config, what);
}

struct Key {
  std::string name;
  std::string type;
  Json def;
  std::string doc;
};

Json real_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json reals_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(real_json(x));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_real(const nlohmann::json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = trim(v.get<std::string>());
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (!s.empty() && end == s.c_str() + s.size() && !std::isnan(x)) return x;
  }
  config_error("key '" + key + "': expected a real number, got " + v.dump());
}

long long to_int(const nlohmann::json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<long long>(x);
  }
  if (v.is_string()) {
    const std::string s = trim(v.get<std::string>());
    char* end = nullptr;
    const long long x = std::strtoll(s.c_str(), &end, 10);
    if (!s.empty() && end == s.c_str() + s.size()) return x;
  }
  config_error("key '" + key + "': expected an integer, got " + v.dump());
}

bool to_bool(const nlohmann::json& v, const std::string& key) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_number_integer()) {
    const auto x = v.get<long long>();
    if (x == 0 || x == 1) return x == 1;
  }
  if (v.is_string()) {
    const std::string s = trim(v.get<std::string>());
    if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
    if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  }
  config_error("key '" + key + "': expected true or false, got " + v.dump());
}

std::vector<double> to_reals(const nlohmann::json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_array()) {
    for (const auto& x : v) out.push_back(to_real(x, key));
  } else if (v.is_string()) {
    for (const auto& x : split_list(v.get<std::string>())) out.push_back(to_real(x, key));
  } else {
    out.push_back(to_real(v, key));
  }
  return out;
}

std::vector<std::string> to_strings(const nlohmann::json& v, const std::string& key) {
  std::vector<std::string> out;
  if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_string()) config_error("key '" + key + "': expected strings");
      out.push_back(trim(x.get<std::string>()));
    }
  } else if (v.is_string()) {
    out = split_list(v.get<std::string>());
  } else {
    config_error("key '" + key + "': expected a list of names, got " + v.dump());
  }
  return out;
}

Json normalize(const Key& k, const nlohmann::json& v) {
  if (k.type == "real") return real_json(to_real(v, k.name));
  if (k.type == "int") return to_int(v, k.name);
  if (k.type == "bool") return to_bool(v, k.name);
  if (k.type == "real_list") return reals_json(to_reals(v, k.name));
  if (k.type == "string_list") return to_strings(v, k.name);
  if (!v.is_string()) config_error("key '" + k.name + "': expected a string, got " + v.dump());
  return v.get<std::string>();
}

class Config {
 public:
  Config(const std::string& command, const std::vector<Key>& keys,
         const nlohmann::json& given) {
    if (!given.is_null() && !given.is_object())
      config_error("configuration for '" + command + "' must be an object");
    if (given.is_object()) {
      for (const auto& item : given.items()) {
        const bool known = std::any_of(keys.begin(), keys.end(), [&](const Key& k) {
          return k.name == item.key();
        });
        if (!known) config_error("unknown key '" + item.key() + "' for command '" + command + "'");
      }
    }
    for (const auto& k : keys) {
      const bool present = given.is_object() && given.contains(k.name);
      const nlohmann::json v = present ? given.at(k.name) : nlohmann::json(k.def);
      if (v.is_null()) config_error("missing required key '" + k.name + "' for command '" + command + "'");
      resolved_[k.name] = normalize(k, v);
    }
  }

  const Json& resolved() const { return resolved_; }
  double real(const std::string& k) const { return to_real(resolved_.at(k), k); }
  long long integer(const std::string& k) const { return to_int(resolved_.at(k), k); }
  int small_int(const std::string& k, long long lo, long long hi) const {
    const long long v = integer(k);
    if (v < lo || v > hi)
      config_error("key '" + k + "' must lie in [" + std::to_string(lo) + ", " +
                   std::to_string(hi) + "]");
    return static_cast<int>(v);
  }
  bool flag(const std::string& k) const { return resolved_.at(k).get<bool>(); }
  std::string str(const std::string& k) const { return resolved_.at(k).get<std::string>(); }
  std::vector<double> reals(const std::string& k) const { return to_reals(resolved_.at(k), k); }
  std::vector<std::string> strings(const std::string& k) const {
    return resolved_.at(k).get<std::vector<std::string>>();
  }
  std::uint64_t seed() const { return static_cast<std::uint64_t>(integer("seed")); }
  int jobs() const { return small_int("jobs", 1, 1024); }

 private:
  Json resolved_;
};

class Verdicts {
 public:
  void add(const std::string& name, bool pass, double value, double threshold,
           Json extra = Json::object()) {
    Json v;
    v["name"] = name;
    v["pass"] = pass;
    v["value"] = real_json(value);
    v["threshold"] = real_json(threshold);
    for (auto& item : extra.items()) v[item.key()] = item.value();
    list_.push_back(std::move(v));
    if (!pass) failures_.push_back(name);
  }
  bool pass() const { return failures_.empty(); }
  const Json& list() const { return list_; }
  Json failures() const { return failures_; }

 private:
  Json list_ = Json::array();
  std::vector<std::string> failures_;
};

RunResult finish(const std::string& command, const Config& c, const Verdicts& v,
                 Json results, std::vector<Artifact> artifacts) {
  RunResult r;
  r.pass = v.pass();
  r.summary["command"] = command;
  r.summary["version"] = SQGAD_VERSION;
  r.summary["pass"] = r.pass;
  r.summary["config"] = c.resolved();
  r.summary["verdicts"] = v.list();
  r.summary["failures"] = v.failures();
  r.summary["results"] = std::move(results);
  r.artifacts = std::move(artifacts);
  return r;
}

std::vector<Key> common_keys(double tol) {
  return {
      {"seed", "int", 1, "root seed; every random stream is derived from it"},
      {"jobs", "int", 1, "worker threads for sweeps"},
      {"out_dir", "string", ".", "output directory"},
      {"format", "string", "csv", "series format: csv or json"},
      {"tol", "real", tol, "verdict tolerance"},
  };
}

std::vector<Key> with_common(double tol, std::vector<Key> keys) {
  auto out = common_keys(tol);
  out.insert(out.end(), keys.begin(), keys.end());
  return out;
}

std::vector<Key> flow_keys(double dt, double t_end, long long samples) {
  return {
      {"alpha", "real", 0.6, "dissipation order along x1"},
      {"beta", "real", 0.8, "dissipation order along x2"},
      {"n1", "int", 64, "modes along x1"},
      {"n2", "int", 64, "modes along x2"},
      {"l1", "real", kTwoPi, "period along x1"},
      {"l2", "real", kTwoPi, "period along x2"},
      {"dealias_fraction", "real", 2.0 / 3.0, "retained fraction of each axis"},
      {"dt", "real", dt, "time step (upper bound when fixed_dt is false)"},
      {"t_end", "real", t_end, "final time"},
      {"scheme", "string", "IF_RK4", "IF_RK4 or IF_EULER"},
      {"samples", "int", samples, "evenly spaced sample times including both ends"},
      {"fixed_dt", "bool", true, "false enables the advective step limit"},
      {"cfl", "real", 0.5, "advective step factor"},
      {"init", "string", "random", "random, single_mode or snapshot"},
      {"k_lo", "real", 1.0, "random data: lower |xi| of the band"},
      {"k_hi", "real", 4.0, "random data: upper |xi| of the band"},
      {"slope", "real", 0.0, "random data: coefficient scale |xi|^slope"},
      {"amplitude", "real", 1.0, "L2 norm of the initial data"},
      {"mode1", "int", 1, "single_mode: mode along x1"},
      {"mode2", "int", 0, "single_mode: mode along x2"},
      {"phase", "real", 0.0, "single_mode: phase"},
      {"init_path", "string", "", "snapshot: file to read"},
      {"preset", "string", "none", "none, small_data or critical"},
      {"small_norm", "real", 0.01, "small_data: target homogeneous Sobolev norm"},
      {"linf_target", "real", 0.01, "critical: target sup norm"},
  };
}

struct Flow {
  solver::SolverConfig cfg;
  spectral::SpectralField theta0;
  Json info = Json::object();
};

Flow build_flow(const Config& c, const std::string& stream) {
  Flow f;
  auto& cfg = f.cfg;
  cfg.params = {c.real("alpha"), c.real("beta")};
  cfg.grid.n1 = c.small_int("n1", 2, 1 << 16);
  cfg.grid.n2 = c.small_int("n2", 2, 1 << 16);
  cfg.grid.l1 = c.real("l1");
  cfg.grid.l2 = c.real("l2");
  cfg.grid.dealias_fraction = c.real("dealias_fraction");
  cfg.dt = c.real("dt");
  cfg.t_end = c.real("t_end");
  cfg.scheme = solver::parse_scheme(c.str("scheme"));
  cfg.fixed_dt = c.flag("fixed_dt");
  cfg.cfl = c.real("cfl");
  const auto samples = c.integer("samples");
  if (samples < 2) config_error("key 'samples' must be at least 2");
  cfg.sample_times = solver::uniform_samples(cfg.t_end, static_cast<std::size_t>(samples));

  const std::string init = c.str("init");
  const double amplitude = c.real("amplitude");
  if (init == "random") {
    const std::uint64_t seed = derive_seed(c.seed(), stream);
    f.theta0 = spectral::random_band_limited(seed, cfg.grid, {c.real("k_lo"), c.real("k_hi")},
                                             c.real("slope"), amplitude);
    f.info["theta0_seed"] = seed;
  } else if (init == "single_mode") {
    f.theta0 = spectral::single_mode(cfg.grid, c.small_int("mode1", -(1 << 16), 1 << 16),
                                     c.small_int("mode2", -(1 << 16), 1 << 16), amplitude,
                                     c.real("phase"));
  } else if (init == "snapshot") {
    f.theta0 = spectral::read_snapshot(c.str("init_path"));
    cfg.grid = f.theta0.grid();
  } else {
    config_error("key 'init': unknown value '" + init + "'");
  }

  const std::string preset = c.str("preset");
  if (preset == "small_data") {
    const double order = theory::small_data_sobolev_order(cfg.params);
    const double norm = spectral::sobolev_norm(f.theta0, order);
    if (norm > 0.0) f.theta0 *= c.real("small_norm") / norm;
    f.info["small_data_order"] = order;
  } else if (preset == "critical") {
    if (cfg.params.alpha != 0.5 || cfg.params.beta != 0.5)
      config_error("preset 'critical' needs alpha = beta = 0.5");
    const double sup = spectral::lp_norm(f.theta0, kInf);
    if (sup > 0.0) f.theta0 *= c.real("linf_target") / sup;
  } else if (preset != "none") {
    config_error("key 'preset': unknown value '" + preset + "'");
  }
  cfg.validate();
  f.info["theta0_l2"] = spectral::sobolev_norm(f.theta0, 0.0);
  f.info["theta0_linf"] = spectral::lp_norm(f.theta0, kInf);
  return f;
}

std::string lp_name(double p) {
  return std::isinf(p) ? "max_principle" : "lp_monotone_p" + format_label(p);
}

// ---------------------------------------------------------------- rates

std::vector<Key> rates_keys() {
  return with_common(0.0, {
      {"alpha", "real_list", Json::array({1.0}), "dissipation orders along x1"},
      {"beta", "real_list", Json::array({1.0}), "dissipation orders along x2"},
      {"s", "real_list", Json::array({0.0, 1.0}), "Sobolev orders"},
      {"p", "real_list", Json::array({1.0, 2.0}), "Lebesgue exponents of the data"},
  });
}

const char* case_name(theory::DifferenceCase c) {
  switch (c) {
    case theory::DifferenceCase::AtCritical: return "AT_CRITICAL";
    case theory::DifferenceCase::BelowCritical: return "BELOW_CRITICAL";
    case theory::DifferenceCase::AboveCritical: return "ABOVE_CRITICAL";
  }
  return "UNKNOWN";
}

RunResult run_rates(const Config& c) {
  std::string table =
      "alpha,beta,s,p,admissible,branch,decay_exponent,difference_critical_p,"
      "difference_case,difference_exponent,difference_exponent_l2only,"
      "critical_exponent,small_data_order,note\n";
  std::size_t rows = 0;
  for (double a : c.reals("alpha")) {
    for (double b : c.reals("beta")) {
      const theory::DissipationParams params{a, b};
      params.validate();
      const auto region = theory::regularity_region(params);
      double l2only = std::nan("");
      try {
        l2only = theory::difference_exponent_l2only(params);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::PreconditionViolated) throw;
      }
      const double pstar = theory::difference_critical_p(params);
      const double order = theory::small_data_sobolev_order(params);
      std::string note;
      if (!region.admissible)
        note = "COMPLEMENT: no large-data bound; small-data result needs a small "
               "homogeneous norm of order " + format_double(order);
      for (double s : c.reals("s")) {
        for (double p : c.reals("p")) {
          const theory::DecayQuery q{s, p};
          q.validate();
          const bool diff = p < 2.0;
          const bool critical = a == 0.5 && b == 0.5;
          table += format_double(a) + ',' + format_double(b) + ',' + format_double(s) + ',' +
                   format_double(p) + ',' + (region.admissible ? "1" : "0") + ',' +
                   theory::to_string(region.branch) + ',' +
                   format_double(theory::decay_exponent(params, q)) + ',' +
                   format_double(pstar) + ',' +
                   (diff ? case_name(theory::difference_case(params, p)) : "NONE") + ',' +
                   format_double(diff ? theory::difference_exponent(params, p) : std::nan("")) +
                   ',' + format_double(l2only) + ',' +
                   format_double(critical ? theory::critical_exponent(s, p) : std::nan("")) +
                   ',' + format_double(order) + ',' + note + '\n';
          ++rows;
        }
      }
    }
  }
  Json results;
  results["rows"] = rows;
  return finish("rates", c, Verdicts{}, results, {{"rates.csv", table}});
}

// ---------------------------------------------------------------- region

std::vector<Key> region_keys() {
  const Json grid = Json::array({0.25, 0.5, 0.75, 1.0});
  return with_common(0.0, {
      {"alpha", "real_list", grid, "dissipation orders along x1"},
      {"beta", "real_list", grid, "dissipation orders along x2"},
  });
}

RunResult run_region(const Config& c) {
  std::string table = "alpha,beta,admissible,branch,beta_threshold\n";
  std::size_t admissible = 0, rows = 0;
  for (double a : c.reals("alpha")) {
    for (double b : c.reals("beta")) {
      const theory::DissipationParams params{a, b};
      params.validate();
      const auto region = theory::regularity_region(params);
      admissible += region.admissible;
      ++rows;
      table += format_double(a) + ',' + format_double(b) + ',' +
               (region.admissible ? "1" : "0") + ',' + theory::to_string(region.branch) + ',' +
               format_double(theory::region_threshold(a)) + '\n';
    }
  }
  Json results;
  results["rows"] = rows;
  results["admissible"] = admissible;
  return finish("region", c, Verdicts{}, results, {{"region.csv", table}});
}

// ---------------------------------------------------------------- simulate

std::vector<Key> simulate_keys() {
  auto keys = with_common(0.005, flow_keys(1e-3, 1.0, 21));
  keys.insert(keys.end(), {
      {"nonlinear", "bool", true, "false integrates the linear flow only"},
      {"lp", "real_list", Json::array({1.0, 2.0, "inf"}), "recorded Lebesgue exponents"},
      {"hs", "real_list", Json::array({1.0}), "recorded Sobolev orders"},
      {"save_spectra", "bool", false, "write a snapshot at every sample time"},
      {"energy_tol", "real", 1e-4, "bound on the per-step energy balance, relative to 1/2 ||theta0||^2"},
      {"l2_tol", "real", 1e-10, "bound on per-step growth of ||theta||^2 / ||theta0||^2"},
  });
  return keys;
}

RunResult run_simulate(const Config& c) {
  Flow flow = build_flow(c, "simulate.theta0");
  auto& cfg = flow.cfg;
  cfg.nonlinear = c.flag("nonlinear");
  cfg.lp_exponents = c.reals("lp");
  cfg.sobolev_orders = c.reals("hs");
  cfg.record_spectra = c.flag("save_spectra");

  solver::EnergyMonitor monitor(flow.theta0, cfg);
  const auto traj = solver::evolve(flow.theta0, cfg, monitor.observer());
  const double growth = monitor.worst_growth();
  const double worst_balance = monitor.worst_balance();

  Verdicts v;
  v.add("l2_nonincreasing", growth <= c.real("l2_tol"), growth, c.real("l2_tol"));
  v.add("energy_identity", worst_balance <= c.real("energy_tol"), worst_balance,
        c.real("energy_tol"));

  const auto signed_res = solver::energy_identity_residual_signed(traj);
  double max_res = 0.0;
  for (double r : signed_res) max_res = std::max(max_res, std::abs(r));

  const double tol = c.real("tol");
  Json ratios = Json::object();
  for (double p : cfg.lp_exponents) {
    if (p == 2.0) continue;
    const double ratio = solver::lp_monotonicity_check(traj, p);
    ratios[format_label(p)] = ratio;
    v.add(lp_name(p), ratio <= 1.0 + tol, ratio, 1.0 + tol);
  }

  std::string res_csv = "t_start,t_end,residual\n";
  for (std::size_t i = 0; i < signed_res.size(); ++i)
    res_csv += format_double(traj.times[i]) + ',' + format_double(traj.times[i + 1]) + ',' +
               format_double(signed_res[i]) + '\n';

  std::vector<Artifact> artifacts{{"trajectory.csv", traj.to_csv()},
                                  {"energy_residual.csv", res_csv}};
  for (std::size_t i = 0; i < traj.spectra.size(); ++i) {
    const auto bytes = spectral::encode_snapshot(traj.spectra[i]);
    char name[64];
    std::snprintf(name, sizeof name, "spectrum_%04zu.sqgf", i);
    artifacts.push_back({name, std::string(bytes.begin(), bytes.end())});
  }

  Json results = flow.info;
  results["steps"] = traj.steps;
  results["final_time"] = traj.times.back();
  results["final_l2"] = traj.l2.back();
  results["energy_balance"] = worst_balance;
  results["max_sample_energy_residual"] = max_res;
  results["l2_growth"] = growth;
  results["lp_ratios"] = ratios;
  return finish("simulate", c, v, results, std::move(artifacts));
}

// ---------------------------------------------------------------- difference

std::vector<Key> difference_keys() {
  auto keys = with_common(0.0, flow_keys(1e-3, 1.0, 11));
  keys.insert(keys.end(), {
      {"measure_error", "bool", true, "repeat at dt/2 to measure the time-integration error"},
      {"q_tol_factor", "real", 3.0, "multiple of the measured error added to the bound"},
      {"q_tol", "real", 0.0, "fixed slack when measure_error is false"},
  });
  return keys;
}

RunResult run_difference(const Config& c) {
  Flow flow = build_flow(c, "difference.theta0");
  solver::DifferenceOptions opt;
  opt.measure_error = c.flag("measure_error");
  opt.q_tol_factor = c.real("q_tol_factor");
  opt.q_tol = c.real("q_tol");
  const auto rep = solver::difference_run(flow.theta0, flow.cfg, opt);

  double worst = 0.0;
  for (double r : rep.worst_ratio) worst = std::max(worst, r);
  Verdicts v;
  v.add("fourier_bound", rep.violations == 0, static_cast<double>(rep.violations), 0.0,
        Json{{"checked", rep.checked}, {"worst_ratio", worst}});

  Json results = flow.info;
  results["checked"] = rep.checked;
  results["violations"] = rep.violations;
  results["worst_ratio"] = worst;
  results["q_tol"] = rep.q_tol;
  results["time_error"] = rep.time_error;
  results["integral_error"] = rep.integral_error;
  results["final_w_l2"] = rep.w_l2.back();
  return finish("difference", c, v, results, {{"difference.csv", rep.to_csv()}});
}

// ---------------------------------------------------------------- linear-decay

std::vector<Key> linear_keys() {
  return with_common(0.02, {
      {"alpha", "real", 0.5, "dissipation order along x1"},
      {"beta", "real", 0.5, "dissipation order along x2"},
      {"s", "real_list", Json::array({0.0}), "Sobolev orders"},
      {"profile", "string", "PLATEAU", "PLATEAU, SMOOTH_BUMP, AXIS_ANISOTROPIC or ANNULUS"},
      {"r", "real", 1.0, "PLATEAU radius"},
      {"sigma", "real", 1.0, "SMOOTH_BUMP width"},
      {"r1", "real", 1.0, "AXIS_ANISOTROPIC half width along xi1"},
      {"r2", "real", 1.0, "AXIS_ANISOTROPIC half width along xi2"},
      {"r_in", "real", 0.5, "ANNULUS inner radius"},
      {"r_out", "real", 1.0, "ANNULUS outer radius"},
      {"t_lo", "real", 1e2, "first time"},
      {"t_hi", "real", 1e4, "last time"},
      {"t_count", "int", 25, "log-spaced times"},
      {"rel_tol", "real", 1e-8, "quadrature relative tolerance"},
      {"density_rho", "real_list", Json::array(), "levels for the low-frequency mass check"},
  });
}

RunResult run_linear(const Config& c) {
  const theory::DissipationParams params{c.real("alpha"), c.real("beta")};
  params.validate();
  linear::SpectrumProfile profile;
  profile.kind = linear::parse_profile_kind(c.str("profile"));
  profile.r = c.real("r");
  profile.sigma = c.real("sigma");
  profile.r1 = c.real("r1");
  profile.r2 = c.real("r2");
  profile.r_in = c.real("r_in");
  profile.r_out = c.real("r_out");
  profile.validate();
  const auto count = c.integer("t_count");
  if (count < 8) config_error("key 't_count' must be at least 8");
  const auto times = linear::geometric_times(c.real("t_lo"), c.real("t_hi"),
                                             static_cast<std::size_t>(count));
  quadrature::QuadratureSpec spec;
  spec.rel_tol = c.real("rel_tol");
  const double tol = c.real("tol");

  Verdicts v;
  Json series = Json::array();
  std::vector<Artifact> artifacts;
  for (double s : c.reals("s")) {
    const std::string tag = "s" + format_label(s);
    const double exponent = theory::decay_exponent(params, {s, 1.0});
    Json entry;
    if (profile.kind == linear::SpectrumProfile::Kind::Plateau) {
      const auto rep = linear::two_sided_bound_check(profile, params, s, times, tol, spec,
                                                     c.jobs());
      entry = Json::parse(rep.to_json());
      artifacts.push_back({"linear_" + tag + ".csv", rep.to_csv()});
      v.add("decay_" + tag, rep.pass, -rep.fit.slope, exponent, Json{{"rel_dev", rep.rel_dev}});
    } else {
      std::vector<linear::NormEstimate> est(times.size());
      detail::parallel_for(times.size(), c.jobs(), [&](std::size_t i) {
        est[i] = linear::linear_norm_quadrature(profile, params, s, times[i], spec);
      });
      analysis::DecaySeries ds;
      ds.times = times;
      for (const auto& e : est) ds.values.push_back(e.value);
      ds.label = {"hs", s, 1.0, "quadrature"};
      const auto fit = analysis::fit_decay_rate(ds);
      const auto verdict = analysis::compare_to_theory(fit, exponent, tol);
      entry = Json::parse(verdict.to_json());
      std::vector<double> errors;
      for (const auto& e : est) errors.push_back(e.error);
      artifacts.push_back(
          {"linear_" + tag + ".csv", detail::csv({"t", "norm", "est_error"}, {times, ds.values, errors})});
      v.add("decay_" + tag, verdict.pass, -fit.slope, exponent,
            Json{{"deviation", verdict.deviation}});
    }
    const auto rhos = c.reals("density_rho");
    if (!rhos.empty()) {
      const auto pts = linear::density_condition_check(profile, params, s, 1.0, rhos, spec);
      std::vector<double> rho, mass, err, norm;
      for (const auto& p : pts) {
        rho.push_back(p.rho);
        mass.push_back(p.mass);
        err.push_back(p.error);
        norm.push_back(p.normalized);
      }
      artifacts.push_back({"density_" + tag + ".csv",
                           detail::csv({"rho", "mass", "error", "normalized"}, {rho, mass, err, norm})});
    }
    entry["s"] = s;
    entry["exponent"] = exponent;
    series.push_back(std::move(entry));
  }
  Json results;
  results["profile"] = linear::to_string(profile.kind);
  results["series"] = std::move(series);
  return finish("linear-decay", c, v, results, std::move(artifacts));
}

// ---------------------------------------------------------------- ineq

const std::vector<std::string>& constant_one_ids() {
  static const std::vector<std::string> ids{"ANISO_INTERPOLATION", "DIRECTIONAL_INTERPOLATION",
                                            "SYMBOL_FACTS"};
  return ids;
}

std::vector<Key> ineq_keys() {
  return with_common(0.0, {
      {"ids", "string_list", constant_one_ids(),
       "inequalities: ANISO_INTERPOLATION, DIRECTIONAL_INTERPOLATION, SYMBOL_FACTS, "
       "EMBEDDING, MIXED_LP, LP_DIRECTIONAL, ODE_COMPARISON, TIME_CONVOLUTION"},
      {"samples", "int", 1000, "random fields per sweep"},
      {"n", "int", 128, "grid size"},
      {"emp_alpha", "real", 0.25, "empirical reports: alpha"},
      {"emp_beta", "real", 0.25, "empirical reports: beta"},
      {"emp_p", "real", 1.5, "empirical reports: p"},
      {"emp_q", "real", 8.0, "LP_DIRECTIONAL: q"},
      {"emp_sigma", "real", 0.4, "LP_DIRECTIONAL: derivative order on the left"},
      {"emp_delta", "real", 1.0, "LP_DIRECTIONAL: derivative order on the right"},
      {"emp_axis", "int", 1, "LP_DIRECTIONAL: axis"},
      {"ode_x0", "real", 1.0, "ODE_COMPARISON: initial value"},
      {"ode_nu", "real", 1.0, "ODE_COMPARISON: nu"},
      {"ode_k", "real", 2.0, "ODE_COMPARISON: power k > 1"},
      {"ode_dt", "real", 1e-3, "ODE_COMPARISON: RK4 step"},
      {"ode_t_end", "real", 10.0, "ODE_COMPARISON: final time"},
      {"ode_runs", "int", 20, "ODE_COMPARISON: perturbed runs"},
      {"conv_vartheta", "real_list", Json::array({0.5, 1.0, 2.0}), "TIME_CONVOLUTION: rates"},
      {"conv_varrho", "real_list", Json::array({0.5, 1.0, 2.0}), "TIME_CONVOLUTION: powers"},
      {"conv_t_max", "real", 50.0, "TIME_CONVOLUTION: last time"},
      {"conv_t_count", "int", 101, "TIME_CONVOLUTION: evenly spaced times"},
  });
}

Json ode_report(const Config& c) {
  inequalities::OdeComparison oc{c.real("ode_x0"), c.real("ode_nu"), c.real("ode_k")};
  const auto runs = c.integer("ode_runs");
  if (runs < 0) config_error("key 'ode_runs' must be nonnegative");
  const std::uint64_t seed = derive_seed(c.seed(), "ineq.ode");
  const auto rep = inequalities::ode_comparison_verify(oc, c.real("ode_dt"), c.real("ode_t_end"),
                                                       static_cast<std::size_t>(runs), seed);
  Json j;
  j["id"] = "ODE_COMPARISON";
  j["params"] = {{"x0", oc.x0}, {"nu", oc.nu}, {"k", oc.k}, {"dt", c.real("ode_dt")},
                 {"t_end", c.real("ode_t_end")}};
  j["samples"] = rep.perturbed_runs;
  j["sup_ratio"] = rep.max_ratio;
  j["threshold"] = 1.0 + 1e-8;
  j["pass"] = rep.saturates && rep.below;
  j["seed"] = seed;
  j["max_rel_dev"] = rep.max_rel_dev;
  j["steps"] = rep.steps;
  j["saturates"] = rep.saturates;
  j["below"] = rep.below;
  return j;
}

Json convolution_report(const Config& c) {
  const auto count = c.integer("conv_t_count");
  if (count < 2) config_error("key 'conv_t_count' must be at least 2");
  std::vector<double> times(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < times.size(); ++i)
    times[i] = c.real("conv_t_max") * static_cast<double>(i) / static_cast<double>(count - 1);
  Json points = Json::array();
  bool pass = true;
  double sup = 0.0;
  for (double vt : c.reals("conv_vartheta")) {
    for (double vr : c.reals("conv_varrho")) {
      const auto rep = inequalities::time_convolution_ratio(vt, vr, times);
      pass = pass && rep.pass;
      sup = std::max(sup, rep.sup);
      points.push_back({{"vartheta", vt}, {"varrho", vr}, {"sup", rep.sup}, {"knee", rep.knee},
                        {"nonincreasing_after_knee", rep.nonincreasing_after_knee},
                        {"pass", rep.pass}});
    }
  }
  Json j;
  j["id"] = "TIME_CONVOLUTION";
  j["params"] = {{"t_max", c.real("conv_t_max")}, {"t_count", count}};
  j["samples"] = points.size();
  j["sup_ratio"] = sup;
  j["threshold"] = nullptr;
  j["pass"] = pass;
  j["seed"] = nullptr;
  j["points"] = std::move(points);
  return j;
}

RunResult run_ineq(const Config& c) {
  inequalities::SweepSpec spec;
  spec.seed = c.seed();
  const auto samples = c.integer("samples");
  if (samples < 1) config_error("key 'samples' must be positive");
  spec.samples = static_cast<std::size_t>(samples);
  spec.n = c.small_int("n", 4, 1 << 14);
  spec.jobs = c.jobs();
  inequalities::EmpiricalParams ep;
  ep.alpha = c.real("emp_alpha");
  ep.beta = c.real("emp_beta");
  ep.p = c.real("emp_p");
  ep.q = c.real("emp_q");
  ep.sigma = c.real("emp_sigma");
  ep.delta = c.real("emp_delta");
  ep.axis = c.small_int("emp_axis", 1, 2);

  const auto ids = c.strings("ids");
  if (ids.empty()) config_error("key 'ids' is empty");
  Verdicts v;
  Json reports = Json::array();
  std::vector<Artifact> artifacts;
  for (const auto& id : ids) {
    Json rep;
    if (id == "ANISO_INTERPOLATION") {
      rep = Json::parse(inequalities::sweep_aniso_interpolation(spec).to_json());
    } else if (id == "DIRECTIONAL_INTERPOLATION") {
      rep = Json::parse(inequalities::sweep_directional_interpolation(spec).to_json());
    } else if (id == "SYMBOL_FACTS") {
      rep = Json::parse(inequalities::sweep_symbol_facts(spec).to_json());
    } else if (id == "EMBEDDING" || id == "MIXED_LP" || id == "LP_DIRECTIONAL") {
      rep = Json::parse(
          inequalities::empirical_ratio_report(inequalities::parse_empirical_id(id), ep, spec)
              .to_json());
    } else if (id == "ODE_COMPARISON") {
      rep = ode_report(c);
    } else if (id == "TIME_CONVOLUTION") {
      rep = convolution_report(c);
    } else {
      config_error("key 'ids': unknown inequality '" + id + "'");
    }
    const double threshold =
        rep["threshold"].is_number() ? rep["threshold"].get<double>() : std::nan("");
    v.add(id, rep["pass"].get<bool>(), rep["sup_ratio"].get<double>(), threshold);
    artifacts.push_back({"ineq_" + id + ".json", rep.dump(2) + "\n"});
    reports.push_back(std::move(rep));
  }
  Json results;
  results["reports"] = std::move(reports);
  return finish("ineq", c, v, results, std::move(artifacts));
}

// ---------------------------------------------------------------- splitting

std::vector<Key> splitting_keys() {
  const Json grid = Json::array({0.3, 0.5, 0.7, 0.9});
  return with_common(1e-6, {
      {"alpha", "real_list", grid, "dissipation orders along x1"},
      {"beta", "real_list", grid, "dissipation orders along x2"},
      {"rho", "real_list", Json::array({0.1, 1.0, 10.0}), "levels of the splitting set"},
      {"moments", "string_list", Json::array({"AREA", "XI1_SQ", "XI2_SQ"}),
       "AREA, XI1_SQ, XI2_SQ"},
      {"iso_s", "real_list", Json::array(), "orders s checked against ISO_BOUND"},
      {"rel_tol", "real", 1e-10, "quadrature relative tolerance"},
  });
}

RunResult run_splitting(const Config& c) {
  struct Row {
    theory::DissipationParams params;
    double rho;
    inequalities::Moment moment;
    double s = 0.0;
    double closed = 0.0, quad = 0.0, error = 0.0, rel = 0.0;
    bool pass = false;
  };
  std::vector<Row> rows;
  std::vector<inequalities::Moment> moments;
  for (const auto& m : c.strings("moments")) {
    const auto mm = inequalities::parse_moment(m);
    if (mm == inequalities::Moment::IsoBound) config_error("use key 'iso_s' for ISO_BOUND rows");
    moments.push_back(mm);
  }
  const auto iso = c.reals("iso_s");
  for (double a : c.reals("alpha"))
    for (double b : c.reals("beta"))
      for (double rho : c.reals("rho")) {
        const theory::DissipationParams params{a, b};
        params.validate();
        if (!(rho > 0.0)) config_error("key 'rho' must hold positive levels");
        for (auto m : moments) rows.push_back({params, rho, m});
        for (double s : iso) rows.push_back({params, rho, inequalities::Moment::IsoBound, s});
      }

  quadrature::QuadratureSpec spec{c.real("rel_tol"), 0.0, 20000, true};
  const double tol = c.real("tol");
  detail::parallel_for(rows.size(), c.jobs(), [&](std::size_t i) {
    auto& r = rows[i];
    r.closed = inequalities::splitting_moment(r.params, r.rho, r.moment, r.s);
    const auto q = inequalities::splitting_moment_quadrature(r.params, r.rho, r.moment, r.s, spec);
    r.quad = q.value;
    r.error = q.error;
    if (r.moment == inequalities::Moment::IsoBound) {
      r.rel = r.quad / r.closed;
      r.pass = r.quad <= r.closed * (1.0 + tol);
    } else {
      r.rel = std::abs(r.closed - r.quad) / std::abs(r.closed);
      r.pass = r.rel <= tol;
    }
  });

  std::string table = "alpha,beta,rho,moment,s,closed_form,quadrature,quad_error,rel_diff,pass\n";
  double worst = 0.0, worst_iso = 0.0;
  bool closed_ok = true, iso_ok = true;
  Json failed = Json::array();
  for (const auto& r : rows) {
    table += format_double(r.params.alpha) + ',' + format_double(r.params.beta) + ',' +
             format_double(r.rho) + ',' + inequalities::to_string(r.moment) + ',' +
             format_double(r.s) + ',' + format_double(r.closed) + ',' + format_double(r.quad) +
             ',' + format_double(r.error) + ',' + format_double(r.rel) + ',' +
             (r.pass ? "1" : "0") + '\n';
    if (r.moment == inequalities::Moment::IsoBound) {
      worst_iso = std::max(worst_iso, r.rel);
      iso_ok = iso_ok && r.pass;
    } else {
      worst = std::max(worst, r.rel);
      closed_ok = closed_ok && r.pass;
    }
    if (!r.pass)
      failed.push_back({{"alpha", r.params.alpha}, {"beta", r.params.beta}, {"rho", r.rho},
                        {"moment", inequalities::to_string(r.moment)}, {"s", r.s}});
  }

  // The diamond a = b = 1/2: area 2 rho^2, second moments rho^4 / 3.
  double diamond = 0.0;
  for (double rho : c.reals("rho")) {
    const theory::DissipationParams half{0.5, 0.5};
    const auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
    using inequalities::Moment;
    diamond = std::max({diamond,
                        rel(inequalities::splitting_moment(half, rho, Moment::Area), 2 * rho * rho),
                        rel(inequalities::splitting_moment(half, rho, Moment::Xi1Sq),
                            std::pow(rho, 4) / 3),
                        rel(inequalities::splitting_moment(half, rho, Moment::Xi2Sq),
                            std::pow(rho, 4) / 3)});
  }

  Verdicts v;
  if (!moments.empty()) v.add("closed_form_vs_quadrature", closed_ok, worst, tol);
  if (!iso.empty()) v.add("iso_bound", iso_ok, worst_iso, 1.0 + tol);
  v.add("diamond_closed_form", diamond <= 1e-12, diamond, 1e-12);
  Json results;
  results["rows"] = rows.size();
  results["max_rel_diff"] = worst;
  results["failed_rows"] = std::move(failed);
  return finish("splitting", c, v, results, {{"splitting.csv", table}});
}

// ---------------------------------------------------------------- fit

std::vector<Key> fit_keys() {
  return with_common(0.02, {
      {"series", "string", nullptr, "CSV file with a time column first"},
      {"column", "string", "", "value column name; empty selects the second column"},
      {"theory", "real", nullptr, "expected decay exponent E in (1+t)^{-E}"},
      {"t_lo", "real", 0.0, "window start"},
      {"t_hi", "real", "inf", "window end"},
      {"norm", "string", "l2", "label: norm kind"},
      {"s", "real", 0.0, "label: Sobolev order"},
      {"p", "real", 2.0, "label: Lebesgue exponent"},
      {"source", "string", "torus", "label: torus or quadrature"},
  });
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(trim(cell));
  return out;
}

std::string select_column(const std::string& text, const std::string& column) {
  std::istringstream in(text);
  std::string line, out;
  std::size_t index = 1;
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (header) {
      header = false;
      if (!column.empty()) {
        const auto it = std::find(cells.begin(), cells.end(), column);
        if (it == cells.end()) config_error("key 'column': no column '" + column + "' in series");
        index = static_cast<std::size_t>(it - cells.begin());
      }
      if (index >= cells.size()) config_error("series has fewer than two columns");
      out += cells[0] + ',' + cells[index] + '\n';
      continue;
    }
    if (index >= cells.size()) fail(ErrorCode::InvalidArgument, "short row in series: " + line);
    out += cells[0] + ',' + cells[index] + '\n';
  }
  return out;
}

RunResult run_fit(const Config& c) {
  const std::string path = c.str("series");
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  analysis::SeriesLabel label{c.str("norm"), c.real("s"), c.real("p"), c.str("source")};
  auto series = analysis::parse_series_csv(select_column(buf.str(), c.str("column")), label);
  series = series.truncated();
  const auto fit = analysis::fit_decay_rate(series, {c.real("t_lo"), c.real("t_hi")});
  const auto verdict = analysis::compare_to_theory(fit, c.real("theory"), c.real("tol"));
  Verdicts v;
  v.add("decay_rate", verdict.pass, -fit.slope, c.real("theory"),
        Json{{"deviation", verdict.deviation}, {"drift", verdict.drift}});
  Json results = Json::parse(verdict.to_json());
  results["local_slopes"] = fit.local_slopes;
  results["samples"] = fit.samples;
  return finish("fit", c, v, results, {{"fit.json", results.dump(2) + "\n"}});
}

struct Command {
  std::function<std::vector<Key>()> keys;
  std::function<RunResult(const Config&)> run;
};

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"rates", {rates_keys, run_rates}},
      {"region", {region_keys, run_region}},
      {"simulate", {simulate_keys, run_simulate}},
      {"linear-decay", {linear_keys, run_linear}},
      {"difference", {difference_keys, run_difference}},
      {"ineq", {ineq_keys, run_ineq}},
      {"splitting", {splitting_keys, run_splitting}},
      {"fit", {fit_keys, run_fit}},
  };
  return table;
}

const Command& lookup(const std::string& name) {
  const auto it = commands().find(name);
  if (it == commands().end()) config_error("unknown command '" + name + "'");
  return it->second;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, cmd] : commands()) out.push_back(name);
    return out;
  }();
  return names;
}

Json command_schema(const std::string& command) {
  Json out;
  out["command"] = command;
  out["keys"] = Json::array();
  for (const auto& k : lookup(command).keys())
    out["keys"].push_back({{"name", k.name}, {"type", k.type}, {"default", k.def}, {"doc", k.doc}});
  return out;
}

RunResult run_command(const std::string& command, const nlohmann::json& config) {
  const auto& cmd = lookup(command);
  const Config c(command, cmd.keys(), config);
  const auto format = c.str("format");
  if (format != "csv" && format != "json") config_error("key 'format' must be csv or json");
  return cmd.run(c);
}

}  // namespace sqgad::runs
