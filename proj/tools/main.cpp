// sqgad-cli: batch front end over the C interface.
//
// Exit codes: 0 every verdict passed, 1 a verdict failed, 2 configuration
// error, 3 runtime or numeric error, 4 I/O error.

#include <CLI11.hpp>
#include <algorithm>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_util.hpp"
#include "sqgad/sqgad.h"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kRuntime = 3, kIo = 4 };

struct Options {
  std::string config;
  std::optional<long long> seed;
  std::optional<std::string> out;
  std::optional<int> jobs;
  std::optional<std::string> format;
  std::optional<double> tol;
  std::vector<std::string> set;
  bool quiet = false;
};

int exit_code(sqg_status status) {
  switch (status) {
    case SQG_CONFIG:
    case SQG_INVALID_ARGUMENT:
    case SQG_PRECONDITION_VIOLATED:
    case SQG_HYPOTHESIS_VIOLATED:
    case SQG_EMPTY_BAND:
      return kConfig;
    case SQG_IO:
      return kIo;
    default:
      return kRuntime;
  }
}

int report_error(const std::string& command, const std::string& status, int code,
                 const std::string& message) {
  ordered_json e;
  e["command"] = command;
  e["status"] = status;
  e["exit_code"] = code;
  e["message"] = message;
  std::cerr << e.dump() << '\n';
  return code;
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

json build_config(const Options& o, const json& schema) {
  json cfg = json::object();
  if (!o.config.empty()) cfg = sqgcli::check_entries(sqgcli::parse_config(read_file(o.config)), schema);
  std::vector<sqgcli::ConfigEntry> overrides;
  for (const auto& s : o.set) overrides.push_back(sqgcli::parse_assignment(s));
  if (o.seed) overrides.push_back({"seed", std::to_string(*o.seed), 0});
  if (o.jobs) overrides.push_back({"jobs", std::to_string(*o.jobs), 0});
  if (o.out) overrides.push_back({"out_dir", *o.out, 0});
  if (o.format) overrides.push_back({"format", *o.format, 0});
  if (o.tol) {
    std::ostringstream v;
    v.precision(17);
    v << *o.tol;
    overrides.push_back({"tol", v.str(), 0});
  }
  // Flags may repeat a key from the file, so check them one at a time.
  for (const auto& e : overrides) {
    const json one = sqgcli::check_entries({e}, schema);
    cfg[e.key] = one.at(e.key);
  }
  return cfg;
}

int run(const std::string& command, const Options& o) {
  const char* schema_text = nullptr;
  if (sqg_command_schema(command.c_str(), &schema_text) != SQG_OK)
    return report_error(command, "CONFIG", kConfig, sqg_last_error());
  json cfg;
  try {
    cfg = build_config(o, json::parse(schema_text));
  } catch (const sqgcli::ConfigError& e) {
    const std::string where = e.line() > 0 ? o.config + ": " : "";
    return report_error(command, "CONFIG", kConfig, where + e.what());
  } catch (const std::ios_base::failure& e) {
    return report_error(command, "IO", kIo, e.what());
  }

  sqg_report* report = nullptr;
  const sqg_status status = sqg_run(command.c_str(), cfg.dump().c_str(), &report);
  if (status != SQG_OK)
    return report_error(command, sqg_status_name(status), exit_code(status), sqg_last_error());

  const ordered_json summary = ordered_json::parse(sqg_report_json(report));
  const bool pass = sqg_report_passed(report) != 0;
  const std::string out_dir = summary["config"]["out_dir"].get<std::string>();
  const bool as_json = summary["config"]["format"] == "json";

  ordered_json files = ordered_json::array();
  try {
    fs::create_directories(out_dir);
    for (size_t i = 0; i < sqg_report_artifact_count(report); ++i) {
      std::string name = sqg_report_artifact_name(report, i);
      size_t size = 0;
      const char* data = sqg_report_artifact_data(report, i, &size);
      std::string bytes(data, size);
      if (as_json && ends_with(name, ".csv")) {
        name = name.substr(0, name.size() - 4) + ".json";
        bytes = sqgcli::csv_to_json(bytes).dump(2) + "\n";
      }
      sqgcli::write_atomic((fs::path(out_dir) / name).string(), bytes);
      files.push_back(name);
      if (!o.quiet && (command == "rates" || command == "region")) std::cout << bytes;
    }
    const std::string summary_name = command + ".summary.json";
    sqgcli::write_atomic((fs::path(out_dir) / summary_name).string(), summary.dump(2) + "\n");
    files.push_back(summary_name);

    ordered_json manifest;
    manifest["command"] = command;
    manifest["version"] = sqg_version();
    manifest["timestamp"] = timestamp();
    manifest["pass"] = pass;
    manifest["exit_code"] = pass ? kPass : kFail;
    manifest["failures"] = summary["failures"];
    manifest["config"] = summary["config"];
    manifest["files"] = files;
    sqgcli::write_atomic((fs::path(out_dir) / (command + ".manifest.json")).string(),
                         manifest.dump(2) + "\n");
  } catch (const std::exception& e) {
    sqg_report_free(report);
    return report_error(command, "IO", kIo, e.what());
  }
  sqg_report_free(report);

  if (!o.quiet) {
    for (const auto& v : summary["verdicts"])
      std::cout << (v["pass"].get<bool>() ? "PASS " : "FAIL ") << v["name"].get<std::string>()
                << " value=" << v["value"].dump() << " threshold=" << v["threshold"].dump()
                << '\n';
  }
  std::cout << command << ": " << (pass ? "PASS" : "FAIL");
  if (!pass) std::cout << ' ' << summary["failures"].dump();
  std::cout << '\n';
  return pass ? kPass : kFail;
}

// Collects every <command>.summary.json in a directory into report.json.
int run_report(const Options& o) {
  const std::string dir = o.out.value_or(".");
  if (!fs::is_directory(dir)) return report_error("report", "IO", kIo, "no directory " + dir);
  std::vector<fs::path> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (ends_with(entry.path().filename().string(), ".summary.json")) paths.push_back(entry.path());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) return report_error("report", "IO", kIo, "no summaries in " + dir);

  ordered_json runs = ordered_json::array();
  ordered_json failing = ordered_json::array();
  bool pass = true;
  try {
    for (const auto& p : paths) {
      const auto s = ordered_json::parse(read_file(p.string()));
      ordered_json r;
      r["command"] = s["command"];
      r["pass"] = s["pass"];
      r["verdicts"] = s["verdicts"].size();
      r["failures"] = s["failures"];
      if (!s["pass"].get<bool>()) {
        pass = false;
        failing.push_back(s["command"]);
      }
      std::cout << (s["pass"].get<bool>() ? "PASS " : "FAIL ") << s["command"].get<std::string>()
                << '\n';
      runs.push_back(std::move(r));
    }
    ordered_json out;
    out["version"] = sqg_version();
    out["pass"] = pass;
    out["failures"] = failing;
    out["runs"] = runs;
    sqgcli::write_atomic((fs::path(dir) / "report.json").string(), out.dump(2) + "\n");
  } catch (const json::exception& e) {
    return report_error("report", "IO", kIo, e.what());
  } catch (const std::exception& e) {
    return report_error("report", "IO", kIo, e.what());
  }
  std::cout << "report: " << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kPass : kFail;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "key = value configuration file");
  sub->add_option("--seed", o.seed, "root seed");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--format", o.format, "series format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--tol", o.tol, "verdict tolerance");
  sub->add_option("--set", o.set, "override a key: --set key=value")->take_all();
  sub->add_flag("-q,--quiet", o.quiet, "print only the final status line");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch runs for SQG with anisotropic fractional dissipation"};
  app.set_version_flag("--version", std::string(sqg_version()));
  app.require_subcommand(1);
  Options o;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"rates", "decay exponents and region verdicts"},
      {"region", "regularity region over a parameter grid"},
      {"simulate", "nonlinear run with energy and Lp checks"},
      {"linear-decay", "linear decay rates by quadrature"},
      {"difference", "nonlinear minus linear flow against the Fourier bound"},
      {"ineq", "inequality sweeps"},
      {"splitting", "splitting-set moments, closed form against quadrature"},
      {"fit", "fit a power law to a series"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), o);
  auto* schema = app.add_subcommand("schema", "print the configuration keys of a command");
  std::string schema_command;
  schema->add_option("command", schema_command)->required();
  auto* report = app.add_subcommand("report", "collect the summaries in an output directory");
  report->add_option("--out", o.out, "directory to scan");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (name == "report") return run_report(o);
  if (name == "schema") {
    const char* text = nullptr;
    if (sqg_command_schema(schema_command.c_str(), &text) != SQG_OK)
      return report_error("schema", "CONFIG", kConfig, sqg_last_error());
    const json parsed = json::parse(text);
    for (const auto& k : parsed["keys"])
      std::cout << k["name"].get<std::string>() << " (" << k["type"].get<std::string>()
                << ", default " << k["default"].dump() << "): " << k["doc"].get<std::string>()
                << '\n';
    return kPass;
  }
  return run(name, o);
}
