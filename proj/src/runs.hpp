#pragma once

// Batch commands behind the C API.  Each command takes a flat JSON object of
// configuration keys, validates it against the command's schema and returns a
// summary plus the files to be written.

#include <json.hpp>
#include <string>
#include <vector>

namespace sqgad::runs {

using Json = nlohmann::ordered_json;

struct Artifact {
  std::string name;
  std::string data;
};

struct RunResult {
  Json summary;  // command, config, pass, verdicts, failures, results
  std::vector<Artifact> artifacts;
  bool pass = true;
};

const std::vector<std::string>& command_names();

// {"command": name, "keys": [{"name", "type", "default", "doc"}, ...]}.
// Types: real, int, bool, string, real_list, string_list.  A null default
// marks a required key.
Json command_schema(const std::string& command);

// Throws Error(Config) for unknown commands, unknown keys and values that do
// not convert to the declared type.
RunResult run_command(const std::string& command, const nlohmann::json& config);

}  // namespace sqgad::runs
