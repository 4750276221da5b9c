#pragma once

// Helpers for the command-line front end: the flat key=value config format,
// CSV to JSON conversion and atomic file writes.

#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqgcli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

// key = value per line; '#' starts a comment; blank lines are skipped.
// Throws ConfigError on malformed lines and repeated keys.
std::vector<ConfigEntry> parse_config(const std::string& text);

// Checks every entry against a command schema (the JSON of
// sqg_command_schema) and returns a flat object of the raw string values.
// Unknown keys and values that do not convert to the declared type raise
// ConfigError with the entry's line number.
nlohmann::json check_entries(const std::vector<ConfigEntry>& entries,
                             const nlohmann::json& schema);

// "key=value" from --set; line 0 in errors.
ConfigEntry parse_assignment(const std::string& text);

// {"columns": [...], "data": {column: [...]}}.  Cells that parse as finite
// numbers become numbers; everything else stays a string.
nlohmann::ordered_json csv_to_json(const std::string& csv);

// Writes to a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& data);

}  // namespace sqgcli
