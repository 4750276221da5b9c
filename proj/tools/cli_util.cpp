#include "cli_util.hpp"

#include <unistd.h>

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace sqgcli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  return out;
}

bool is_real(const std::string& s) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size() && !std::isnan(x);
}

bool is_int(const std::string& s) {
  char* end = nullptr;
  std::strtoll(s.c_str(), &end, 10);
  return !s.empty() && end == s.c_str() + s.size();
}

bool is_bool(const std::string& s) {
  static const std::set<std::string> words{"true", "false", "yes", "no", "on", "off", "1", "0"};
  return words.count(s) > 0;
}

void check_type(const ConfigEntry& e, const std::string& type) {
  bool ok = true;
  if (type == "real") {
    ok = is_real(e.value);
  } else if (type == "int") {
    ok = is_int(e.value);
  } else if (type == "bool") {
    ok = is_bool(e.value);
  } else if (type == "real_list") {
    for (const auto& item : split(e.value, ','))
      if (!item.empty() && !is_real(item)) ok = false;
  }
  if (!ok)
    throw ConfigError(e.line, "key '" + e.key + "': '" + e.value + "' is not a valid " + type);
}

}  // namespace

std::vector<ConfigEntry> parse_config(const std::string& text) {
  std::vector<ConfigEntry> out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(line, "expected key = value");
    ConfigEntry e{trim(body.substr(0, eq)), trim(body.substr(eq + 1)), line};
    if (e.key.empty()) throw ConfigError(line, "empty key");
    for (char c : e.key)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw ConfigError(line, "invalid key '" + e.key + "'");
    if (!seen.insert(e.key).second) throw ConfigError(line, "duplicate key '" + e.key + "'");
    out.push_back(std::move(e));
  }
  return out;
}

nlohmann::json check_entries(const std::vector<ConfigEntry>& entries,
                             const nlohmann::json& schema) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& e : entries) {
    const nlohmann::json* spec = nullptr;
    for (const auto& k : schema.at("keys"))
      if (k.at("name") == e.key) spec = &k;
    if (!spec)
      throw ConfigError(e.line, "unknown key '" + e.key + "' for command '" +
                                    schema.at("command").get<std::string>() + "'");
    check_type(e, spec->at("type").get<std::string>());
    out[e.key] = e.value;
  }
  return out;
}

ConfigEntry parse_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError(0, "--set expects key=value, got '" + text + "'");
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1)), 0};
}

nlohmann::ordered_json csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> columns;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  bool header = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      columns = split(line, ',');
      for (const auto& c : columns) data[c] = nlohmann::ordered_json::array();
      header = false;
      continue;
    }
    const auto cells = split(line, ',');
    for (std::size_t j = 0; j < columns.size(); ++j) {
      const std::string cell = j < cells.size() ? cells[j] : "";
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(x))
        data[columns[j]].push_back(x);
      else
        data[columns[j]].push_back(cell);
    }
  }
  nlohmann::ordered_json out;
  out["columns"] = columns;
  out["data"] = std::move(data);
  return out;
}

void write_atomic(const std::string& path, const std::string& data) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write " + tmp);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw std::ios_base::failure("cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::ios_base::failure("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

}  // namespace sqgcli
