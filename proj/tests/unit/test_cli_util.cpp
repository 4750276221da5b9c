#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_util.hpp"

using sqgcli::ConfigError;

namespace {

const nlohmann::json schema = nlohmann::json::parse(R"({
  "command": "demo",
  "keys": [
    {"name": "alpha", "type": "real", "default": 0.5, "doc": ""},
    {"name": "n", "type": "int", "default": 64, "doc": ""},
    {"name": "flag", "type": "bool", "default": true, "doc": ""},
    {"name": "s", "type": "real_list", "default": [0], "doc": ""},
    {"name": "ids", "type": "string_list", "default": [], "doc": ""},
    {"name": "name", "type": "string", "default": "", "doc": ""}
  ]})");

int error_line(const std::string& text) {
  try {
    sqgcli::check_entries(sqgcli::parse_config(text), schema);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("key = value parsing") {
  const auto entries = sqgcli::parse_config(
      "# header\n"
      "\n"
      "alpha = 0.25   # trailing\n"
      "  s=0, 1 ,2\n"
      "name = run one\n");
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].key == "alpha");
  CHECK(entries[0].value == "0.25");
  CHECK(entries[0].line == 3);
  CHECK(entries[1].value == "0, 1 ,2");
  CHECK(entries[1].line == 4);
  CHECK(entries[2].value == "run one");

  const auto cfg = sqgcli::check_entries(entries, schema);
  CHECK(cfg["alpha"] == "0.25");
  CHECK(cfg.size() == 3);
}

TEST_CASE("errors carry line numbers") {
  CHECK(error_line("alpha = 1\nbeta = 2\n") == 2);
  CHECK(error_line("alpha = 1\n\nalpha = 2\n") == 3);
  CHECK(error_line("# c\nno equals sign\n") == 2);
  CHECK(error_line("= 3\n") == 1);
  CHECK(error_line("alpha = abc\n") == 1);
  CHECK(error_line("n = 1.5\n") == 1);
  CHECK(error_line("flag = maybe\n") == 1);
  CHECK(error_line("s = 1, x\n") == 1);
  CHECK(error_line("bad-key = 1\n") == 1);
  CHECK(error_line("alpha = inf\nn = 12\nflag = off\ns = 0,1\nids = A, B\n") == -1);

  try {
    sqgcli::check_entries(sqgcli::parse_config("x = 1\n"), schema);
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()) == "line 1: unknown key 'x' for command 'demo'");
  }
}

TEST_CASE("--set assignments") {
  const auto e = sqgcli::parse_assignment(" alpha = 0.3 ");
  CHECK(e.key == "alpha");
  CHECK(e.value == "0.3");
  CHECK(e.line == 0);
  CHECK_THROWS_AS(sqgcli::parse_assignment("alpha"), ConfigError);
}

TEST_CASE("csv to json") {
  const auto j = sqgcli::csv_to_json("t,v,label\n0,1.5,a\n1,inf,b\n");
  CHECK(j["columns"] == nlohmann::json::array({"t", "v", "label"}));
  CHECK(j["data"]["t"] == nlohmann::json::array({0.0, 1.0}));
  CHECK(j["data"]["v"][0] == 1.5);
  CHECK(j["data"]["v"][1] == "inf");
  CHECK(j["data"]["label"][1] == "b");
}

TEST_CASE("atomic writes replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "sqgad_cli_util_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.txt").string();
  sqgcli::write_atomic(path, "first");
  sqgcli::write_atomic(path, "second");
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& entry : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}
