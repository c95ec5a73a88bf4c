#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "ncprob/matalg.hpp"
#include "ncprob/scenario.hpp"

using namespace ncprob::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path out_dir() {
  const fs::path p = fs::temp_directory_path() / "ncprob_cli_tests";
  fs::create_directories(p);
  return p;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string write_config(const std::string& name, const json& cfg) {
  const fs::path p = out_dir() / name;
  std::ofstream(p) << cfg.dump(2);
  return p.string();
}

}  // namespace

TEST_CASE("every shipped scenario runs clean") {
  const fs::path dir = scenario_dir();
  const auto scenarios = list_scenarios();
  CHECK(scenarios.size() >= 8);
  for (const auto& [name, description] : scenarios) {
    CAPTURE(name);
    CHECK(!description.empty());
    const RunResult r =
        run_scenario_file((dir / name).string(), out_dir().string());
    CHECK(!r.config_error);
    CHECK(r.all_ok);
    CHECK(fs::exists(r.report_path));
    CHECK(fs::exists(r.table_path));
  }
}

TEST_CASE("reports are byte-stable across runs") {
  const std::string cfg =
      (fs::path(scenario_dir()) / "coin_ci.json").string();
  const fs::path dir_a = out_dir() / "rep_a";
  const fs::path dir_b = out_dir() / "rep_b";
  fs::create_directories(dir_a);
  fs::create_directories(dir_b);
  const RunResult a = run_scenario_file(cfg, dir_a.string());
  const RunResult b = run_scenario_file(cfg, dir_b.string());
  CHECK(read_bytes(a.report_path) == read_bytes(b.report_path));
  CHECK(read_bytes(a.table_path) == read_bytes(b.table_path));
}

TEST_CASE("expected failures are inverted, not hidden") {
  const std::string cfg =
      (fs::path(scenario_dir()) / "definetti_counterexample.json").string();
  const RunResult r = run_scenario_file(cfg, out_dir().string());
  REQUIRE(r.all_ok);
  const json report = load_json(r.report_path);
  bool saw_expected_failure = false;
  for (const auto& check : report.at("checks")) {
    if (check.at("expect") == "fail") {
      CHECK(check.at("raw_pass") == false);
      CHECK(check.at("ok") == true);
      saw_expected_failure = true;
    }
  }
  CHECK(saw_expected_failure);
  // The report records its version and input hash.
  CHECK(report.at("artifact_version") == kArtifactVersion);
  CHECK(report.at("scenario_hash").get<std::string>().size() == 16);
}

TEST_CASE("the CSV table mirrors the report checks") {
  const std::string cfg =
      (fs::path(scenario_dir()) / "iid_exchangeability.json").string();
  const RunResult r = run_scenario_file(cfg, out_dir().string());
  const json report = load_json(r.report_path);
  std::ifstream table(r.table_path);
  std::string header;
  REQUIRE(std::getline(table, header));
  CHECK(header == "check,type,expect,raw_pass,ok,worst_deviation");
  std::size_t rows = 0;
  for (std::string line; std::getline(table, line);) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == report.at("checks").size());
}

TEST_CASE("malformed configs are config errors, not crashes") {
  SUBCASE("missing model field") {
    const json cfg = {
        {"name", "broken"},
        {"model", {{"kind", "iid_tensor"}, {"base", "m2"}}},  // no window
        {"checks", json::array()},
    };
    const RunResult r =
        run_scenario_file(write_config("broken_window.json", cfg),
                          out_dir().string());
    CHECK(r.config_error);
    CHECK(r.error.find("window") != std::string::npos);
  }
  SUBCASE("invalid JSON") {
    const fs::path p = out_dir() / "not_json.json";
    std::ofstream(p) << "{ definitely not json";
    const RunResult r = run_scenario_file(p.string(), out_dir().string());
    CHECK(r.config_error);
  }
  SUBCASE("unknown check type") {
    const json cfg = {
        {"name", "unknown_check"},
        {"model", {{"kind", "iid_tensor"}, {"base", "m2"}, {"window", 4}}},
        {"checks", json::array({{{"type", "no_such_check"}}})},
    };
    const RunResult r = run_scenario_file(
        write_config("unknown_check.json", cfg), out_dir().string());
    CHECK(r.config_error);
  }
  SUBCASE("missing file") {
    const RunResult r = run_scenario_file(
        (out_dir() / "does_not_exist.json").string(), out_dir().string());
    CHECK(r.config_error);
  }
}

TEST_CASE("tolerance overrides flip marginal checks") {
  // A moment check that holds at 1e-9 fails once the override demands an
  // impossible 1e-300 match against a deliberately offset expected value.
  const json cfg = {
      {"name", "tol_probe"},
      {"model", {{"kind", "iid_tensor"}, {"base", "m2"}, {"window", 4}}},
      {"checks",
       json::array({{{"type", "moment"},
                     {"tuple", json::array({0, 1})},
                     {"basis", json::array({1, 1})},
                     {"value", {{"re", 1e-12}, {"im", 0.0}}},
                     {"tol", 1e-9}}})},
  };
  const std::string path = write_config("tol_probe.json", cfg);
  const RunResult loose = run_scenario_file(path, out_dir().string());
  CHECK(!loose.config_error);
  CHECK(loose.all_ok);
  const RunResult strict =
      run_scenario_file(path, out_dir().string(), 1e-300);
  CHECK(!strict.config_error);
  CHECK(!strict.all_ok);
}

TEST_CASE("check kind documentation") {
  const auto kinds = check_kinds();
  CHECK(kinds.size() == 15);
  for (const auto& kind : kinds) {
    CAPTURE(kind);
    CHECK(!describe_check(kind).empty());
  }
  // Symmetry aliases are documented too.
  CHECK(describe_check("spreadable").find("degree") != std::string::npos);
  CHECK_THROWS_AS(describe_check("no_such_kind"), ncprob::ValidationError);
}

TEST_CASE("scenario hashes are stable and content-sensitive") {
  const std::string cfg =
      (fs::path(scenario_dir()) / "combinatorics.json").string();
  const std::string h1 = file_hash_hex(cfg);
  const std::string h2 = file_hash_hex(cfg);
  CHECK(h1 == h2);
  CHECK(h1.size() == 16);
  const fs::path other = out_dir() / "hash_probe.json";
  std::ofstream(other) << "{}";
  CHECK(file_hash_hex(other.string()) != h1);
}
