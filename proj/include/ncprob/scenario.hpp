#ifndef NCPROB_SCENARIO_HPP
#define NCPROB_SCENARIO_HPP

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ncprob::cli {

inline constexpr const char* kArtifactVersion = "1.0.0";

struct RunResult {
  bool config_error = false;   // exit 2
  bool all_ok = false;         // exit 0 when true, else 1
  std::string error;           // set when config_error
  std::string report_path;     // written report JSON
  std::string table_path;      // written CSV table
};

// Executes a scenario config, writes <out_dir>/<stem>_report.json and
// <stem>_table.csv, and returns the status. tol_override <= 0 keeps the
// scenario's own tolerances.
RunResult run_scenario_file(const std::string& path, const std::string& out_dir,
                            double tol_override = 0.0);

// Shipped scenario directory: $NCPROB_SCENARIO_DIR overrides the compiled
// default.
std::string scenario_dir();

// (filename, one-line description) of every shipped scenario.
std::vector<std::pair<std::string, std::string>> list_scenarios();

// Documentation for a check kind; throws ValidationError listing the valid
// kinds when unknown.
std::string describe_check(const std::string& kind);
std::vector<std::string> check_kinds();

// FNV-1a hash of a file's bytes, as fixed-width hex (ties reports to their
// exact input).
std::string file_hash_hex(const std::string& path);

}  // namespace ncprob::cli

#endif
