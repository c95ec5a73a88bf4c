// Command-line front end for the noncommutative probability workbench:
// runs JSON scenario configs and reports per-check verdicts.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncprob/errors.hpp"
#include "ncprob/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ncprob: de Finetti-style symmetry, independence and CLT "
               "checks on finite operator models"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";
  int jobs = 1;
  double tol = 0.0;
  auto* run = app.add_subcommand("run", "Execute a scenario config");
  run->add_option("config", config, "Scenario JSON file")->required();
  run->add_option("--out", out_dir, "Output directory for report and table");
  run->add_option("--jobs", jobs, "Worker count (reports are sequential; "
                                  "accepted for interface stability)");
  run->add_option("--tol", tol, "Override every check tolerance");

  auto* list = app.add_subcommand("list", "List shipped scenarios");

  std::string kind;
  auto* describe = app.add_subcommand("describe", "Explain a check kind");
  describe->add_option("kind", kind, "Check kind (see 'describe help')")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto r = ncprob::cli::run_scenario_file(config, out_dir, tol);
      if (r.config_error) {
        std::cerr << "config error: " << r.error << "\n";
        return 2;
      }
      std::cout << "report: " << r.report_path << "\n"
                << "table:  " << r.table_path << "\n"
                << "status: " << (r.all_ok ? "ok" : "failed") << "\n";
      return r.all_ok ? 0 : 1;
    }
    if (list->parsed()) {
      const auto scenarios = ncprob::cli::list_scenarios();
      if (scenarios.empty()) {
        std::cout << "no scenarios found in " << ncprob::cli::scenario_dir()
                  << "\n";
        return 0;
      }
      for (const auto& [file, desc] : scenarios) {
        std::cout << (std::filesystem::path(ncprob::cli::scenario_dir()) / file)
                         .string()
                  << "\n    " << desc << "\n";
      }
      return 0;
    }
    if (describe->parsed()) {
      if (kind == "help") {
        for (const auto& k : ncprob::cli::check_kinds()) {
          std::cout << k << "\n";
        }
        return 0;
      }
      const std::string doc = ncprob::cli::describe_check(kind);
      std::cout << kind << ": " << doc << "\n";
      return 0;
    }
  } catch (const ncprob::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
