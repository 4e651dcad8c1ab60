// Command-line front end: scenario runs, the invariant check suite, and
// fixed-schema comparison tables.
//
// Exit codes, exhaustively:
//   0  success (all requested checks passed)
//   1  at least one check or scenario tolerance failed
//   2  configuration error (CLI usage, JSON keys/types, unresolvable names)
//   3  numeric or I/O failure (non-finite evaluation, unwritable output)

#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "stkin/checks.hpp"
#include "stkin/scenario.hpp"

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

int do_run(const std::string& scenario_path, const std::string& out_path) {
  const stkin::harness::Scenario scenario =
      stkin::harness::parse_scenario_file(scenario_path);
  const stkin::harness::ScenarioRun run = stkin::harness::run_scenario(scenario);
  write_file(out_path, run.csv);
  std::cout << stkin::harness::reports_to_text(run.reports);
  std::cout << "wrote " << out_path << "\n";
  return stkin::checks::all_passed(run.reports) ? 0 : 1;
}

int do_check(const std::string& filter, const std::string& json_path) {
  const auto reports = stkin::checks::run_checks(filter);
  if (reports.empty()) {
    std::cerr << "warning: no checks match filter '" << filter << "'\n";
  }
  std::cout << stkin::harness::reports_to_text(reports);
  if (!json_path.empty()) {
    write_file(json_path, stkin::harness::reports_to_json(reports));
  }
  return stkin::checks::all_passed(reports) ? 0 : 1;
}

int do_table(const std::string& kind, const std::string& scenario_path,
             const std::string& out_path) {
  const stkin::harness::Scenario scenario =
      stkin::harness::parse_scenario_file(scenario_path);
  write_file(out_path, stkin::harness::emit_table(kind, scenario));
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"space-time kinematics: scenario runs, invariant checks, tables"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::string filter;
  std::string json_path;
  std::string kind;

  CLI::App* run = app.add_subcommand("run", "evaluate a scenario and write its CSV data");
  run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out_path, "output CSV file")->required();

  CLI::App* check = app.add_subcommand("check", "run the invariant check suite");
  check->add_option("--filter", filter, "only run checks whose id contains this pattern");
  check->add_option("--json", json_path, "also write the report as JSON");

  CLI::App* table = app.add_subcommand("table", "emit a fixed-schema comparison table");
  table->add_option("--kind", kind,
                    "table kind: convected_comparison | split_roundtrip | corotating")
      ->required();
  table->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  table->add_option("--out", out_path, "output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return do_run(scenario_path, out_path);
    if (check->parsed()) return do_check(filter, json_path);
    return do_table(kind, scenario_path, out_path);
  } catch (const stkin::harness::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
