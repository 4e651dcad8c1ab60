#pragma once

// Scenario-driven harness: a JSON document selects a catalog velocity field,
// an observer, a test field, evaluation points, probe steps and tolerances;
// the harness evaluates closed-form derivatives against the flow-pullback
// oracle and emits CSV data plus pass/fail reports.
//
// Configuration is fully materialized: every default becomes explicit in the
// canonical JSON echoed into the first line of each CSV output, so a report
// never depends on defaults hidden in the binary.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "stkin/checks.hpp"
#include "stkin/derivatives.hpp"

namespace stkin::harness {

/// Configuration rejection: bad keys, bad types, unresolvable names,
/// malformed shapes. Maps to exit code 2 in the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FieldSpec {
  std::string name = "constant";
  std::map<std::string, double> params;  // materialized to the full set
};

struct ObserverSpec {
  std::string type = "inertial";  // inertial | rotating | corotating
  std::array<double, 4> origin{0.0, 0.0, 0.0, 0.0};  // (t, x, y, z)
  std::array<double, 3> velocity{0.0, 0.0, 0.0};     // origin drift (not corotating)
  double omega0 = 1.0;                               // rotating only
  std::array<double, 3> axis{0.0, 0.0, 1.0};         // rotating only
};

/// Test field: a kind plus exactly one of a constant value, explicit
/// polynomial components, or seeded random cubic components.
struct TestFieldSpec {
  std::string kind = "space_vector";
  // Constant components, flattened row-major for tensor kinds.
  std::vector<double> constant;
  bool has_constant = false;
  // Per component: list of terms (coefficient, t/x/y/z exponents).
  std::vector<std::vector<std::array<double, 5>>> polynomial;
  bool has_polynomial = false;
  bool random_cubic = false;
};

struct PointsSpec {
  std::vector<WorldPoint> explicit_points;  // used when non-empty
  int count = 0;                            // seeded draw otherwise
  double t_min = 0.0;
  double t_max = 2.0;
  double box = 2.0;  // |q_i| <= box
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  FieldSpec field;
  ObserverSpec observer;
  TestFieldSpec test_field;
  PointsSpec points;
  OracleConfig oracle;
  std::map<std::string, double> tolerances;  // lie/material/jaumann materialized
  std::string canonical_json;                // defaults materialized, keys sorted
};

/// Parse and validate a scenario document; every unknown key, wrong type or
/// unresolvable name throws ConfigError.
Scenario parse_scenario_json(const std::string& text);
Scenario parse_scenario_file(const std::string& path);

/// Names of the supported test-field kinds.
std::vector<std::string> test_field_kinds();

/// Materialize the pieces of a scenario (also used by tests).
VelocityField make_field(const FieldSpec& spec);
RigidObserver make_observer(const Scenario& scenario);
std::vector<WorldPoint> make_points(const Scenario& scenario);

struct ScenarioRun {
  std::vector<checks::CheckReport> reports;
  std::string csv;
};

/// Evaluate the scenario: one CSV data row per (point, derivative kind,
/// component) with the closed-form value, the oracle value and their
/// difference; one report per derivative kind against the configured
/// tolerance. Deterministic for a fixed seed.
ScenarioRun run_scenario(const Scenario& scenario);

/// Fixed-schema comparison tables: kind is one of
///   convected_comparison  (spacelike vector scenarios)
///   split_roundtrip       (any scenario with an observer)
///   corotating            (corotating-observer scenarios, spacelike vector)
std::string emit_table(const std::string& kind, const Scenario& scenario);

/// Reports as a JSON document / as an aligned text table.
std::string reports_to_json(const std::vector<checks::CheckReport>& reports);
std::string reports_to_text(const std::vector<checks::CheckReport>& reports);

}  // namespace stkin::harness
