#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stkin/scenario.hpp"

using namespace stkin;
using namespace stkin::harness;
using nlohmann::json;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

const char* kShearDoc = R"({
  "name": "shear_ey",
  "field": {"name": "simple_shear", "params": {"kappa": 1.0}},
  "observer": {"type": "inertial"},
  "test_field": {"kind": "space_vector", "constant": "e_y"},
  "points": [[0, 0, 1, 0]],
  "tolerances": {"lie": 1e-7, "material": 1e-7, "jaumann": 1e-7}
})";

}  // namespace

TEST_CASE("defaults are materialized into the canonical configuration") {
  const Scenario sc = parse_scenario_json("{}");
  CHECK(sc.name == "scenario");
  CHECK(sc.seed == 1);
  CHECK(sc.field.name == "constant");
  CHECK(sc.test_field.random_cubic);
  CHECK(sc.points.count == 10);

  const json c = json::parse(sc.canonical_json);
  CHECK(c["name"] == "scenario");
  CHECK(c["seed"] == 1);
  CHECK(c["field"]["name"] == "constant");
  CHECK(c["field"]["params"]["wx"] == 0.0);
  CHECK(c["field"]["params"]["wy"] == 0.0);
  CHECK(c["field"]["params"]["wz"] == 0.0);
  CHECK(c["observer"]["type"] == "inertial");
  CHECK(c["test_field"]["kind"] == "space_vector");
  CHECK(c["test_field"]["random_cubic"] == true);
  CHECK(c["points"]["count"] == 10);
  CHECK(c["points"]["box"] == 2.0);
  CHECK(c["oracle"]["s_step"] == 1e-4);
  CHECK(c["oracle"]["flow_step"] == 1e-5);
  CHECK(c["oracle"]["fd_h"] == 1e-5);
  CHECK(c["tolerances"]["lie"] == 1e-6);
  CHECK(c["tolerances"]["material"] == 1e-6);
  CHECK(c["tolerances"]["jaumann"] == 1e-6);

  // Re-parsing the canonical form is a fixed point.
  const Scenario again = parse_scenario_json(sc.canonical_json);
  CHECK(again.canonical_json == sc.canonical_json);
}

TEST_CASE("field parameters are validated and completed") {
  const Scenario sc =
      parse_scenario_json(R"({"field": {"name": "planar_vortex", "params": {"ell": 2.0}}})");
  CHECK(sc.field.params.at("ell") == 2.0);
  CHECK(sc.field.params.at("omega0") == 1.0);  // default filled in

  const Scenario str = parse_scenario_json(R"({"field": "uniform_expansion"})");
  CHECK(str.field.params.at("alpha") == 1.0);
}

TEST_CASE("configuration rejection") {
  // Every malformed document throws ConfigError, nothing else.
  const char* bad[] = {
      "not json",
      "[1, 2]",
      R"({"nam": "typo"})",
      R"({"seed": -3})",
      R"({"seed": 1.5})",
      R"({"name": 7})",
      R"({"field": "no_such_field"})",
      R"({"field": {"name": "simple_shear", "params": {"kapa": 1}}})",
      R"({"field": {"name": "planar_vortex", "params": {"ell": 0}}})",
      R"({"test_field": {"kind": "spinor", "random_cubic": true}})",
      R"({"test_field": {"kind": "space_vector"}})",
      R"({"test_field": {"kind": "space_vector", "constant": "e_y", "random_cubic": true}})",
      R"({"test_field": {"kind": "space_vector", "constant": "e_w"}})",
      R"({"test_field": {"kind": "four_vector", "constant": "e_y"}})",
      R"({"test_field": {"kind": "space_vector", "constant": [1, 0]}})",
      R"({"test_field": {"kind": "scalar", "polynomial": [[[1, 0, -1, 0, 0]]]}})",
      R"({"test_field": {"kind": "scalar", "polynomial": [[[1, 0, 0.5, 0, 0]]]}})",
      R"({"points": []})",
      R"({"points": [[0, 0, 0]]})",
      R"({"points": {"count": 0}})",
      R"({"points": {"count": 4, "t_range": [2, 1]}})",
      R"({"points": {"count": 4, "box": 0}})",
      R"({"oracle": {"s_step": 1e-6}})",
      R"({"oracle": {"bogus": 1}})",
      R"({"tolerances": {"bogus": 1}})",
      R"({"tolerances": {"lie": -1}})",
      R"({"observer": {"type": "warp"}})",
      R"({"observer": {"type": "rotating", "axis": [0, 0, 0]}})",
      R"({"observer": {"type": "corotating", "velocity": [1, 0, 0]}})",
      R"({"observer": {"type": "inertial", "omega0": 2}})",
  };
  for (const char* doc : bad) {
    CAPTURE(doc);
    CHECK_THROWS_AS((void)parse_scenario_json(doc), ConfigError);
  }
  CHECK_THROWS_AS((void)parse_scenario_file("does_not_exist.json"), ConfigError);
  CHECK(test_field_kinds().size() == 11);
}

TEST_CASE("point generation is seeded and bounded") {
  const Scenario sc = parse_scenario_json(
      R"({"seed": 42, "points": {"count": 25, "t_range": [1, 3], "box": 0.5}})");
  const std::vector<WorldPoint> pts = make_points(sc);
  REQUIRE(pts.size() == 25);
  for (const WorldPoint& p : pts) {
    CHECK(p.t >= 1.0);
    CHECK(p.t <= 3.0);
    CHECK(max_abs(p.q) <= 0.5);
  }
  // Same seed, same points; different seed, different points.
  const std::vector<WorldPoint> same = make_points(parse_scenario_json(
      R"({"seed": 42, "points": {"count": 25, "t_range": [1, 3], "box": 0.5}})"));
  CHECK(same[7].q == pts[7].q);
  const std::vector<WorldPoint> other = make_points(parse_scenario_json(
      R"({"seed": 43, "points": {"count": 25, "t_range": [1, 3], "box": 0.5}})"));
  CHECK(other[7].q != pts[7].q);

  const Scenario expl = parse_scenario_json(R"({"points": [[0.5, 1, -2, 3]]})");
  const std::vector<WorldPoint> e = make_points(expl);
  REQUIRE(e.size() == 1);
  CHECK(e[0].t == 0.5);
  CHECK(e[0].q == Vec3(1, -2, 3));
}

TEST_CASE("scenario run: shear transport of e_y") {
  const Scenario sc = parse_scenario_json(kShearDoc);
  const ScenarioRun run = run_scenario(sc);

  REQUIRE(run.reports.size() == 3);
  CHECK(run.reports[0].id == "scenario.material");
  CHECK(run.reports[1].id == "scenario.lie");
  CHECK(run.reports[2].id == "scenario.jaumann");
  for (const auto& r : run.reports) {
    CAPTURE(r.id);
    CHECK(r.passed);
    CHECK(r.tolerance == 1e-7);
  }
  CHECK(run.reports[0].points == 4);
  CHECK(run.reports[1].points == 4);
  CHECK(run.reports[2].points == 3);

  const std::vector<std::string> lines = lines_of(run.csv);
  REQUIRE(lines.size() == 2 + 4 + 4 + 3);
  CHECK(lines[0] == "# config: " + sc.canonical_json);
  CHECK(lines[1] == "scenario,point,derivative,component,t,qx,qy,qz,closed_form,oracle,residual");
  // One row per (point, derivative, component); closed forms are exact here.
  CHECK(lines[2].rfind("shear_ey,0,material,t,0,0,1,0,0,", 0) == 0);
  CHECK(lines[6].rfind("shear_ey,0,lie,t,0,0,1,0,0,", 0) == 0);
  CHECK(lines[7].rfind("shear_ey,0,lie,x,0,0,1,0,-1,", 0) == 0);
  CHECK(lines[10].rfind("shear_ey,0,jaumann,x,0,0,1,0,-0.5,", 0) == 0);

  // Byte-identical on re-run.
  const ScenarioRun rerun = run_scenario(sc);
  CHECK(rerun.csv == run.csv);

  // ... and for a seeded scenario with random draws as well.
  const Scenario seeded = parse_scenario_json(
      R"({"seed": 9, "field": "planar_vortex", "points": {"count": 3, "box": 1}})");
  CHECK(run_scenario(seeded).csv == run_scenario(seeded).csv);
}

TEST_CASE("scenario run: everything constant is exactly zero") {
  const Scenario sc = parse_scenario_json(R"({
    "name": "zero",
    "field": "constant",
    "test_field": {"kind": "space_vector", "constant": [0.2, -0.1, 0.4]},
    "points": [[0, 0.3, 0.6, -0.2], [1.5, -1, 0.5, 2]]
  })");
  const ScenarioRun run = run_scenario(sc);
  for (const auto& r : run.reports) {
    CAPTURE(r.id);
    CHECK(r.passed);
    CHECK(r.max_residual == 0.0);
  }
  const std::vector<std::string> lines = lines_of(run.csv);
  for (std::size_t i = 2; i < lines.size(); ++i) {
    CHECK(lines[i].substr(lines[i].size() - 6) == ",0,0,0");  // closed, oracle, residual
  }
}

TEST_CASE("scenario run: polynomial test field on a tensor kind") {
  const Scenario sc = parse_scenario_json(R"({
    "name": "poly",
    "field": {"name": "simple_shear"},
    "test_field": {"kind": "scalar", "polynomial": [[[1, 0, 1, 0, 0]]]},
    "points": [[0, 0, 2, 0]],
    "tolerances": {"lie": 1e-8, "material": 1e-8, "jaumann": 1e-8}
  })");
  const ScenarioRun run = run_scenario(sc);
  REQUIRE(run.reports.size() == 2);  // no jaumann rows for a scalar
  CHECK(run.reports[0].passed);
  CHECK(run.reports[1].passed);
  const std::vector<std::string> lines = lines_of(run.csv);
  REQUIRE(lines.size() == 4);
  // f = q_x advected by the shear at (0, (0,2,0)): rate 2.
  CHECK(lines[2].rfind("poly,0,material,value,0,0,2,0,2,", 0) == 0);
  CHECK(lines[3].rfind("poly,0,lie,value,0,0,2,0,2,", 0) == 0);

  // A random tensor kind exercises the 16-component arena.
  const Scenario tsc = parse_scenario_json(R"({
    "name": "tens",
    "field": "planar_vortex",
    "test_field": {"kind": "cov_tensor", "random_cubic": true},
    "points": [[0.2, 0.4, -0.3, 0.1]]
  })");
  const ScenarioRun trun = run_scenario(tsc);
  REQUIRE(trun.reports.size() == 2);
  CHECK(trun.reports[0].points == 16);
  CHECK(trun.reports[0].passed);
  CHECK(trun.reports[1].passed);
  const std::vector<std::string> tlines = lines_of(trun.csv);
  CHECK(tlines.size() == 2 + 32);
  CHECK(tlines[2].rfind("tens,0,material,tt,", 0) == 0);
  CHECK(tlines[18].rfind("tens,0,lie,tt,", 0) == 0);
}

TEST_CASE("tables: convected comparison and split roundtrip") {
  const Scenario sc = parse_scenario_json(kShearDoc);

  const std::string conv = emit_table("convected_comparison", sc);
  const std::vector<std::string> clines = lines_of(conv);
  REQUIRE(clines.size() == 2 + 3);
  CHECK(clines[0] == "# config: " + sc.canonical_json);
  CHECK(clines[1] == "scenario,point,component,t,qx,qy,qz,upper,lower,jaumann");
  CHECK(clines[2] == "shear_ey,0,x,0,0,1,0,-1,0,-0.5");
  CHECK(clines[3] == "shear_ey,0,y,0,0,1,0,0,0,0");
  CHECK(clines[4] == "shear_ey,0,z,0,0,1,0,0,0,0");

  const Scenario rsc = parse_scenario_json(R"({
    "name": "roundtrip",
    "seed": 5,
    "field": "rigid_rotation",
    "observer": {"type": "rotating", "omega0": 0.7, "axis": [0, 1, 1],
                 "origin": [0, 0.2, 0, 0], "velocity": [0.1, 0, 0]},
    "points": {"count": 6, "t_range": [0, 4], "box": 1.5}
  })");
  const std::string round = emit_table("split_roundtrip", rsc);
  const std::vector<std::string> rlines = lines_of(round);
  REQUIRE(rlines.size() == 2 + 6);
  CHECK(rlines[1] == "scenario,point,t,qx,qy,qz,roundtrip_residual,identity_residual");
  for (std::size_t i = 2; i < rlines.size(); ++i) {
    std::istringstream row(rlines[i]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 8);
    CHECK(std::stod(cells[6]) <= 1e-9);
    CHECK(std::stod(cells[7]) <= 1e-9);
  }

  CHECK_THROWS_AS((void)emit_table("no_such_table", sc), ConfigError);
  const Scenario scalar_sc = parse_scenario_json(
      R"({"test_field": {"kind": "scalar", "constant": 1}, "points": [[0, 0, 0, 0]]})");
  CHECK_THROWS_AS((void)emit_table("convected_comparison", scalar_sc), ConfigError);
  CHECK_THROWS_AS((void)emit_table("corotating", sc), ConfigError);
}

TEST_CASE("tables: corotating identity along the carrier particle") {
  const Scenario sc = parse_scenario_json(R"({
    "name": "riding",
    "field": "rigid_rotation",
    "observer": {"type": "corotating", "origin": [0, 0.5, 0, 0]},
    "test_field": {"kind": "space_vector", "constant": "e_x"},
    "points": [[0, 0, 0, 0], [0.25, 0, 0, 0], [0.5, 0, 0, 0]]
  })");
  const std::string table = emit_table("corotating", sc);
  const std::vector<std::string> lines = lines_of(table);
  REQUIRE(lines.size() == 2 + 9);
  CHECK(lines[1] == "scenario,point,component,t,partial0,jaumann_split,residual");
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    const std::string residual = line.substr(line.rfind(',') + 1);
    CHECK(std::stod(residual) <= 1e-5);
  }
}

TEST_CASE("report serialization") {
  const Scenario sc = parse_scenario_json(kShearDoc);
  const ScenarioRun run = run_scenario(sc);

  const std::string text = reports_to_text(run.reports);
  CHECK(text.find("scenario.lie") != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);

  const json j = json::parse(reports_to_json(run.reports));
  CHECK(j["all_passed"] == true);
  REQUIRE(j["checks"].size() == 3);
  CHECK(j["checks"][1]["id"] == "scenario.lie");
  CHECK(j["checks"][1]["passed"] == true);
  CHECK(j["checks"][1]["points"] == 4);
  CHECK(j["checks"][1]["tolerance"] == 1e-7);
}

TEST_CASE("scenario files parse like documents") {
  const std::string path = "harness_case_tmp.json";
  {
    std::ofstream out(path, std::ios::binary);
    out << kShearDoc;
  }
  const Scenario sc = parse_scenario_file(path);
  CHECK(sc.name == "shear_ey");
  CHECK(sc.canonical_json == parse_scenario_json(kShearDoc).canonical_json);
  std::remove(path.c_str());
}
