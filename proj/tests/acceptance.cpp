// Acceptance gate: nine library-level criteria, one pass/fail line each.
// Exits 0 only when every criterion holds.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "stkin/scenario.hpp"

using stkin::checks::CheckReport;

namespace {

struct Criterion {
  const char* label;
  const char* description;
  std::vector<std::string> members;
};

const char* kDeterminismDoc = R"({
  "name": "acceptance",
  "seed": 11,
  "field": "planar_vortex",
  "observer": {"type": "rotating", "omega0": 0.8, "axis": [0, 0, 1]},
  "test_field": {"kind": "space_vector", "random_cubic": true},
  "points": {"count": 5, "t_range": [0, 1], "box": 1.0}
})";

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const std::vector<CheckReport> reports = stkin::checks::run_checks();
  const double suite_seconds = std::chrono::duration<double>(clock::now() - start).count();

  std::map<std::string, const CheckReport*> by_id;
  for (const CheckReport& r : reports) by_id[r.id] = &r;

  const std::vector<Criterion> criteria = {
      {"C1", "observer splitting round-trips; split and unsplit jacobians invert",
       {"observers.split_roundtrip", "observers.dhp_identity"}},
      {"C2", "frames stay orthogonal and rigid; angular velocity matches the implied gradient",
       {"observers.rotation_orthogonality", "observers.rigidity",
        "observers.angvel_gradient_fd"}},
      {"C3", "the carrier field is invariant along its own flow", {"derivatives.lie_u_u"}},
      {"C4", "closed-form derivatives match the flow-pullback oracle for every tensor kind",
       {"derivatives.lie_oracle_equivalence", "derivatives.oracle_convergence"}},
      {"C5", "the relative material derivative agrees with the split absolute one",
       {"derivatives.mattime_objectivity"}},
      {"C6", "convected rates are frame indifferent, including non-spacelike components",
       {"derivatives.frame_equivalence", "derivatives.nonspacelike_components"}},
      {"C7", "corotational rate: convected decomposition and corotating-frame identities",
       {"derivatives.jaumann_decomposition", "derivatives.jaumann_corotating_constant",
        "derivatives.jaumann_corotating_rotation", "derivatives.jaumann_corotating_vortex"}},
      {"C8", "the deformation gradient satisfies its rate equation and the volume law",
       {"derivatives.deformation_lie", "derivatives.deformation_volume"}},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    bool ok = true;
    const CheckReport* worst = nullptr;
    double worst_ratio = -1.0;
    std::string missing;
    for (const std::string& member : c.members) {
      const auto it = by_id.find(member);
      if (it == by_id.end()) {
        ok = false;
        missing += (missing.empty() ? "" : ", ") + member;
        continue;
      }
      const CheckReport* r = it->second;
      ok = ok && r->passed;
      const double ratio =
          r->tolerance > 0.0 ? r->max_residual / r->tolerance : r->max_residual;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst = r;
      }
    }
    if (!ok) ++failures;
    if (worst != nullptr) {
      std::printf("[%s] %s %s: max residual %.3e (tolerance %.0e, %s)\n",
                  ok ? "PASS" : "FAIL", c.label, c.description, worst->max_residual,
                  worst->tolerance, worst->id.c_str());
    } else {
      std::printf("[FAIL] %s %s: missing checks %s\n", c.label, c.description,
                  missing.c_str());
    }
  }

  // C9: the whole verification suite is fast and its outputs are reproducible.
  bool deterministic = false;
  std::string c9_note;
  try {
    const stkin::harness::Scenario sc =
        stkin::harness::parse_scenario_json(kDeterminismDoc);
    const stkin::harness::ScenarioRun a = stkin::harness::run_scenario(sc);
    const stkin::harness::ScenarioRun b = stkin::harness::run_scenario(sc);
    deterministic = !a.csv.empty() && a.csv == b.csv;
    c9_note = deterministic ? "reruns byte-identical" : "rerun output differs";
  } catch (const std::exception& e) {
    c9_note = std::string("scenario failed: ") + e.what();
  }
  const bool within_budget = suite_seconds < 60.0;
  const bool c9 = deterministic && within_budget;
  if (!c9) ++failures;
  std::printf("[%s] C9 the check suite is reproducible and fast: %.2f s (budget 60 s), %s\n",
              c9 ? "PASS" : "FAIL", suite_seconds, c9_note.c_str());

  const int total = static_cast<int>(criteria.size()) + 1;
  std::printf("acceptance: %d/%d criteria passed\n", total - failures, total);
  return failures == 0 ? 0 : 1;
}
