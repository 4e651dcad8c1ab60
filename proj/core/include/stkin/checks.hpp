#pragma once

// The invariant suite: every library-level identity packaged as a named,
// independently runnable check with a pinned tolerance. The CLI `check`
// subcommand and the acceptance tests both run these.

#include <functional>
#include <string>
#include <vector>

namespace stkin::checks {

struct CheckResult {
  double max_residual = 0.0;
  int points = 0;
};

struct Check {
  std::string id;
  std::string description;
  double tolerance = 0.0;
  std::function<CheckResult()> run;
};

struct CheckReport {
  std::string id;
  std::string description;
  double tolerance = 0.0;
  double max_residual = 0.0;
  int points = 0;
  bool passed = false;
  double wall_ms = 0.0;
};

/// The full registry, ordered by id.
std::vector<Check> standard_checks();

CheckReport run_check(const Check& check);

/// Run every check whose id contains `filter` (all when empty).
std::vector<CheckReport> run_checks(const std::string& filter = "");

bool all_passed(const std::vector<CheckReport>& reports);

}  // namespace stkin::checks
