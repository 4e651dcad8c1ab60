#include <doctest.h>

#include <algorithm>

#include "stkin/checks.hpp"

using namespace stkin::checks;

TEST_CASE("the standard check registry is well formed") {
  const std::vector<Check>& checks = standard_checks();
  CHECK(checks.size() >= 25);
  CHECK(std::is_sorted(checks.begin(), checks.end(),
                       [](const Check& a, const Check& b) { return a.id < b.id; }));
  for (const Check& c : checks) {
    CAPTURE(c.id);
    CHECK_FALSE(c.id.empty());
    CHECK_FALSE(c.description.empty());
    CHECK(c.tolerance >= 0.0);
    CHECK(static_cast<bool>(c.run));
    // Every identifier lives in one of the library's areas.
    const bool known_area = c.id.rfind("fields.", 0) == 0 ||
                            c.id.rfind("observers.", 0) == 0 ||
                            c.id.rfind("derivatives.", 0) == 0;
    CHECK(known_area);
  }
}

TEST_CASE("filtering selects by substring") {
  const std::vector<CheckReport> one = run_checks("lie_u_u");
  REQUIRE(one.size() == 1);
  CHECK(one.front().id == "derivatives.lie_u_u");
  CHECK(one.front().passed);
  CHECK(one.front().points > 0);
  CHECK(one.front().max_residual <= one.front().tolerance);

  const std::vector<CheckReport> none = run_checks("no_such_check");
  CHECK(none.empty());
  CHECK(all_passed(none));  // vacuously

  const std::vector<CheckReport> area = run_checks("observers.");
  CHECK(area.size() >= 8);
  for (const CheckReport& r : area) CHECK(r.id.rfind("observers.", 0) == 0);
}

TEST_CASE("a report fails exactly when the residual exceeds the tolerance") {
  Check corrupted;
  corrupted.id = "synthetic.corrupted";
  corrupted.description = "always produces a positive residual";
  corrupted.tolerance = 0.0;
  corrupted.run = [] { return CheckResult{1e-12, 1}; };
  const CheckReport r = run_check(corrupted);
  CHECK_FALSE(r.passed);
  CHECK(r.max_residual == 1e-12);
  CHECK(r.tolerance == 0.0);
  CHECK_FALSE(all_passed({r}));

  Check clean = corrupted;
  clean.id = "synthetic.clean";
  clean.tolerance = 1e-10;
  const CheckReport ok = run_check(clean);
  CHECK(ok.passed);
  CHECK(ok.wall_ms >= 0.0);
}

TEST_CASE("the full suite passes") {
  const std::vector<CheckReport> all = run_checks();
  CHECK(all.size() == standard_checks().size());
  CHECK(all_passed(all));
  for (const CheckReport& r : all) {
    CAPTURE(r.id);
    CHECK(r.passed);
    CHECK(r.points > 0);
  }
}
