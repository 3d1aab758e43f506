// Acceptance gate: runs the full reproduce suite and prints one PASS/FAIL
// line per criterion. Every criterion must pass for the binary to succeed.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "prophet/reproduce.hpp"

TEST_CASE("acceptance criteria") {
  std::vector<prophet::CriterionResult> results = prophet::reproduce_suite();
  REQUIRE(results.size() == 14);
  for (const auto& r : results) {
    std::printf("%s %2d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    std::fflush(stdout);
  }
  for (const auto& r : results) {
    INFO(r.id << " " << r.name << ": " << r.detail);
    CHECK(r.pass);
  }
}
