// Acceptance gate: runs every acceptance criterion end-to-end and prints one
// pass/fail line per criterion. Slow by design (statistical trend criteria);
// the per-module unit suites cover the fast properties.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "dpsyn/verify.hpp"

TEST_CASE("acceptance criteria 1-9") {
  dpsyn::VerifyOptions options;
  options.case_path = DPSYN_DATA_DIR "/case4star.json";
  const auto results = dpsyn::run_acceptance(options, [](const dpsyn::CriterionResult& result) {
    std::printf("%s\n", dpsyn::format_criterion(result).c_str());
    std::fflush(stdout);
  });
  REQUIRE(results.size() == 9);
  for (const auto& result : results) {
    CHECK_MESSAGE(result.passed, dpsyn::format_criterion(result));
  }
}
