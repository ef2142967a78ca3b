#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace dpsyn {

// Outcome of one acceptance criterion: a pass/fail verdict plus the measured
// and expected values, so a failing run says what it saw.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string measured;
  std::string expected;
  double seconds = 0.0;
};

struct VerifyOptions {
  std::string case_path = "data/case4star.json";  // reduced network for criterion 7
  std::uint64_t seed = 0;
  int jobs = 1;
  // Shrinks the replication counts of the slow statistical criteria (4 and 7)
  // so the suite finishes in ~a minute. The acceptance gate runs full scale.
  bool quick = false;
};

// Runs acceptance criteria 1-9 in order and returns one result each. The
// callback, when given, fires as each criterion finishes (progress output for
// the slow statistical criteria).
std::vector<CriterionResult> run_acceptance(
    const VerifyOptions& options,
    const std::function<void(const CriterionResult&)>& on_result = {});

// One line per criterion: "criterion N PASS/FAIL name (measured ...; expected ...)".
std::string format_criterion(const CriterionResult& result);

nlohmann::json verify_report_json(const std::vector<CriterionResult>& results);

}  // namespace dpsyn
