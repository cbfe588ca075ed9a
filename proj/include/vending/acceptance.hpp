#pragma once

// The numbered acceptance checks (1-10) shared by the `validate` command and
// the acceptance test binary.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vending/simplex_solver.hpp"

namespace vending {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  bool skipped = false;
  std::string measured;
  std::string expected;
  // Sub-check lines (property suites report one per suite).
  std::vector<std::string> notes;
};

struct AcceptanceOptions {
  // Criteria 1-8 only; 9 and 10 are reported as skipped.
  bool quick = false;
  SolverConfig cfg;
  // Starts per solve inside the randomized property suites.
  int suite_restarts = 4;
  int trials = 100;
  std::uint64_t seed = 20100514;
};

using CriterionCallback = std::function<void(const CriterionResult&)>;

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const CriterionCallback& on_result = {});

// One line, "[PASS] 3 ... | measured ... | expected ...", then the notes.
std::string format_result(const CriterionResult& r);

}  // namespace vending
