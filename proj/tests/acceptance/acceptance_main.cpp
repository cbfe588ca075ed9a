// Runs acceptance criteria 1-10 and prints one line per criterion.
// Pass --quick for the short subset.

#include <cstring>
#include <iostream>

#include "vending/acceptance.hpp"

int main(int argc, char** argv) {
  vending::AcceptanceOptions opt;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) opt.quick = true;
  }
  int failed = 0;
  vending::run_acceptance(opt, [&](const vending::CriterionResult& r) {
    std::cout << vending::format_result(r) << std::endl;
    if (!r.skipped && !r.passed) ++failed;
  });
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria passed")
            << std::endl;
  return failed ? 1 : 0;
}
