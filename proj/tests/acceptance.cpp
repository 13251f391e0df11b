// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any
// criterion fails.

#include <iostream>

#include "pshlab/acceptance.hpp"

int main() {
  const pshlab::AcceptanceOptions options;
  int failed = 0;
  for (const auto& c : pshlab::acceptance_criteria()) {
    const auto r = pshlab::run_criterion(c, options);
    std::cout << pshlab::format_criterion(r) << std::endl;
    if (!r.pass) ++failed;
  }
  std::cout << (pshlab::acceptance_criteria().size() - failed) << "/" << pshlab::acceptance_criteria().size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
