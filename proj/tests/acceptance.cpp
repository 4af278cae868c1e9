// Runs every acceptance criterion and prints one PASS/FAIL line each, followed by the
// failing checks. Arguments select criteria by number or id.

#include <cstdio>
#include <string>
#include <vector>

#include "fraclap/verification.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  std::vector<fraclap::CriterionResult> results;
  try {
    results = fraclap::run_verification(only);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance: %s\n", e.what());
    return 2;
  }
  int failed = 0;
  for (const auto& r : results) {
    std::printf("[%s] %2d %-20s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.number, r.id.c_str(), r.seconds,
                r.title.c_str());
    if (!r.error.empty()) std::printf("       error: %s\n", r.error.c_str());
    for (const auto& c : r.checks) {
      if (c.pass) continue;
      std::printf("       %s: measured %.10g expected %.10g tol %.3g\n", c.label.c_str(), c.measured, c.expected,
                  c.tolerance);
    }
    if (!r.pass) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
