// Acceptance gate: one pass/fail line per criterion. The fast criteria run
// by default (and under ctest); --long adds the training-scale smoke runs
// and the noise-robustness evaluation.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "qrl/acceptance.hpp"

int main(int argc, char** argv) {
  std::string work_dir = "acceptance_work";
  bool long_suite = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--long") == 0) {
      long_suite = true;
    } else if (std::strcmp(argv[i], "--work-dir") == 0 && i + 1 < argc) {
      work_dir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--long] [--work-dir DIR]\n", argv[0]);
      return 2;
    }
  }

  std::vector<qrl::CriterionResult> results = qrl::run_fast_acceptance(work_dir);
  if (long_suite) {
    auto more = qrl::run_long_acceptance(work_dir);
    results.insert(results.end(), more.begin(), more.end());
  }
  const int failures = qrl::print_and_score(results);
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", results.size());
  return 0;
}
