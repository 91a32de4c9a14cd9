#pragma once

#include <string>
#include <vector>

namespace qrl {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

// Fast checks: gradient oracle, Hessian-trace statistics, perturbation sweep,
// channel oracle equivalence, shot-noise scaling, shot-allocation behaviour,
// bound self-consistency, determinism. work_dir holds their data files.
std::vector<CriterionResult> run_fast_acceptance(const std::string& work_dir);

// Training-scale checks: noise-free RL smoke runs and the noise-robustness
// evaluation of a trained tour agent. Takes hours.
std::vector<CriterionResult> run_long_acceptance(const std::string& work_dir);

int print_and_score(const std::vector<CriterionResult>& results);

}  // namespace qrl
