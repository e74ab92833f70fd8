#pragma once

// Self-checks shared by `lpm verify` and the acceptance binary.

#include "lpm/lyapunov_perron.hpp"
#include "lpm/models.hpp"

#include <string>
#include <vector>

namespace lpm {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Models the manifold checks run on: saddle1 (unstable), saddle2 (stable),
// reaction-diffusion at lambda 0.5 and 2, and an MMT plane wave with one
// unstable mode pair.
struct BenchModel {
  std::string name;
  ModelSystem model;
  double eps = 0.1;
  Index grid = 21;
  double T_max = 20.0;
};

std::vector<BenchModel> bench_models();

// alpha = beta = 1/2, sigma = -1, xi0 = 2, a = 1/2 over modes -1..5: the pair
// (-1, 5) is unstable with rate 1/2.
MmtParams unstable_mmt_params();

// Module invariant suites: graded_space, linear_analysis, model_library,
// lyapunov_perron, waterwave_linear, oracles; "all" runs every one of them.
std::vector<std::string> verify_suite_names();
std::vector<CheckResult> run_verify_suite(const std::string& suite);

// Acceptance criteria 1..13.
constexpr int kAcceptanceCount = 13;
CheckResult acceptance_criterion(int id);

}  // namespace lpm
