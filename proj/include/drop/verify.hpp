#pragma once

#include <string>
#include <vector>

#include "drop/branch.hpp"

namespace drop {

/// One acceptance check. `measured` and `tolerance` describe the worst
/// sub-check of the criterion; `detail` names it and records anything
/// informational (e.g. measured signs).
struct CheckResult {
  std::string name;
  double target = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  int lmax = 16;
  int grid_order = 96;
  double tol_scale = 1.0;  // multiplies every tolerance
  std::string only;        // substring filter on check names; empty = all
};

/// Runs the acceptance suite (or the subset selected by `only`).
std::vector<CheckResult> run_verification(const VerifyOptions& opt);

std::string format_results(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace drop
