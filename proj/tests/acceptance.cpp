// Acceptance gate: runs the full verification suite at production
// resolution (lmax 16, grid 96) and prints one pass/fail line per
// criterion. Exit status 0 iff everything passes.

#include <cstdio>

#include "drop/verify.hpp"

int main() {
  drop::VerifyOptions opt;  // defaults: lmax 16, grid 96
  const auto results = drop::run_verification(opt);
  std::fputs(drop::format_results(results).c_str(), stdout);
  size_t passed = 0;
  for (const auto& r : results)
    if (r.pass) ++passed;
  const bool ok = drop::all_passed(results);
  std::printf("%s: %zu/%zu criteria passed\n", ok ? "ACCEPTED" : "REJECTED",
              passed, results.size());
  return ok ? 0 : 1;
}
