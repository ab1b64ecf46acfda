#pragma once

// The end-to-end acceptance suite: nine numbered criteria covering catalog
// membership, the forced jet table, normalization round-trips, stabilizer
// witnesses, orbit rank, the accumulation dichotomy, positive-signature
// sweeps, the component census, and the algebra property kit. Each criterion
// carries its own runtime budget; a criterion passes only when its checks
// hold and it finishes inside the budget.

#include <string>
#include <vector>

namespace hq {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double limit_seconds = 0.0;  // 0 = no budget
  std::string detail;          // one line of numeric evidence or the failure
};

// Runs criterion `only` (1..9), or all of them when `only` is 0, in order.
std::vector<CriterionResult> run_acceptance(int only = 0);

// "PASS 3 normalization-round-trip [0.4s/120s] detail..."
std::string format_criterion_line(const CriterionResult& r);

}  // namespace hq
