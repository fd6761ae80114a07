#pragma once

#include <string>
#include <vector>

namespace dicke {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Deterministic oracle checks: negativity constants, witness threshold and
/// phase curve, AIC identities, POVM structure, FPM-bound dominance, the
/// R rho R monotonicity property and the Schmidt-formula cross-check.
std::vector<CheckResult> verify_quick();

/// Quick checks plus the seed-ensemble statistical checks (AIC sign
/// patterns, physicality map band, posterior consistency).
std::vector<CheckResult> verify_full();

}  // namespace dicke
