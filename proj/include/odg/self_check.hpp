#pragma once

#include <string>
#include <vector>

namespace odg {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant suite behind `overlap-dgiga check`: basis, quadrature and
/// geometry properties, matrix symmetry and definiteness, pairing, the
/// zero-width overlap limit, manufactured residuals and DG-norm accounting.
/// Runs on coarse versions of every shipped example.
std::vector<CheckResult> run_self_checks();

}  // namespace odg
