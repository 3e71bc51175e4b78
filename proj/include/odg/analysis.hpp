#pragma once

#include <optional>
#include <vector>

#include "odg/assembly.hpp"
#include "odg/solver.hpp"

namespace odg {

/// DG-norm error split into its three contributions, plus the L2 error.
struct ErrorReport {
  double h = 0.0;
  double dg_error = 0.0;
  double volume = 0.0;     // sqrt(sum_i rho_i ||grad e_i||^2)
  double boundary = 0.0;   // sqrt(sum_i rho_i/h ||e_i||^2 on the outer boundary)
  double interface = 0.0;  // sqrt(sum over interface faces {rho}/h ||e_i||^2)
  double l2_error = 0.0;
  double overlap_width = 0.0;
  int dofs = 0;
};

/// Evaluates ||u - u_h||_DG against the exact solution carried by `spec`.
/// Uses p+2 Gauss points per direction unless `quad_points` is positive.
/// Throws ConfigError when the exact solution is missing.
ErrorReport dg_error(const DiscreteSolution& sol, const ProblemSpec& spec, int quad_points = 0);

/// r_i = ln(e_i / e_{i+1}) / ln(h_i / h_{i+1}); nullopt when either error
/// is zero (undefined rate). Throws ConfigError for fewer than two levels.
std::vector<std::optional<double>> convergence_rates(const std::vector<double>& errors,
                                                     const std::vector<double>& h);

struct ConvergenceTable {
  std::vector<ErrorReport> levels;
  double lambda = 0.0;

  /// Rates of the DG error between consecutive levels (index i is the rate
  /// from level i-1 to level i; index 0 is empty).
  std::vector<std::optional<double>> rates() const;

  /// Mean of the last two level-to-level rates (or the only one).
  std::optional<double> final_rate() const;
};

}  // namespace odg
