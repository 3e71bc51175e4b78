#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "odg/assembly.hpp"
#include "odg/geometry.hpp"

namespace odg {

struct SolverOptions {
  double tolerance = 1e-10;   // relative residual ||Ax-b|| / ||b||
  int max_iterations = 0;     // 0 means 10 * dofs
  int dense_threshold = 2000; // below this many dofs use a dense factorization
};

struct SolveReport {
  std::string method;  // "cg", "dense-ldlt", "dense-lu", "sparse-lu"
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Stops when ||r||/||b|| <= tol.
/// Throws SolverError with the final residual when max_iter is exhausted.
Eigen::VectorXd conjugate_gradient(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                                   double tol, int max_iter, SolveReport* report = nullptr);

/// Dense LDLT for symmetric matrices, partial-pivot LU otherwise.
Eigen::VectorXd dense_direct_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                                   SolveReport* report = nullptr);

/// Solves A x = b: dense below the threshold, CG for symmetric systems
/// (falling back to a direct factorization on stagnation), sparse LU for
/// non-symmetric ones. The residual contract is checked before returning.
Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             const SolverOptions& opts = {}, SolveReport* report = nullptr);

/// Per-patch coefficients of the discrete solution.
class DiscreteSolution {
 public:
  DiscreteSolution(std::shared_ptr<const MultiPatch> mp, std::vector<Eigen::VectorXd> coefficients);

  const MultiPatch& multipatch() const noexcept { return *mp_; }
  const Eigen::VectorXd& coefficients(int patch) const {
    return coeffs_.at(static_cast<std::size_t>(patch));
  }
  int num_dofs() const;

 private:
  std::shared_ptr<const MultiPatch> mp_;
  std::vector<Eigen::VectorXd> coeffs_;
};

DiscreteSolution solve(std::shared_ptr<const MultiPatch> mp, const LinearSystem& system,
                       const SolverOptions& opts = {}, SolveReport* report = nullptr);

struct SolutionValue {
  double value = 0.0;
  Point gradient;  // physical gradient, empty unless requested
};

SolutionValue eval_solution(const DiscreteSolution& sol, int patch, const Point& xhat,
                            bool with_gradient);

/// True when a sparse Cholesky factorization succeeds.
bool is_positive_definite(const Eigen::SparseMatrix<double>& A);

/// Smallest eigenvalue of a symmetric positive definite matrix by inverse
/// power iteration (sparse LDLT inner solves, so a negative result flags an
/// indefinite matrix). Throws SolverError if the factorization fails.
double smallest_eigenvalue(const Eigen::SparseMatrix<double>& A, int iterations = 200);

}  // namespace odg
