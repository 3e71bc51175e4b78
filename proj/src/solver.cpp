#include "odg/solver.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "odg/errors.hpp"

namespace odg {

namespace {

bool is_symmetric(const Eigen::SparseMatrix<double>& A) {
  const Eigen::SparseMatrix<double> At = A.transpose();
  const double scale = A.coeffs().cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  const Eigen::SparseMatrix<double> D = A - At;
  return D.nonZeros() == 0 || D.coeffs().cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

double relative_residual(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (b - A * x).norm();
  return nb == 0.0 ? nr : nr / nb;
}

}  // namespace

Eigen::VectorXd conjugate_gradient(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                                   double tol, int max_iter, SolveReport* report) {
  const Eigen::Index n = b.size();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const double nb = b.norm();
  if (nb == 0.0) {
    if (report) *report = {"cg", 0, 0.0};
    return x;
  }
  Eigen::VectorXd inv_diag(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    inv_diag[i] = d != 0.0 ? 1.0 / d : 1.0;
  }
  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd Ap(n);
  double rz = r.dot(z);
  double res = 1.0;
  for (int it = 1; it <= max_iter; ++it) {
    Ap.noalias() = A * p;
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) {
      throw SolverError("conjugate gradients broke down (matrix not positive definite)", res);
    }
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    res = r.norm() / nb;
    if (res <= tol) {
      // Confirm against the true residual; the recursive one can drift.
      res = relative_residual(A, x, b);
      if (res <= tol) {
        if (report) *report = {"cg", it, res};
        return x;
      }
      r = b - A * x;
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  throw SolverError("conjugate gradients did not converge in " + std::to_string(max_iter) +
                        " iterations (relative residual " + std::to_string(res) + ")",
                    res);
}

Eigen::VectorXd dense_direct_solve(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                                   SolveReport* report) {
  const Eigen::MatrixXd dense(A);
  Eigen::VectorXd x;
  std::string method;
  if (is_symmetric(A)) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(dense);
    if (ldlt.info() != Eigen::Success) throw SolverError("dense LDLT failed", 1.0);
    x = ldlt.solve(b);
    method = "dense-ldlt";
  } else {
    x = dense.partialPivLu().solve(b);
    method = "dense-lu";
  }
  if (report) *report = {method, 0, relative_residual(A, x, b)};
  return x;
}

Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             const SolverOptions& opts, SolveReport* report) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw ConfigError("linear system dimensions do not match");
  }
  const auto n = static_cast<int>(A.rows());
  SolveReport local;
  Eigen::VectorXd x;
  if (n < opts.dense_threshold) {
    x = dense_direct_solve(A, b, &local);
  } else if (is_symmetric(A)) {
    const int max_iter = opts.max_iterations > 0 ? opts.max_iterations : 10 * n;
    try {
      x = conjugate_gradient(A, b, opts.tolerance, max_iter, &local);
    } catch (const SolverError&) {
      // Stagnation or breakdown: fall back to a direct sparse factorization.
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
      if (ldlt.info() != Eigen::Success) throw SolverError("sparse LDLT fallback failed", 1.0);
      x = ldlt.solve(b);
      local = {"sparse-ldlt", 0, relative_residual(A, x, b)};
    }
  } else {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) throw SolverError("sparse LU failed", 1.0);
    x = lu.solve(b);
    local = {"sparse-lu", 0, relative_residual(A, x, b)};
  }
  if (!(local.relative_residual <= opts.tolerance)) {
    throw SolverError("solution misses the residual tolerance (relative residual " +
                          std::to_string(local.relative_residual) + ")",
                      local.relative_residual);
  }
  if (report) *report = local;
  return x;
}

DiscreteSolution::DiscreteSolution(std::shared_ptr<const MultiPatch> mp,
                                   std::vector<Eigen::VectorXd> coefficients)
    : mp_(std::move(mp)), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != mp_->patches.size()) {
    throw ConfigError("one coefficient vector per patch required");
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i].size() != mp_->patches[i].space().num_basis()) {
      throw ConfigError("coefficient count of patch " + std::to_string(i) +
                        " does not match its space");
    }
  }
}

int DiscreteSolution::num_dofs() const {
  int n = 0;
  for (const auto& c : coeffs_) n += static_cast<int>(c.size());
  return n;
}

DiscreteSolution solve(std::shared_ptr<const MultiPatch> mp, const LinearSystem& system,
                       const SolverOptions& opts, SolveReport* report) {
  const Eigen::VectorXd x = solve_linear(system.matrix, system.rhs, opts, report);
  std::vector<Eigen::VectorXd> coeffs;
  for (std::size_t i = 0; i + 1 < system.offsets.size(); ++i) {
    coeffs.push_back(x.segment(system.offsets[i], system.offsets[i + 1] - system.offsets[i]));
  }
  return DiscreteSolution(std::move(mp), std::move(coeffs));
}

SolutionValue eval_solution(const DiscreteSolution& sol, int patch, const Point& xhat,
                            bool with_gradient) {
  const Patch& P = sol.multipatch().patches.at(static_cast<std::size_t>(patch));
  const auto& c = sol.coefficients(patch);
  SolutionValue out;
  if (!with_gradient) {
    const auto basis = tensor_eval(P.space(), xhat, 0);
    for (std::size_t j = 0; j < basis.indices.size(); ++j) {
      out.value += c[basis.indices[j]] * basis.values[j];
    }
    return out;
  }
  const auto ev = evaluate_point(P, xhat);
  out.gradient = Point::Zero(P.dim());
  for (std::size_t j = 0; j < ev.basis.indices.size(); ++j) {
    const double cj = c[ev.basis.indices[j]];
    out.value += cj * ev.basis.values[j];
    out.gradient += cj * ev.gradients[j];
  }
  return out;
}

bool is_positive_definite(const Eigen::SparseMatrix<double>& A) {
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A);
  return llt.info() == Eigen::Success;
}

double smallest_eigenvalue(const Eigen::SparseMatrix<double>& A, int iterations) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SolverError("factorization failed", 1.0);
  // Deterministic start vector with no special structure.
  Eigen::VectorXd v(A.rows());
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = static_cast<double>(state >> 11) / 9007199254740992.0 - 0.5;
  }
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::VectorXd w = ldlt.solve(v);
    const double norm = w.norm();
    if (norm == 0.0) break;
    v = w / norm;
    lambda = v.dot(A * v);
  }
  return lambda;
}

}  // namespace odg
