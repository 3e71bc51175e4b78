#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "odg/types.hpp"

namespace odg {

/// Open knot vector on [0,1] together with its degree.
///
/// The end knots are repeated exactly degree+1 times and interior knots at
/// most degree times, so the spline space is at least C0 at every breakpoint.
class KnotVector {
 public:
  /// Throws ConfigError when the knots do not form a valid open knot vector.
  KnotVector(int degree, std::vector<double> knots);

  /// Open knot vector with `elements` equal spans and simple interior knots.
  static KnotVector uniform(int degree, int elements);

  int degree() const noexcept { return degree_; }
  std::span<const double> knots() const noexcept { return knots_; }
  int num_basis() const noexcept {
    return static_cast<int>(knots_.size()) - degree_ - 1;
  }

  /// Distinct knot values in increasing order, including 0 and 1.
  std::vector<double> breaks() const;
  int num_elements() const { return static_cast<int>(breaks().size()) - 1; }
  double max_span_length() const;

  /// Index i with knots[i] <= x < knots[i+1]; x = 1 maps to the last
  /// nonempty span.
  int find_span(double x) const;

  /// Knot average of basis function i.
  double greville(int i) const;

  /// Inserts the midpoint of every nonempty span once.
  KnotVector refine_uniform() const;

  friend bool operator==(const KnotVector&, const KnotVector&) = default;

 private:
  int degree_;
  std::vector<double> knots_;
};

/// Nonzero basis values at a point: B_{first}, ..., B_{first+p}.
struct BasisValues {
  int first = 0;
  std::vector<double> values;
};

/// Row r holds the r-th derivatives of the p+1 nonzero basis functions.
struct BasisDerivatives {
  int first = 0;
  std::vector<std::vector<double>> table;
};

BasisValues eval_basis(const KnotVector& kv, double x);

/// Derivatives up to `order` (order <= degree, otherwise DegreeError).
BasisDerivatives eval_basis_derivs(const KnotVector& kv, double x, int order);

/// Tensor-product spline space on [0,1]^d, d in {2,3}. Flat indices are
/// lexicographic with the first direction running fastest.
class TensorSpace {
 public:
  explicit TensorSpace(std::vector<KnotVector> directions);

  int dim() const noexcept { return static_cast<int>(dirs_.size()); }
  const KnotVector& direction(int k) const { return dirs_.at(static_cast<std::size_t>(k)); }
  const std::vector<KnotVector>& directions() const noexcept { return dirs_; }

  int num_basis() const noexcept { return num_basis_; }
  int num_basis(int k) const { return direction(k).num_basis(); }

  int flat_index(std::span<const int> multi) const;
  std::vector<int> multi_index(int flat) const;

  /// Number of elements (nonempty knot spans) per direction.
  std::vector<int> element_counts() const;

  TensorSpace refine_uniform() const;

  friend bool operator==(const TensorSpace&, const TensorSpace&) = default;

 private:
  std::vector<KnotVector> dirs_;
  int num_basis_ = 0;
};

/// Nonzero tensor-product basis functions at one parametric point.
struct TensorBasis {
  std::vector<int> indices;        // flat indices into the space
  std::vector<double> values;
  std::vector<Point> gradients;    // parametric gradients, empty for order 0
};

/// Evaluates the (p+1)^d nonzero functions and, for order >= 1, their
/// parametric gradients.
TensorBasis tensor_eval(const TensorSpace& space, const Point& xhat, int order);

}  // namespace odg
