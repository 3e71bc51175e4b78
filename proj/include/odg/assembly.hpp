#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include <Eigen/Sparse>

#include "odg/geometry.hpp"
#include "odg/quadrature.hpp"

namespace odg {

/// Field evaluated on a physical point, with the owning patch index. Patch
/// awareness lets piecewise data be extended smoothly into overlaps.
using ScalarField = std::function<double(int patch, const Point& x)>;
using VectorField = std::function<Point(int patch, const Point& x)>;

struct ProblemSpec {
  std::vector<double> diffusion;  // one positive constant per patch
  ScalarField source;
  ScalarField dirichlet;
  ScalarField exact;              // optional, needed for error evaluation
  VectorField exact_gradient;     // optional, needed for error evaluation

  /// Throws ConfigError on a non-positive coefficient, a size mismatch or
  /// missing source / boundary data.
  void validate(const MultiPatch& mp) const;
  bool has_exact() const { return static_cast<bool>(exact) && static_cast<bool>(exact_gradient); }
};

enum class FluxVariant {
  symmetric,  // average flux, symmetrizing term, symmetric penalty
  one_sided,  // average flux and penalty tested on each face's own side, no symmetrization
};

struct AssemblyConfig {
  double penalty = 36.0;
  FluxVariant variant = FluxVariant::symmetric;
  int quad_points = 3;

  /// penalty = 4(p+1)^2, quad_points = p+1.
  static AssemblyConfig defaults(int degree);
};

struct LinearSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<int> offsets;  // patch i owns dofs [offsets[i], offsets[i+1])
};

/// Collects triplets and right-hand side entries for one multipatch.
class SystemBuilder {
 public:
  explicit SystemBuilder(const MultiPatch& mp);

  void add(int row, int col, double value) { triplets_.emplace_back(row, col, value); }
  void add_rhs(int row, double value) { rhs_[row] += value; }
  const std::vector<int>& offsets() const noexcept { return offsets_; }

  LinearSystem finalize() &&;

 private:
  std::vector<int> offsets_;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::VectorXd rhs_;
};

/// Volume stiffness and load terms of one patch.
void assemble_volume(SystemBuilder& sys, const MultiPatch& mp, int patch, const ProblemSpec& spec,
                     const AssemblyConfig& cfg);

/// Nitsche terms of one outer Dirichlet face.
void assemble_dirichlet_nitsche(SystemBuilder& sys, const MultiPatch& mp, const FaceId& face,
                                const ProblemSpec& spec, const AssemblyConfig& cfg);

/// Interior-penalty coupling across interface `pair`. Matching pairs get one
/// integral over face a; overlap pairs get one integral on each face, with
/// partner values taken at the paired point of the opposite face.
void assemble_interface_flux(SystemBuilder& sys, const MultiPatch& mp, int pair,
                             const ProblemSpec& spec, const AssemblyConfig& cfg);

LinearSystem assemble(const MultiPatch& mp, const ProblemSpec& spec, const AssemblyConfig& cfg);

/// Mesh size entering the interface penalty: the larger of the two patches'.
double interface_mesh_size(const MultiPatch& mp, int pair);

/// Quadrature on the union of both faces' knot lines, in face-a parameters.
std::vector<QuadPoint> interface_quadrature(const MultiPatch& mp, int pair, int points);

/// Writes "row col value" lines (0-based, 17 significant digits).
void write_coordinate_matrix(const Eigen::SparseMatrix<double>& m, const std::filesystem::path& path);

}  // namespace odg
