#pragma once

#include <vector>

#include "odg/bspline.hpp"
#include "odg/types.hpp"

namespace odg {

enum class Side { lo, hi };

/// One of the 2d faces of the unit cube of a given patch. `dir` is the
/// 0-based parametric direction normal to the face.
struct FaceId {
  int patch = 0;
  int dir = 0;
  Side side = Side::lo;

  friend bool operator==(const FaceId&, const FaceId&) = default;
};

/// Maps face-parametric coordinates of face a onto face b: coordinate k of a
/// lands in coordinate perm[k] of b, reversed when flip[k] is set. Face
/// coordinates are the tangential directions in increasing order.
struct Orientation {
  std::vector<int> perm;
  std::vector<bool> flip;

  static Orientation identity(int tangential_dims);
  friend bool operator==(const Orientation&, const Orientation&) = default;
};

enum class InterfaceKind { matching, overlap };

struct InterfacePair {
  FaceId a;
  FaceId b;
  Orientation orientation;
  InterfaceKind kind = InterfaceKind::matching;
  /// Nominal overlap width set by make_overlap; 0 for matching pairs.
  double width = 0.0;
};

struct Jacobian {
  SmallMatrix matrix;   // matrix(a,b) = d x_a / d xhat_b
  double det = 0.0;
  SmallMatrix inverse;
};

struct FaceGeometry {
  Point x;
  Point normal;        // unit outward normal
  double measure = 0;  // surface element: |det J| |J^{-T} nhat|
  Point xhat;          // volume parametric point of the face point
};

/// B-spline patch: the image of [0,1]^d under x = sum_j C_j B_j(xhat).
class Patch {
 public:
  /// `control_points` is num_basis x d, rows in the space's flat order.
  Patch(TensorSpace space, Eigen::MatrixXd control_points);

  int dim() const noexcept { return space_.dim(); }
  const TensorSpace& space() const noexcept { return space_; }
  const Eigen::MatrixXd& control_points() const noexcept { return cps_; }

  Point map_point(const Point& xhat) const;

  /// Throws GeometryError when |det J| < 1e-12.
  Jacobian jacobian(const Point& xhat) const;

  /// Jacobian from an already evaluated basis (order >= 1).
  Jacobian jacobian(const TensorBasis& basis) const;

  /// `t` holds the d-1 face-parametric coordinates.
  FaceGeometry face_geometry(int dir, Side side, const Point& t) const;

  /// Largest physical element diameter (max distance between the images of
  /// an element's corners).
  double mesh_size() const;

  /// Smallest det J over the Gauss points of every element.
  double min_jacobian_det(int points_per_dir) const;

 private:
  TensorSpace space_;
  Eigen::MatrixXd cps_;
};

/// Basis functions, physical gradients (J^{-T} times parametric gradients)
/// and geometry at one parametric point of a patch.
struct PointEval {
  TensorBasis basis;
  std::vector<Point> gradients;
  Jacobian jacobian;
  Point x;
};

PointEval evaluate_point(const Patch& patch, const Point& xhat);

/// As evaluate_point, plus outward normal and surface measure of a face.
struct FacePointEval {
  PointEval point;
  Point normal;
  double measure = 0.0;
};

FacePointEval evaluate_face_point(const Patch& patch, int dir, Side side, const Point& t);

/// Embeds face coordinates `t` into the volume parameter of the face.
Point face_to_volume(int dim, int dir, Side side, const Point& t);

/// Tangential parametric directions of a face, in increasing order.
std::vector<int> tangential_dirs(int dim, int dir);

struct MultiPatch {
  int dim = 2;
  std::vector<Patch> patches;
  std::vector<InterfacePair> interfaces;
  std::vector<FaceId> dirichlet;

  /// Checks face ownership (every face in exactly one interface or on the
  /// Dirichlet boundary), index ranges and orientation data. Throws
  /// TopologyError.
  void validate() const;

  int total_dofs() const;
  std::vector<int> dof_offsets() const;
  double mesh_size() const;
};

enum class PairSide { a, b };

struct PartnerPoint {
  FaceId face;
  Point t;     // face-parametric point on the partner face
  Point xhat;  // same point in the partner's volume parameter
};

/// Pairs a face point of one side of an interface with its partner on the
/// other side through the orientation map (shared face parameter).
PartnerPoint partner_point(const MultiPatch& mp, int pair, PairSide from, const Point& t);

/// Face-parametric point of side b for a point `t` on side a, and back.
Point orient_a_to_b(const Orientation& o, const Point& t);
Point orient_b_to_a(const Orientation& o, const Point& t);

/// Returns a copy of `mp` where the interface layer of control points of side
/// b of `pair` is translated by `width` along the averaged interface normal
/// (outward from b, into a). width == 0 returns `mp` unchanged. Throws
/// TopologyError when the pair is not matching and GeometryError when the
/// displaced patch loses Jacobian positivity.
MultiPatch make_overlap(const MultiPatch& mp, int pair, double width);

/// Largest distance between paired points over a (samples)^(d-1) grid on
/// face a. A sampled lower bound of the true supremum.
double overlap_width(const MultiPatch& mp, int pair, int samples = 100);

/// Uniform refinement of every patch, with control points updated by knot
/// insertion so the geometry is unchanged.
MultiPatch refine_uniform(const MultiPatch& mp);

}  // namespace odg
