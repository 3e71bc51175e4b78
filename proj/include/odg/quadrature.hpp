#pragma once

#include <span>
#include <vector>

#include "odg/bspline.hpp"
#include "odg/types.hpp"

namespace odg {

/// Gauss-Legendre rule on [0,1]; weights sum to 1.
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

/// n-point rule, exact for polynomials of degree 2n-1. Nodes come from Newton
/// iteration on the Legendre polynomial P_n.
QuadRule gauss_rule(int n);

struct QuadPoint {
  Point xhat;     // parametric point (volume) or face-parametric point (face)
  double weight;  // rule weight times the parametric cell measure
};

/// Tensor Gauss points inside one element of `space`, addressed by its
/// per-direction element index.
std::vector<QuadPoint> element_quadrature(const TensorSpace& space, std::span<const int> element,
                                          const QuadRule& rule);

/// Tensor Gauss points on an axis-aligned box given by per-direction
/// [lo, hi] intervals. Degenerate intervals produce no points.
std::vector<QuadPoint> box_quadrature(std::span<const double> lo, std::span<const double> hi,
                                      const QuadRule& rule);

/// Gauss points on the element faces of `space` lying on the face normal to
/// direction `normal_dir`, addressed by the (d-1) tangential element index.
/// Returned points are face-parametric (d-1 coordinates).
std::vector<QuadPoint> face_quadrature(const TensorSpace& space, int normal_dir,
                                       std::span<const int> face_element, const QuadRule& rule);

}  // namespace odg
