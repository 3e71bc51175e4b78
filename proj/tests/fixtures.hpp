// Small geometries shared by the tests.
#pragma once

#include <functional>

#include "odg/geometry.hpp"

namespace fixture {

/// Patch whose control points are F(Greville point); reproduces F exactly
/// when F is affine in each direction.
inline odg::Patch interpolated(int dim, int p, int elements,
                               const std::function<odg::Point(const odg::Point&)>& F) {
  std::vector<odg::KnotVector> dirs(dim, odg::KnotVector::uniform(p, elements));
  odg::TensorSpace space(dirs);
  Eigen::MatrixXd cps(space.num_basis(), dim);
  for (int j = 0; j < space.num_basis(); ++j) {
    const auto m = space.multi_index(j);
    odg::Point g(dim);
    for (int k = 0; k < dim; ++k) g[k] = dirs[k].greville(m[k]);
    cps.row(j) = F(g).transpose();
  }
  return odg::Patch(std::move(space), std::move(cps));
}

/// Axis-aligned box [x0, x0+sx] x [y0, y0+sy].
inline odg::Patch box(int p, int elements, double x0, double y0, double sx, double sy) {
  return interpolated(2, p, elements, [=](const odg::Point& t) {
    odg::Point x(2);
    x << x0 + sx * t[0], y0 + sy * t[1];
    return x;
  });
}

inline odg::Patch identity(int p, int elements) { return box(p, elements, 0, 0, 1, 1); }

/// Every face of a single patch on the Dirichlet boundary.
inline odg::MultiPatch single(odg::Patch patch) {
  odg::MultiPatch mp;
  mp.dim = patch.dim();
  for (int d = 0; d < mp.dim; ++d) {
    mp.dirichlet.push_back({0, d, odg::Side::lo});
    mp.dirichlet.push_back({0, d, odg::Side::hi});
  }
  mp.patches.push_back(std::move(patch));
  mp.validate();
  return mp;
}

/// Two patches glued along x: patch 0's hi-x face is side a, patch 1's lo-x
/// face is side b.
inline odg::MultiPatch side_by_side(odg::Patch left, odg::Patch right) {
  odg::MultiPatch mp;
  mp.dim = 2;
  mp.patches = {std::move(left), std::move(right)};
  mp.interfaces.push_back({{0, 0, odg::Side::hi}, {1, 0, odg::Side::lo},
                           odg::Orientation::identity(1), odg::InterfaceKind::matching, 0.0});
  mp.dirichlet = {{0, 0, odg::Side::lo}, {0, 1, odg::Side::lo}, {0, 1, odg::Side::hi},
                  {1, 0, odg::Side::hi}, {1, 1, odg::Side::lo}, {1, 1, odg::Side::hi}};
  mp.validate();
  return mp;
}

/// Unit squares [0,1]^2 and [1,2]x[0,1].
inline odg::MultiPatch two_squares(int p, int elements) {
  return side_by_side(box(p, elements, 0, 0, 1, 1), box(p, elements, 1, 0, 1, 1));
}

/// Genuinely curved patch (control points of a quadratic map), for
/// derivative checks.
inline odg::Patch curved(int p = 2, int elements = 3) {
  return interpolated(2, p, elements, [](const odg::Point& t) {
    odg::Point x(2);
    x << t[0] + 0.15 * t[1] * t[1] + 0.1 * t[0] * t[1], t[1] + 0.2 * t[0] * (1 - t[0]);
    return x;
  });
}

}  // namespace fixture
