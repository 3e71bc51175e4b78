#include "odg/examples.hpp"

#include <cmath>
#include <numbers>

#include "odg/errors.hpp"

namespace odg {

namespace {

using std::numbers::pi;
using C = std::complex<double>;

// Patch interpolating the map F at the Greville abscissae of a uniform space.
Patch greville_patch(int dim, int degree, int elements,
                     const std::function<Point(const Point&)>& F) {
  std::vector<KnotVector> dirs(dim, KnotVector::uniform(degree, elements));
  TensorSpace space(dirs);
  Eigen::MatrixXd cps(space.num_basis(), dim);
  for (int j = 0; j < space.num_basis(); ++j) {
    const auto m = space.multi_index(j);
    Point xi(dim);
    for (int k = 0; k < dim; ++k) xi[k] = space.direction(k).greville(m[k]);
    cps.row(j) = F(xi).transpose();
  }
  return Patch(std::move(space), std::move(cps));
}

InterfacePair pair(FaceId a, FaceId b, int tangential) {
  return {a, b, Orientation::identity(tangential), InterfaceKind::matching, 0.0};
}

// 2x2 layout: 0 bottom-left, 1 bottom-right, 2 top-left, 3 top-right.
// Interfaces 0 and 1 are the vertical chain (left patch is side a), 2 and 3
// the horizontal one.
MultiPatch two_by_two(std::vector<Patch> patches) {
  MultiPatch mp;
  mp.dim = 2;
  mp.patches = std::move(patches);
  mp.interfaces = {
      pair({0, 0, Side::hi}, {1, 0, Side::lo}, 1),
      pair({2, 0, Side::hi}, {3, 0, Side::lo}, 1),
      pair({0, 1, Side::hi}, {2, 1, Side::lo}, 1),
      pair({1, 1, Side::hi}, {3, 1, Side::lo}, 1),
  };
  mp.dirichlet = {
      {0, 0, Side::lo}, {0, 1, Side::lo}, {1, 0, Side::hi}, {1, 1, Side::lo},
      {2, 0, Side::lo}, {2, 1, Side::hi}, {3, 0, Side::hi}, {3, 1, Side::hi},
  };
  mp.validate();
  return mp;
}

// Axis-aligned 2x2 split of [x0,x2]x[y0,y2] at (x1,y1).
MultiPatch rectangle_2x2(int degree, double x0, double x1, double x2, double y0, double y1,
                         double y2) {
  std::vector<Patch> patches;
  const double xs[3] = {x0, x1, x2};
  const double ys[3] = {y0, y1, y2};
  for (int j = 0; j < 2; ++j) {
    for (int i = 0; i < 2; ++i) {
      const double ax = xs[i], bx = xs[i + 1], ay = ys[j], by = ys[j + 1];
      patches.push_back(greville_patch(2, degree, 4, [=](const Point& xi) {
        Point x(2);
        x << ax + (bx - ax) * xi[0], ay + (by - ay) * xi[1];
        return x;
      }));
    }
  }
  return two_by_two(std::move(patches));
}

Point real_point(const ComplexPoint& z, int dim) {
  Point p(dim);
  for (int k = 0; k < dim; ++k) p[k] = z[k].real();
  return p;
}

ComplexPoint complex_point(const Point& x) {
  ComplexPoint z{};
  for (int k = 0; k < x.size(); ++k) z[k] = x[k];
  return z;
}

// Wraps a templated gradient into the real and complex field types.
template <class Grad>
void set_gradient(ExampleCase& ex, Grad g) {
  const int dim = ex.dim;
  ex.complex_gradient = [g](int patch, const ComplexPoint& x) { return g(patch, x); };
  ex.exact_gradient = [g, dim](int patch, const Point& x) {
    return real_point(g(patch, complex_point(x)), dim);
  };
}

}  // namespace

MultiPatch refine_patch(const MultiPatch& mp, int patch) {
  MultiPatch single;
  single.dim = mp.dim;
  single.patches = {mp.patches.at(static_cast<std::size_t>(patch))};
  MultiPatch out = mp;
  out.patches[patch] = refine_uniform(single).patches[0];
  return out;
}

MultiPatch ExampleCase::geometry(int degree, int level, bool non_matching) const {
  if (level < 0) throw ConfigError("refinement level must be nonnegative");
  MultiPatch mp = base_geometry(degree);
  for (int l = 0; l < level; ++l) mp = refine_uniform(mp);
  if (non_matching) {
    if (non_matching_patch < 0) {
      throw ConfigError("example '" + name + "' has no non-matching variant");
    }
    mp = refine_patch(mp, non_matching_patch);
  }
  return mp;
}

ProblemSpec ExampleCase::problem() const {
  ProblemSpec spec;
  spec.diffusion = diffusion;
  spec.source = source;
  spec.dirichlet = exact;
  spec.exact = exact;
  spec.exact_gradient = exact_gradient;
  return spec;
}

ExampleCase example_smooth_homogeneous() {
  ExampleCase ex;
  ex.name = "smooth";
  ex.dim = 2;
  ex.diffusion = {1.0, 1.0, 1.0, 1.0};
  ex.overlap_pairs = {0, 1};
  ex.non_matching_patch = 1;
  ex.base_geometry = [](int p) { return rectangle_2x2(p, 0.0, 0.5, 1.0, 0.0, 0.5, 1.0); };
  ex.exact = [](int, const Point& x) {
    return std::sin(pi * (x[0] + 0.4) / 6.0) * std::sin(pi * (x[1] + 0.3) / 3.0) + x[0] + x[1];
  };
  set_gradient(ex, [](int, const ComplexPoint& x) {
    const C a = pi * (x[0] + 0.4) / 6.0, b = pi * (x[1] + 0.3) / 3.0;
    return ComplexPoint{pi / 6.0 * std::cos(a) * std::sin(b) + 1.0,
                        pi / 3.0 * std::sin(a) * std::cos(b) + 1.0, 0.0};
  });
  ex.source = [](int, const Point& x) {
    const double k = pi * pi / 36.0 + pi * pi / 9.0;
    return k * std::sin(pi * (x[0] + 0.4) / 6.0) * std::sin(pi * (x[1] + 0.3) / 3.0);
  };
  return ex;
}

ExampleCase example_discontinuous_rho() {
  constexpr double k = 1.5 * pi;  // x-frequency of the right branch
  ExampleCase ex;
  ex.name = "jump-rho";
  ex.dim = 2;
  ex.diffusion = {1.5 * pi, 2.0, 1.5 * pi, 2.0};
  ex.overlap_pairs = {0, 1};
  ex.non_matching_patch = 1;
  ex.base_geometry = [](int p) { return rectangle_2x2(p, -1.0, 0.0, 1.0, 0.0, 0.5, 1.0); };
  // Patches 0 and 2 lie in x < 0.
  const auto left = [](int patch) { return patch % 2 == 0; };
  ex.exact = [=](int patch, const Point& x) {
    return left(patch) ? std::sin(pi * (2.0 * x[0] + x[1])) : std::sin(pi * (k * x[0] + x[1]));
  };
  set_gradient(ex, [=](int patch, const ComplexPoint& x) {
    if (left(patch)) {
      const C c = pi * std::cos(pi * (2.0 * x[0] + x[1]));
      return ComplexPoint{2.0 * c, c, 0.0};
    }
    const C c = pi * std::cos(pi * (k * x[0] + x[1]));
    return ComplexPoint{k * c, c, 0.0};
  });
  ex.source = [=](int patch, const Point& x) {
    if (left(patch)) return 1.5 * pi * 5.0 * pi * pi * std::sin(pi * (2.0 * x[0] + x[1]));
    return 2.0 * pi * pi * (k * k + 1.0) * std::sin(pi * (k * x[0] + x[1]));
  };
  return ex;
}

ExampleCase example_multiface_overlap() {
  constexpr double amp = 0.05;
  ExampleCase ex;
  ex.name = "multiface";
  ex.dim = 2;
  ex.diffusion = {1.0, 1.0, 1.0, 1.0};
  ex.overlap_pairs = {0, 1};
  // The central cross: the vertical arm x = 0.5 + amp cos(4 pi y) is curved,
  // the horizontal arm y = 0.5 is straight.
  ex.base_geometry = [](int p) {
    const auto c = [](double y) { return amp * std::cos(4.0 * pi * y); };
    std::vector<Patch> patches;
    for (int j = 0; j < 2; ++j) {
      const double y0 = 0.5 * j;
      patches.push_back(greville_patch(2, p, 4, [=](const Point& xi) {
        const double y = y0 + 0.5 * xi[1];
        Point x(2);
        x << xi[0] * (0.5 + c(y)), y;
        return x;
      }));
      patches.push_back(greville_patch(2, p, 4, [=](const Point& xi) {
        const double y = y0 + 0.5 * xi[1];
        Point x(2);
        x << 0.5 + c(y) + xi[0] * (0.5 - c(y)), y;
        return x;
      }));
    }
    return two_by_two(std::move(patches));
  };
  ex.exact = [](int, const Point& x) {
    return std::sin(pi * (x[0] + 0.4)) * std::sin(2.0 * pi * (x[1] + 0.3)) + x[0] + x[1];
  };
  set_gradient(ex, [](int, const ComplexPoint& x) {
    const C a = pi * (x[0] + 0.4), b = 2.0 * pi * (x[1] + 0.3);
    return ComplexPoint{pi * std::cos(a) * std::sin(b) + 1.0,
                        2.0 * pi * std::sin(a) * std::cos(b) + 1.0, 0.0};
  });
  ex.source = [](int, const Point& x) {
    return 5.0 * pi * pi * std::sin(pi * (x[0] + 0.4)) * std::sin(2.0 * pi * (x[1] + 0.3));
  };
  return ex;
}

ExampleCase example_3d() {
  constexpr double w = 0.5;  // patch thickness across the interface plane
  ExampleCase ex;
  ex.name = "box3d";
  ex.dim = 3;
  ex.diffusion = {1.0, 0.5 * pi};
  ex.overlap_pairs = {0};
  ex.base_geometry = [](int p) {
    MultiPatch mp;
    mp.dim = 3;
    // Both patches run along s from (-1,1) to (0,0); xi_1 crosses the plane.
    mp.patches.push_back(greville_patch(3, p, 4, [](const Point& xi) {
      const double t = 1.0 - xi[1];
      Point x(3);
      x << -1.0 + xi[0] - w * t, 1.0 - xi[0] - w * t, xi[2];
      return x;
    }));
    mp.patches.push_back(greville_patch(3, p, 4, [](const Point& xi) {
      Point x(3);
      x << -1.0 + xi[0] + w * xi[1], 1.0 - xi[0] + w * xi[1], xi[2];
      return x;
    }));
    mp.interfaces = {pair({0, 1, Side::hi}, {1, 1, Side::lo}, 2)};
    for (int q = 0; q < 2; ++q) {
      for (int dir = 0; dir < 3; ++dir) {
        for (Side s : {Side::lo, Side::hi}) {
          if (dir == 1 && s == (q == 0 ? Side::hi : Side::lo)) continue;
          mp.dirichlet.push_back({q, dir, s});
        }
      }
    }
    mp.validate();
    return mp;
  };
  ex.exact = [](int patch, const Point& x) {
    const double s = x[0] + x[1];
    return patch == 0 ? std::sin(0.5 * pi * s) : std::exp(std::sin(s)) - 1.0;
  };
  set_gradient(ex, [](int patch, const ComplexPoint& x) {
    const C s = x[0] + x[1];
    const C g = patch == 0 ? 0.5 * pi * std::cos(0.5 * pi * s) : std::cos(s) * std::exp(std::sin(s));
    return ComplexPoint{g, g, 0.0};
  });
  ex.source = [](int patch, const Point& x) {
    const double s = x[0] + x[1];
    if (patch == 0) return 0.5 * pi * pi * std::sin(0.5 * pi * s);
    const double c = std::cos(s);
    return -pi * std::exp(std::sin(s)) * (c * c - std::sin(s));
  };
  return ex;
}

std::vector<std::string> example_names() { return {"smooth", "jump-rho", "multiface", "box3d"}; }

ExampleCase example_by_name(std::string_view name) {
  if (name == "smooth") return example_smooth_homogeneous();
  if (name == "jump-rho") return example_discontinuous_rho();
  if (name == "multiface") return example_multiface_overlap();
  if (name == "box3d") return example_3d();
  throw ConfigError("unknown example '" + std::string(name) +
                    "' (expected smooth, jump-rho, multiface or box3d)");
}

double manufactured_residual(const ExampleCase& ex, int patch, const Point& x) {
  constexpr double step = 1e-30;
  const double rho = ex.diffusion.at(static_cast<std::size_t>(patch));
  double div = 0.0;
  for (int k = 0; k < ex.dim; ++k) {
    ComplexPoint z = complex_point(x);
    z[k] += C(0.0, step);
    div += ex.complex_gradient(patch, z)[k].imag() / step;
  }
  return std::abs(ex.source(patch, x) + rho * div);
}

}  // namespace odg
