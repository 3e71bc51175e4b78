#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "odg/assembly.hpp"
#include "odg/geometry.hpp"

namespace odg {

using ComplexPoint = std::array<std::complex<double>, 3>;

/// Exact gradient evaluated at a complex point, for complex-step derivatives.
using ComplexGradient = std::function<ComplexPoint(int patch, const ComplexPoint& x)>;

/// Built-in manufactured-solution problem. Each patch carries its own branch
/// of the exact solution, so the fields extend smoothly into overlaps.
struct ExampleCase {
  std::string name;
  int dim = 2;
  std::vector<double> diffusion;
  std::vector<int> overlap_pairs;  // interfaces turned into overlaps by the harness
  int non_matching_patch = -1;     // patch refined once more under --non-matching

  /// Coarsest geometry (4 elements per direction per patch), all pairs matching.
  std::function<MultiPatch(int degree)> base_geometry;

  ScalarField exact;
  VectorField exact_gradient;
  ScalarField source;
  ComplexGradient complex_gradient;

  /// Base geometry refined `level` times by knot insertion.
  MultiPatch geometry(int degree, int level, bool non_matching = false) const;

  /// Diffusion, source, exact solution, and Dirichlet data u_D = u.
  ProblemSpec problem() const;
};

ExampleCase example_smooth_homogeneous();
ExampleCase example_discontinuous_rho();
ExampleCase example_multiface_overlap();
ExampleCase example_3d();

/// "smooth", "jump-rho", "multiface" or "box3d"; ConfigError otherwise.
ExampleCase example_by_name(std::string_view name);
std::vector<std::string> example_names();

/// |f + div(rho grad u)| at x, with the divergence taken by complex-step
/// differentiation of the exact gradient.
double manufactured_residual(const ExampleCase& ex, int patch, const Point& x);

/// Refines only patch `patch` once. Interfaces keep their orientation; the
/// faces of that patch become non-matching with their neighbours.
MultiPatch refine_patch(const MultiPatch& mp, int patch);

}  // namespace odg
