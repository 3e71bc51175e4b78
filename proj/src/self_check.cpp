#include "odg/self_check.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <random>

#include "odg/analysis.hpp"
#include "odg/assembly.hpp"
#include "odg/errors.hpp"
#include "odg/examples.hpp"
#include "odg/quadrature.hpp"
#include "odg/solver.hpp"

namespace odg {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckResult bound_check(std::string name, double value, double tol) {
  return {std::move(name), value <= tol, "max " + sci(value) + " (tol " + sci(tol) + ")"};
}

// Coarse geometry of an example with its overlap pairs displaced by `width`.
MultiPatch coarse(const ExampleCase& ex, int degree, double width) {
  MultiPatch mp = ex.geometry(degree, 0);
  if (width > 0.0) {
    for (int pair : ex.overlap_pairs) mp = make_overlap(mp, pair, width);
  }
  return mp;
}

double max_abs(const Eigen::SparseMatrix<double>& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      v = std::max(v, std::abs(it.value()));
    }
  }
  return v;
}

CheckResult partition_of_unity(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int p = 1; p <= 4; ++p) {
    TensorSpace space({KnotVector::uniform(p, 5), KnotVector::uniform(p, 3), KnotVector::uniform(p, 4)});
    for (int s = 0; s < 100; ++s) {
      Point x(3);
      x << u(rng), u(rng), u(rng);
      const auto b = tensor_eval(space, x, 1);
      double sum = 0.0;
      Point g = Point::Zero(3);
      for (std::size_t j = 0; j < b.values.size(); ++j) {
        sum += b.values[j];
        g += b.gradients[j];
      }
      worst = std::max({worst, std::abs(sum - 1.0), g.cwiseAbs().maxCoeff()});
    }
  }
  return bound_check("partition of unity", worst, 1e-12);
}

CheckResult derivative_fd(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const KnotVector kv(3, {0, 0, 0, 0, 0.2, 0.45, 0.45, 0.7, 1, 1, 1, 1});
  constexpr double step = 1e-6;
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const double x = u(rng);
    // Keep the stencil inside one knot span.
    if (kv.find_span(x - step) != kv.find_span(x + step)) continue;
    const auto d = eval_basis_derivs(kv, x, 1);
    const auto lo = eval_basis(kv, x - step), hi = eval_basis(kv, x + step);
    for (std::size_t j = 0; j < d.table[1].size(); ++j) {
      const double fd = (hi.values[j] - lo.values[j]) / (2.0 * step);
      worst = std::max(worst, std::abs(fd - d.table[1][j]));
    }
  }
  return bound_check("derivative vs finite differences", worst, 1e-6);
}

CheckResult quadrature_exactness() {
  double worst = 0.0;
  for (int n = 1; n <= 10; ++n) {
    const auto r = gauss_rule(n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * std::pow(r.nodes[i], k);
      worst = std::max(worst, std::abs(s - 1.0 / (k + 1)));
    }
  }
  return bound_check("quadrature exactness", worst, 1e-13);
}

CheckResult jacobian_positivity() {
  double worst = INFINITY;
  for (const auto& name : example_names()) {
    const auto ex = example_by_name(name);
    for (int level = 0; level < 2; ++level) {
      MultiPatch mp = ex.geometry(2, level);
      const double h = mp.mesh_size();
      for (int pair : ex.overlap_pairs) mp = make_overlap(mp, pair, h);
      for (const auto& P : mp.patches) worst = std::min(worst, P.min_jacobian_det(3));
    }
  }
  return {"Jacobian positivity", worst > 0.0, "min det J " + sci(worst)};
}

CheckResult matrix_symmetry() {
  double worst = 0.0;
  for (const auto& name : example_names()) {
    const auto ex = example_by_name(name);
    const MultiPatch mp = coarse(ex, 2, 0.05);
    const auto sys = assemble(mp, ex.problem(), AssemblyConfig::defaults(2));
    const Eigen::SparseMatrix<double> At = sys.matrix.transpose();
    worst = std::max(worst, max_abs(sys.matrix - At) / max_abs(sys.matrix));
  }
  return bound_check("matrix symmetry", worst, 1e-12);
}

CheckResult positive_definite() {
  double lmin = INFINITY;
  bool ok = true;
  for (const auto& name : example_names()) {
    const auto ex = example_by_name(name);
    const MultiPatch mp = coarse(ex, 2, 0.05);
    const auto sys = assemble(mp, ex.problem(), AssemblyConfig::defaults(2));
    ok = ok && is_positive_definite(sys.matrix);
    lmin = std::min(lmin, smallest_eigenvalue(sys.matrix, 50));
  }
  return {"SPD at eta = 4(p+1)^2", ok && lmin > 0.0, "smallest eigenvalue " + sci(lmin)};
}

CheckResult partner_involution(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (const auto& name : example_names()) {
    const auto ex = example_by_name(name);
    const MultiPatch mp = ex.geometry(2, 0);
    for (int pair = 0; pair < static_cast<int>(mp.interfaces.size()); ++pair) {
      for (int s = 0; s < 20; ++s) {
        Point t(mp.dim - 1);
        for (int k = 0; k < t.size(); ++k) t[k] = u(rng);
        const auto there = partner_point(mp, pair, PairSide::a, t);
        const auto back = partner_point(mp, pair, PairSide::b, there.t);
        worst = std::max(worst, (back.t - t).cwiseAbs().maxCoeff());
      }
    }
  }
  // A flipped and permuted orientation as well.
  Orientation o{{1, 0}, {true, false}};
  for (int s = 0; s < 20; ++s) {
    Point t(2);
    t << u(rng), u(rng);
    worst = std::max(worst, (orient_b_to_a(o, orient_a_to_b(o, t)) - t).cwiseAbs().maxCoeff());
  }
  return bound_check("partner involution", worst, 1e-14);
}

// The overlap form on coincident faces must reduce to the matching form.
CheckResult zero_width_limit() {
  double worst = 0.0;
  for (const auto& name : example_names()) {
    const auto ex = example_by_name(name);
    const MultiPatch mp = ex.geometry(2, 0);
    const auto spec = ex.problem();
    const auto cfg = AssemblyConfig::defaults(2);
    MultiPatch forced = make_overlap(mp, ex.overlap_pairs.front(), 0.0);
    for (int pair : ex.overlap_pairs) forced.interfaces[pair].kind = InterfaceKind::overlap;
    const auto a = assemble(mp, spec, cfg);
    const auto b = assemble(forced, spec, cfg);
    worst = std::max(worst, max_abs(a.matrix - b.matrix) / max_abs(a.matrix));
  }
  return bound_check("d_o = 0 matrix equality", worst, 1e-12);
}

CheckResult residuals(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (const auto& name : example_names()) {
    const auto ex = example_by_name(name);
    const MultiPatch mp = ex.geometry(2, 0);
    for (int s = 0; s < 100; ++s) {
      const int patch = s % static_cast<int>(mp.patches.size());
      Point xhat(mp.dim);
      for (int k = 0; k < mp.dim; ++k) xhat[k] = u(rng);
      const Point x = mp.patches[patch].map_point(xhat);
      const double scale = std::max(1.0, std::abs(ex.source(patch, x)));
      worst = std::max(worst, manufactured_residual(ex, patch, x) / scale);
    }
  }
  return bound_check("manufactured residual", worst, 1e-8);
}

CheckResult dg_accounting() {
  double worst = 0.0;
  for (const auto& name : example_names()) {
    const auto ex = example_by_name(name);
    auto mp = std::make_shared<const MultiPatch>(coarse(ex, 2, 0.05));
    const auto spec = ex.problem();
    const auto sys = assemble(*mp, spec, AssemblyConfig::defaults(2));
    const auto rep = dg_error(solve(mp, sys), spec);
    const double parts = rep.volume * rep.volume + rep.boundary * rep.boundary +
                         rep.interface * rep.interface;
    worst = std::max(worst, std::abs(rep.dg_error * rep.dg_error - parts) /
                                (rep.dg_error * rep.dg_error));
  }
  return bound_check("DG component accounting", worst, 1e-12);
}

}  // namespace

std::vector<CheckResult> run_self_checks() {
  std::mt19937 rng(20240611u);
  std::vector<CheckResult> out;
  const auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  guarded("partition of unity", [&] { return partition_of_unity(rng); });
  guarded("derivative vs finite differences", [&] { return derivative_fd(rng); });
  guarded("quadrature exactness", [] { return quadrature_exactness(); });
  guarded("Jacobian positivity", [] { return jacobian_positivity(); });
  guarded("matrix symmetry", [] { return matrix_symmetry(); });
  guarded("SPD at eta = 4(p+1)^2", [] { return positive_definite(); });
  guarded("partner involution", [&] { return partner_involution(rng); });
  guarded("d_o = 0 matrix equality", [] { return zero_width_limit(); });
  guarded("manufactured residual", [&] { return residuals(rng); });
  guarded("DG component accounting", [] { return dg_accounting(); });
  return out;
}

}  // namespace odg
