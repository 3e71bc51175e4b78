#include "odg/analysis.hpp"

#include <cmath>

#include "odg/errors.hpp"
#include "odg/quadrature.hpp"

namespace odg {

namespace {

// Squared L2 norm of u - u_h over one face of a patch, on the face's own mesh.
double face_error_sq(const DiscreteSolution& sol, const ProblemSpec& spec, const FaceId& face,
                     const QuadRule& rule) {
  const Patch& P = sol.multipatch().patches[face.patch];
  const auto& c = sol.coefficients(face.patch);
  const auto tdirs = tangential_dirs(P.dim(), face.dir);
  std::vector<int> counts;
  for (int k : tdirs) counts.push_back(P.space().direction(k).num_elements());
  int total = 1;
  for (int n : counts) total *= n;
  double sum = 0.0;
  std::vector<int> elem(counts.size());
  for (int e = 0; e < total; ++e) {
    int rem = e;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      elem[k] = rem % counts[k];
      rem /= counts[k];
    }
    for (const auto& q : face_quadrature(P.space(), face.dir, elem, rule)) {
      const auto ev = evaluate_face_point(P, face.dir, face.side, q.xhat);
      double uh = 0.0;
      for (std::size_t j = 0; j < ev.point.basis.indices.size(); ++j) {
        uh += c[ev.point.basis.indices[j]] * ev.point.basis.values[j];
      }
      const double e_val = spec.exact(face.patch, ev.point.x) - uh;
      sum += q.weight * ev.measure * e_val * e_val;
    }
  }
  return sum;
}

}  // namespace

ErrorReport dg_error(const DiscreteSolution& sol, const ProblemSpec& spec, int quad_points) {
  if (!spec.has_exact()) throw ConfigError("error evaluation needs the exact solution and gradient");
  const MultiPatch& mp = sol.multipatch();
  ErrorReport rep;
  rep.dofs = sol.num_dofs();
  rep.h = mp.mesh_size();

  double vol = 0.0, bnd = 0.0, itf = 0.0, l2 = 0.0;
  for (int p = 0; p < static_cast<int>(mp.patches.size()); ++p) {
    const Patch& P = mp.patches[p];
    const double rho = spec.diffusion.at(static_cast<std::size_t>(p));
    const int n = quad_points > 0 ? quad_points : P.space().direction(0).degree() + 2;
    const auto rule = gauss_rule(n);
    const auto counts = P.space().element_counts();
    int total = 1;
    for (int c : counts) total *= c;
    std::vector<int> elem(counts.size());
    for (int e = 0; e < total; ++e) {
      int rem = e;
      for (std::size_t k = 0; k < counts.size(); ++k) {
        elem[k] = rem % counts[k];
        rem /= counts[k];
      }
      for (const auto& q : element_quadrature(P.space(), elem, rule)) {
        const auto ev = evaluate_point(P, q.xhat);
        const auto& c = sol.coefficients(p);
        double uh = 0.0;
        Point guh = Point::Zero(P.dim());
        for (std::size_t j = 0; j < ev.basis.indices.size(); ++j) {
          uh += c[ev.basis.indices[j]] * ev.basis.values[j];
          guh += c[ev.basis.indices[j]] * ev.gradients[j];
        }
        const double w = q.weight * std::abs(ev.jacobian.det);
        const double e_val = spec.exact(p, ev.x) - uh;
        const Point e_grad = spec.exact_gradient(p, ev.x) - guh;
        vol += w * rho * e_grad.squaredNorm();
        l2 += w * e_val * e_val;
      }
    }
  }

  for (const auto& f : mp.dirichlet) {
    const Patch& P = mp.patches[f.patch];
    const int n = quad_points > 0 ? quad_points : P.space().direction(0).degree() + 2;
    const double rho = spec.diffusion[f.patch];
    bnd += rho / P.mesh_size() * face_error_sq(sol, spec, f, gauss_rule(n));
  }

  for (int i = 0; i < static_cast<int>(mp.interfaces.size()); ++i) {
    const auto& ip = mp.interfaces[i];
    const double rho_avg = 0.5 * (spec.diffusion[ip.a.patch] + spec.diffusion[ip.b.patch]);
    const double h = interface_mesh_size(mp, i);
    for (const FaceId& f : {ip.a, ip.b}) {
      const Patch& P = mp.patches[f.patch];
      const int n = quad_points > 0 ? quad_points : P.space().direction(0).degree() + 2;
      itf += rho_avg / h * face_error_sq(sol, spec, f, gauss_rule(n));
    }
  }

  rep.volume = std::sqrt(vol);
  rep.boundary = std::sqrt(bnd);
  rep.interface = std::sqrt(itf);
  rep.dg_error = std::sqrt(vol + bnd + itf);
  rep.l2_error = std::sqrt(l2);
  for (const auto& ip : mp.interfaces) rep.overlap_width = std::max(rep.overlap_width, ip.width);
  return rep;
}

std::vector<std::optional<double>> convergence_rates(const std::vector<double>& errors,
                                                     const std::vector<double>& h) {
  if (errors.size() != h.size()) throw ConfigError("errors and mesh sizes differ in length");
  if (errors.size() < 2) throw ConfigError("rates need at least two levels");
  std::vector<std::optional<double>> r;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] <= 0.0 || errors[i + 1] <= 0.0) {
      r.push_back(std::nullopt);
    } else {
      r.push_back(std::log(errors[i] / errors[i + 1]) / std::log(h[i] / h[i + 1]));
    }
  }
  return r;
}

std::vector<std::optional<double>> ConvergenceTable::rates() const {
  std::vector<std::optional<double>> out{std::nullopt};
  if (levels.size() < 2) return out;
  std::vector<double> e, h;
  for (const auto& l : levels) {
    e.push_back(l.dg_error);
    h.push_back(l.h);
  }
  for (const auto& r : convergence_rates(e, h)) out.push_back(r);
  return out;
}

std::optional<double> ConvergenceTable::final_rate() const {
  const auto r = rates();
  if (r.size() < 2) return std::nullopt;
  if (r.size() == 2) return r[1];
  const auto& a = r[r.size() - 2];
  const auto& b = r[r.size() - 1];
  if (!a || !b) return std::nullopt;
  return 0.5 * (*a + *b);
}

}  // namespace odg
