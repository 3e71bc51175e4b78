#include "odg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "odg/errors.hpp"
#include "odg/quadrature.hpp"

namespace odg {

namespace {

// Per-direction loop over all elements of a tensor space.
template <class F>
void for_each_element(const TensorSpace& space, F&& f) {
  const auto counts = space.element_counts();
  int total = 1;
  for (int c : counts) total *= c;
  std::vector<int> elem(counts.size());
  for (int e = 0; e < total; ++e) {
    int rem = e;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      elem[k] = rem % counts[k];
      rem /= counts[k];
    }
    f(e, std::span<const int>(elem));
  }
}

// Merges two sorted break lists, dropping near-duplicates.
std::vector<double> merge_breaks(std::vector<double> a, const std::vector<double>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  std::vector<double> out;
  for (double v : a) {
    if (out.empty() || v > out.back() + 1e-12) out.push_back(v);
  }
  out.back() = 1.0;
  return out;
}

// Local view of the unknowns touching one quadrature point on one side of a
// face: global dof, value and the chosen normal flux rho * grad(phi) . n.
struct SideDofs {
  std::vector<int> dofs;
  std::vector<double> values;
  std::vector<double> flux;
};

SideDofs side_dofs(const PointEval& ev, int offset, double rho, const Point& normal) {
  SideDofs s;
  const auto n = ev.basis.indices.size();
  s.dofs.resize(n);
  s.values.resize(n);
  s.flux.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    s.dofs[j] = offset + ev.basis.indices[j];
    s.values[j] = ev.basis.values[j];
    s.flux[j] = rho * ev.gradients[j].dot(normal);
  }
  return s;
}

}  // namespace

void ProblemSpec::validate(const MultiPatch& mp) const {
  if (diffusion.size() != mp.patches.size()) {
    throw ConfigError("diffusion needs one coefficient per patch (" +
                      std::to_string(mp.patches.size()) + "), got " +
                      std::to_string(diffusion.size()));
  }
  for (std::size_t i = 0; i < diffusion.size(); ++i) {
    if (!(diffusion[i] > 0.0)) {
      throw ConfigError("diffusion coefficient of patch " + std::to_string(i) +
                        " must be positive");
    }
  }
  if (!source) throw ConfigError("problem has no source term");
  if (!dirichlet && !mp.dirichlet.empty()) throw ConfigError("problem has no Dirichlet data");
}

AssemblyConfig AssemblyConfig::defaults(int degree) {
  AssemblyConfig cfg;
  cfg.penalty = 4.0 * (degree + 1) * (degree + 1);
  cfg.quad_points = degree + 1;
  return cfg;
}

SystemBuilder::SystemBuilder(const MultiPatch& mp) : offsets_(mp.dof_offsets()) {
  rhs_ = Eigen::VectorXd::Zero(offsets_.back());
}

LinearSystem SystemBuilder::finalize() && {
  LinearSystem sys;
  const int n = offsets_.back();
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets_.begin(), triplets_.end());
  sys.matrix.makeCompressed();
  sys.rhs = std::move(rhs_);
  sys.offsets = offsets_;
  triplets_.clear();
  return sys;
}

void assemble_volume(SystemBuilder& sys, const MultiPatch& mp, int patch, const ProblemSpec& spec,
                     const AssemblyConfig& cfg) {
  const Patch& P = mp.patches.at(static_cast<std::size_t>(patch));
  const double rho = spec.diffusion.at(static_cast<std::size_t>(patch));
  const int offset = sys.offsets()[patch];
  const auto rule = gauss_rule(cfg.quad_points);

  Eigen::MatrixXd K;
  Eigen::VectorXd F;
  for_each_element(P.space(), [&](int e, std::span<const int> elem) {
    const auto pts = element_quadrature(P.space(), elem, rule);
    std::vector<int> dofs;
    bool first = true;
    for (const auto& q : pts) {
      PointEval ev;
      try {
        ev = evaluate_point(P, q.xhat);
      } catch (const GeometryError& err) {
        throw GeometryError(std::string(err.what()) + " in patch " + std::to_string(patch) +
                            ", element " + std::to_string(e));
      }
      const auto n = ev.basis.indices.size();
      if (first) {
        dofs.assign(ev.basis.indices.begin(), ev.basis.indices.end());
        K = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        F = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        first = false;
      }
      const double w = q.weight * std::abs(ev.jacobian.det);
      const double f = spec.source(patch, ev.x);
      for (std::size_t a = 0; a < n; ++a) {
        F[static_cast<Eigen::Index>(a)] += w * f * ev.basis.values[a];
        for (std::size_t b = a; b < n; ++b) {
          K(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
              w * rho * ev.gradients[a].dot(ev.gradients[b]);
        }
      }
    }
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      const auto ia = static_cast<Eigen::Index>(a);
      sys.add_rhs(offset + dofs[a], F[ia]);
      sys.add(offset + dofs[a], offset + dofs[a], K(ia, ia));
      for (std::size_t b = a + 1; b < dofs.size(); ++b) {
        const double v = K(ia, static_cast<Eigen::Index>(b));
        sys.add(offset + dofs[a], offset + dofs[b], v);
        sys.add(offset + dofs[b], offset + dofs[a], v);
      }
    }
  });
}

void assemble_dirichlet_nitsche(SystemBuilder& sys, const MultiPatch& mp, const FaceId& face,
                                const ProblemSpec& spec, const AssemblyConfig& cfg) {
  const Patch& P = mp.patches.at(static_cast<std::size_t>(face.patch));
  const double rho = spec.diffusion.at(static_cast<std::size_t>(face.patch));
  const int offset = sys.offsets()[face.patch];
  const double h = P.mesh_size();
  const double sigma = cfg.penalty * rho / h;
  const bool symmetric = cfg.variant == FluxVariant::symmetric;
  const auto rule = gauss_rule(cfg.quad_points);

  const auto tdirs = tangential_dirs(P.dim(), face.dir);
  std::vector<std::vector<double>> breaks;
  for (int k : tdirs) breaks.push_back(P.space().direction(k).breaks());
  std::vector<int> counts;
  for (const auto& b : breaks) counts.push_back(static_cast<int>(b.size()) - 1);
  int total = 1;
  for (int c : counts) total *= c;

  for (int e = 0; e < total; ++e) {
    int rem = e;
    std::vector<double> lo, hi;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const int i = rem % counts[k];
      rem /= counts[k];
      lo.push_back(breaks[k][i]);
      hi.push_back(breaks[k][i + 1]);
    }
    for (const auto& q : box_quadrature(lo, hi, rule)) {
      const auto ev = evaluate_face_point(P, face.dir, face.side, q.xhat);
      const double w = q.weight * ev.measure;
      const auto s = side_dofs(ev.point, offset, rho, ev.normal);
      const double g = spec.dirichlet ? spec.dirichlet(face.patch, ev.point.x) : 0.0;
      const auto n = s.dofs.size();
      for (std::size_t a = 0; a < n; ++a) {
        double r = sigma * g * s.values[a];
        if (symmetric) r -= s.flux[a] * g;
        sys.add_rhs(s.dofs[a], w * r);
        for (std::size_t b = 0; b < n; ++b) {
          // row a: test function, column b: trial function
          double v = -s.flux[b] * s.values[a] + sigma * s.values[a] * s.values[b];
          if (symmetric) v -= s.flux[a] * s.values[b];
          sys.add(s.dofs[a], s.dofs[b], w * v);
        }
      }
    }
  }
}

double interface_mesh_size(const MultiPatch& mp, int pair) {
  const auto& ip = mp.interfaces.at(static_cast<std::size_t>(pair));
  return std::max(mp.patches[ip.a.patch].mesh_size(), mp.patches[ip.b.patch].mesh_size());
}

std::vector<QuadPoint> interface_quadrature(const MultiPatch& mp, int pair, int points) {
  const auto& ip = mp.interfaces.at(static_cast<std::size_t>(pair));
  const int d = mp.dim;
  const auto ta = tangential_dirs(d, ip.a.dir);
  const auto tb = tangential_dirs(d, ip.b.dir);
  const Patch& pa = mp.patches[ip.a.patch];
  const Patch& pb = mp.patches[ip.b.patch];

  // Knot lines of both faces expressed in face-a coordinates.
  std::vector<std::vector<double>> breaks;
  for (int k = 0; k < d - 1; ++k) {
    auto ba = pa.space().direction(ta[k]).breaks();
    auto bb = pb.space().direction(tb[ip.orientation.perm[k]]).breaks();
    if (ip.orientation.flip[k]) {
      for (double& v : bb) v = 1.0 - v;
      std::reverse(bb.begin(), bb.end());
    }
    breaks.push_back(merge_breaks(std::move(ba), bb));
  }
  const auto rule = gauss_rule(points);
  std::vector<QuadPoint> out;
  std::vector<int> counts;
  int total = 1;
  for (const auto& b : breaks) {
    counts.push_back(static_cast<int>(b.size()) - 1);
    total *= counts.back();
  }
  for (int e = 0; e < total; ++e) {
    int rem = e;
    std::vector<double> lo, hi;
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const int i = rem % counts[k];
      rem /= counts[k];
      lo.push_back(breaks[k][i]);
      hi.push_back(breaks[k][i + 1]);
    }
    auto cell = box_quadrature(lo, hi, rule);
    out.insert(out.end(), cell.begin(), cell.end());
  }
  return out;
}

void assemble_interface_flux(SystemBuilder& sys, const MultiPatch& mp, int pair,
                             const ProblemSpec& spec, const AssemblyConfig& cfg) {
  const auto& ip = mp.interfaces.at(static_cast<std::size_t>(pair));
  const bool symmetric = cfg.variant == FluxVariant::symmetric;
  const double rho_a = spec.diffusion.at(static_cast<std::size_t>(ip.a.patch));
  const double rho_b = spec.diffusion.at(static_cast<std::size_t>(ip.b.patch));
  const double sigma = cfg.penalty * 0.5 * (rho_a + rho_b) / interface_mesh_size(mp, pair);
  const auto quad = interface_quadrature(mp, pair, cfg.quad_points);

  const auto emit = [&](const std::vector<int>& dofs, const Eigen::MatrixXd& local) {
    for (std::size_t r = 0; r < dofs.size(); ++r) {
      for (std::size_t c = 0; c < dofs.size(); ++c) {
        const double v = local(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        if (v != 0.0) sys.add(dofs[r], dofs[c], v);
      }
    }
  };

  if (ip.kind == InterfaceKind::matching) {
    const Patch& pa = mp.patches[ip.a.patch];
    const Patch& pb = mp.patches[ip.b.patch];
    for (const auto& q : quad) {
      const auto ea = evaluate_face_point(pa, ip.a.dir, ip.a.side, q.xhat);
      const auto partner = partner_point(mp, pair, PairSide::a, q.xhat);
      const auto eb = evaluate_point(pb, partner.xhat);
      const double w = q.weight * ea.measure;
      const Point& n = ea.normal;

      const auto sa = side_dofs(ea.point, sys.offsets()[ip.a.patch], rho_a, n);
      const auto sb = side_dofs(eb, sys.offsets()[ip.b.patch], rho_b, n);
      const auto na = sa.dofs.size(), nb = sb.dofs.size();
      // Combined local arrays: jump [phi] = phi_a - phi_b, mean flux
      // {rho grad phi}.n.
      std::vector<int> dofs(sa.dofs);
      dofs.insert(dofs.end(), sb.dofs.begin(), sb.dofs.end());
      std::vector<double> jump, mean;
      for (std::size_t j = 0; j < na; ++j) {
        jump.push_back(sa.values[j]);
        mean.push_back(0.5 * sa.flux[j]);
      }
      for (std::size_t j = 0; j < nb; ++j) {
        jump.push_back(-sb.values[j]);
        mean.push_back(0.5 * sb.flux[j]);
      }
      const auto m = static_cast<Eigen::Index>(dofs.size());
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(m, m);
      for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
          double v = sigma * jump[r] * jump[c];
          if (symmetric) {
            v -= mean[c] * jump[r] + mean[r] * jump[c];
          } else {
            v -= mean[c] * jump[r];
          }
          local(r, c) = w * v;
        }
      }
      emit(dofs, local);
    }
    return;
  }

  // Overlap: one integral per face; partner quantities at the paired point.
  for (PairSide owner : {PairSide::a, PairSide::b}) {
    const FaceId& fs = owner == PairSide::a ? ip.a : ip.b;
    const FaceId& fr = owner == PairSide::a ? ip.b : ip.a;
    const Patch& ps = mp.patches[fs.patch];
    const Patch& pr = mp.patches[fr.patch];
    const double rho_s = owner == PairSide::a ? rho_a : rho_b;
    const double rho_r = owner == PairSide::a ? rho_b : rho_a;
    for (const auto& q : quad) {
      const Point t = owner == PairSide::a ? Point(q.xhat) : orient_a_to_b(ip.orientation, q.xhat);
      const auto es = evaluate_face_point(ps, fs.dir, fs.side, t);
      const auto partner = partner_point(mp, pair, owner, t);
      const auto er = evaluate_point(pr, partner.xhat);
      const double w = q.weight * es.measure;
      const Point& n = es.normal;

      const auto ss = side_dofs(es.point, sys.offsets()[fs.patch], rho_s, n);
      const auto sr = side_dofs(er, sys.offsets()[fr.patch], rho_r, n);
      const auto ns = ss.dofs.size(), nr = sr.dofs.size();
      std::vector<int> dofs(ss.dofs);
      dofs.insert(dofs.end(), sr.dofs.begin(), sr.dofs.end());
      std::vector<double> test, jump, mean;  // test: phi_s (0 on partner dofs)
      for (std::size_t j = 0; j < ns; ++j) {
        test.push_back(ss.values[j]);
        jump.push_back(ss.values[j]);
        mean.push_back(0.5 * ss.flux[j]);
      }
      for (std::size_t j = 0; j < nr; ++j) {
        test.push_back(0.0);
        jump.push_back(-sr.values[j]);
        mean.push_back(0.5 * sr.flux[j]);
      }
      const auto m = static_cast<Eigen::Index>(dofs.size());
      Eigen::MatrixXd local = Eigen::MatrixXd::Zero(m, m);
      for (Eigen::Index r = 0; r < m; ++r) {
        for (Eigen::Index c = 0; c < m; ++c) {
          double v;
          if (symmetric) {
            v = -mean[c] * test[r] - mean[r] * test[c] + 0.5 * sigma * jump[r] * jump[c];
          } else {
            v = -mean[c] * test[r] + sigma * jump[c] * test[r];
          }
          local(r, c) = w * v;
        }
      }
      emit(dofs, local);
    }
  }
}

LinearSystem assemble(const MultiPatch& mp, const ProblemSpec& spec, const AssemblyConfig& cfg) {
  mp.validate();
  spec.validate(mp);
  if (!(cfg.penalty > 0.0)) throw ConfigError("penalty must be positive");
  SystemBuilder sys(mp);
  for (int p = 0; p < static_cast<int>(mp.patches.size()); ++p) {
    assemble_volume(sys, mp, p, spec, cfg);
  }
  for (const auto& f : mp.dirichlet) assemble_dirichlet_nitsche(sys, mp, f, spec, cfg);
  for (int i = 0; i < static_cast<int>(mp.interfaces.size()); ++i) {
    assemble_interface_flux(sys, mp, i, spec, cfg);
  }
  return std::move(sys).finalize();
}

void write_coordinate_matrix(const Eigen::SparseMatrix<double>& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix file " + path.string());
  out.precision(17);
  for (int k = 0; k < m.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  if (!out) throw IoError("failed writing matrix file " + path.string());
}

}  // namespace odg
