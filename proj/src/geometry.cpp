#include "odg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "odg/errors.hpp"
#include "odg/quadrature.hpp"

namespace odg {

namespace {

std::string describe(const FaceId& f) {
  std::ostringstream os;
  os << "patch " << f.patch << " dir " << f.dir << (f.side == Side::lo ? " lo" : " hi");
  return os.str();
}

std::string describe(const Point& p) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

// Inserts knot `u` once into direction `dir` of a tensor control net.
// Returns the new knot vector and control net (Boehm's algorithm applied to
// every line of control points along `dir`).
std::pair<KnotVector, Eigen::MatrixXd> insert_knot(const TensorSpace& space,
                                                   const Eigen::MatrixXd& cps, int dir, double u) {
  const KnotVector& kv = space.direction(dir);
  const int p = kv.degree();
  const auto U = kv.knots();
  const int k = kv.find_span(u);

  std::vector<double> new_knots(U.begin(), U.end());
  new_knots.insert(new_knots.begin() + k + 1, u);
  KnotVector fine(p, std::move(new_knots));

  std::vector<KnotVector> dirs = space.directions();
  dirs[dir] = fine;
  TensorSpace fine_space(dirs);

  Eigen::MatrixXd out(fine_space.num_basis(), cps.cols());
  for (int flat = 0; flat < fine_space.num_basis(); ++flat) {
    auto multi = fine_space.multi_index(flat);
    const int i = multi[dir];
    auto coarse_at = [&](int idx) {
      auto m = multi;
      m[dir] = idx;
      return cps.row(space.flat_index(m));
    };
    if (i <= k - p) {
      out.row(flat) = coarse_at(i);
    } else if (i > k) {
      out.row(flat) = coarse_at(i - 1);
    } else {
      const double alpha = (u - U[i]) / (U[i + p] - U[i]);
      out.row(flat) = alpha * coarse_at(i) + (1.0 - alpha) * coarse_at(i - 1);
    }
  }
  return {fine, out};
}

}  // namespace

Orientation Orientation::identity(int tangential_dims) {
  Orientation o;
  for (int k = 0; k < tangential_dims; ++k) {
    o.perm.push_back(k);
    o.flip.push_back(false);
  }
  return o;
}

Patch::Patch(TensorSpace space, Eigen::MatrixXd control_points)
    : space_(std::move(space)), cps_(std::move(control_points)) {
  if (cps_.rows() != space_.num_basis()) {
    throw ConfigError("control point count " + std::to_string(cps_.rows()) +
                      " does not match basis count " + std::to_string(space_.num_basis()));
  }
  if (cps_.cols() != space_.dim()) {
    throw ConfigError("control point dimension does not match the parametric dimension");
  }
}

Point Patch::map_point(const Point& xhat) const {
  const auto basis = tensor_eval(space_, xhat, 0);
  Point x = Point::Zero(dim());
  for (std::size_t j = 0; j < basis.indices.size(); ++j) {
    x += basis.values[j] * cps_.row(basis.indices[j]).transpose();
  }
  return x;
}

Jacobian Patch::jacobian(const TensorBasis& basis) const {
  const int d = dim();
  Jacobian jac;
  jac.matrix = SmallMatrix::Zero(d, d);
  for (std::size_t j = 0; j < basis.indices.size(); ++j) {
    jac.matrix += cps_.row(basis.indices[j]).transpose() * basis.gradients[j].transpose();
  }
  jac.det = jac.matrix.determinant();
  if (std::abs(jac.det) < 1e-12) {
    throw GeometryError("singular geometry map (det J = " + std::to_string(jac.det) + ")");
  }
  jac.inverse = jac.matrix.inverse();
  return jac;
}

Jacobian Patch::jacobian(const Point& xhat) const {
  try {
    return jacobian(tensor_eval(space_, xhat, 1));
  } catch (const GeometryError& e) {
    throw GeometryError(std::string(e.what()) + " at xhat = " + describe(xhat));
  }
}

FaceGeometry Patch::face_geometry(int dir, Side side, const Point& t) const {
  FaceGeometry g;
  g.xhat = face_to_volume(dim(), dir, side, t);
  const auto basis = tensor_eval(space_, g.xhat, 1);
  const Jacobian jac = jacobian(basis);
  g.x = Point::Zero(dim());
  for (std::size_t j = 0; j < basis.indices.size(); ++j) {
    g.x += basis.values[j] * cps_.row(basis.indices[j]).transpose();
  }
  Point nhat = Point::Zero(dim());
  nhat[dir] = side == Side::hi ? 1.0 : -1.0;
  // Nanson: n dS = det J J^{-T} nhat dS_hat.
  Point scaled = jac.inverse.transpose() * nhat;
  const double norm = scaled.norm();
  if (norm == 0.0) throw GeometryError("degenerate face Jacobian");
  g.measure = std::abs(jac.det) * norm;
  g.normal = (jac.det > 0 ? 1.0 : -1.0) * scaled / norm;
  return g;
}

double Patch::mesh_size() const {
  const int d = dim();
  std::vector<std::vector<double>> breaks;
  for (int k = 0; k < d; ++k) breaks.push_back(space_.direction(k).breaks());
  const auto counts = space_.element_counts();
  int total = 1;
  for (int c : counts) total *= c;

  double h = 0.0;
  const int corners = 1 << d;
  std::vector<Point> images(static_cast<std::size_t>(corners));
  for (int e = 0; e < total; ++e) {
    int rem = e;
    std::vector<int> elem(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      elem[k] = rem % counts[k];
      rem /= counts[k];
    }
    for (int c = 0; c < corners; ++c) {
      Point xhat(d);
      for (int k = 0; k < d; ++k) xhat[k] = breaks[k][elem[k] + ((c >> k) & 1)];
      images[c] = map_point(xhat);
    }
    for (int a = 0; a < corners; ++a) {
      for (int b = a + 1; b < corners; ++b) h = std::max(h, (images[a] - images[b]).norm());
    }
  }
  return h;
}

double Patch::min_jacobian_det(int points_per_dir) const {
  const int d = dim();
  const auto rule = gauss_rule(points_per_dir);
  const auto counts = space_.element_counts();
  int total = 1;
  for (int c : counts) total *= c;
  double det_min = std::numeric_limits<double>::infinity();
  for (int e = 0; e < total; ++e) {
    int rem = e;
    std::vector<int> elem(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      elem[k] = rem % counts[k];
      rem /= counts[k];
    }
    for (const auto& q : element_quadrature(space_, elem, rule)) {
      const auto basis = tensor_eval(space_, q.xhat, 1);
      SmallMatrix J = SmallMatrix::Zero(d, d);
      for (std::size_t j = 0; j < basis.indices.size(); ++j) {
        J += cps_.row(basis.indices[j]).transpose() * basis.gradients[j].transpose();
      }
      det_min = std::min(det_min, J.determinant());
    }
  }
  return det_min;
}

PointEval evaluate_point(const Patch& patch, const Point& xhat) {
  PointEval ev;
  ev.basis = tensor_eval(patch.space(), xhat, 1);
  ev.jacobian = patch.jacobian(ev.basis);
  const SmallMatrix inv_t = ev.jacobian.inverse.transpose();
  const auto& cps = patch.control_points();
  ev.x = Point::Zero(patch.dim());
  ev.gradients.reserve(ev.basis.indices.size());
  for (std::size_t j = 0; j < ev.basis.indices.size(); ++j) {
    ev.x += ev.basis.values[j] * cps.row(ev.basis.indices[j]).transpose();
    ev.gradients.push_back(inv_t * ev.basis.gradients[j]);
  }
  return ev;
}

FacePointEval evaluate_face_point(const Patch& patch, int dir, Side side, const Point& t) {
  FacePointEval ev;
  ev.point = evaluate_point(patch, face_to_volume(patch.dim(), dir, side, t));
  const auto& jac = ev.point.jacobian;
  Point nhat = Point::Zero(patch.dim());
  nhat[dir] = side == Side::hi ? 1.0 : -1.0;
  const Point scaled = jac.inverse.transpose() * nhat;
  const double norm = scaled.norm();
  ev.measure = std::abs(jac.det) * norm;
  ev.normal = (jac.det > 0 ? 1.0 : -1.0) * scaled / norm;
  return ev;
}

Point face_to_volume(int dim, int dir, Side side, const Point& t) {
  Point xhat(dim);
  int j = 0;
  for (int k = 0; k < dim; ++k) {
    xhat[k] = (k == dir) ? (side == Side::hi ? 1.0 : 0.0) : t[j++];
  }
  return xhat;
}

std::vector<int> tangential_dirs(int dim, int dir) {
  std::vector<int> t;
  for (int k = 0; k < dim; ++k) {
    if (k != dir) t.push_back(k);
  }
  return t;
}

void MultiPatch::validate() const {
  if (dim != 2 && dim != 3) throw TopologyError("dimension must be 2 or 3");
  if (patches.empty()) throw TopologyError("multipatch has no patches");
  for (std::size_t i = 0; i < patches.size(); ++i) {
    if (patches[i].dim() != dim) {
      throw TopologyError("patch " + std::to_string(i) + " has the wrong dimension");
    }
  }
  const auto check_face = [&](const FaceId& f) {
    if (f.patch < 0 || f.patch >= static_cast<int>(patches.size()) || f.dir < 0 || f.dir >= dim) {
      throw TopologyError("face out of range: " + describe(f));
    }
  };
  // Count how often each face is claimed.
  std::vector<int> claims(patches.size() * static_cast<std::size_t>(2 * dim), 0);
  const auto slot = [&](const FaceId& f) {
    return static_cast<std::size_t>(f.patch * 2 * dim + 2 * f.dir + (f.side == Side::hi ? 1 : 0));
  };
  for (const auto& pair : interfaces) {
    check_face(pair.a);
    check_face(pair.b);
    const auto& o = pair.orientation;
    const auto nt = static_cast<std::size_t>(dim - 1);
    if (o.perm.size() != nt || o.flip.size() != nt) {
      throw TopologyError("orientation data has the wrong size for " + describe(pair.a));
    }
    std::vector<int> sorted = o.perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < nt; ++k) {
      if (sorted[k] != static_cast<int>(k)) {
        throw TopologyError("orientation permutation is invalid for " + describe(pair.a));
      }
    }
    if (pair.a.patch == pair.b.patch) {
      throw TopologyError("interface joins a patch to itself: " + describe(pair.a));
    }
    ++claims[slot(pair.a)];
    ++claims[slot(pair.b)];
  }
  for (const auto& f : dirichlet) {
    check_face(f);
    ++claims[slot(f)];
  }
  for (std::size_t p = 0; p < patches.size(); ++p) {
    for (int dir = 0; dir < dim; ++dir) {
      for (Side s : {Side::lo, Side::hi}) {
        const FaceId f{static_cast<int>(p), dir, s};
        const int c = claims[slot(f)];
        if (c != 1) {
          throw TopologyError("face " + describe(f) + " is claimed " + std::to_string(c) +
                              " times (expected exactly once)");
        }
      }
    }
  }
  // Matching faces must have the same image under the orientation map.
  constexpr int samples = 5;
  int total = 1;
  for (int k = 0; k < dim - 1; ++k) total *= samples;
  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    const auto& pair = interfaces[i];
    if (pair.kind != InterfaceKind::matching) continue;
    for (int s = 0; s < total; ++s) {
      Point t(dim - 1);
      for (int k = 0, r = s; k < dim - 1; ++k, r /= samples) t[k] = (r % samples) / (samples - 1.0);
      const Point xa = patches[pair.a.patch].map_point(face_to_volume(dim, pair.a.dir, pair.a.side, t));
      const auto q = partner_point(*this, static_cast<int>(i), PairSide::a, t);
      const double gap = (patches[pair.b.patch].map_point(q.xhat) - xa).norm();
      if (gap > 1e-10 * std::max(1.0, xa.norm())) {
        throw TopologyError("matching interface " + std::to_string(i) +
                            " has faces that do not coincide (gap " + std::to_string(gap) + ")");
      }
    }
  }
}

int MultiPatch::total_dofs() const {
  int n = 0;
  for (const auto& p : patches) n += p.space().num_basis();
  return n;
}

std::vector<int> MultiPatch::dof_offsets() const {
  std::vector<int> off{0};
  for (const auto& p : patches) off.push_back(off.back() + p.space().num_basis());
  return off;
}

double MultiPatch::mesh_size() const {
  double h = 0.0;
  for (const auto& p : patches) h = std::max(h, p.mesh_size());
  return h;
}

Point orient_a_to_b(const Orientation& o, const Point& t) {
  Point out(t.size());
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    out[o.perm[k]] = o.flip[k] ? 1.0 - t[k] : t[k];
  }
  return out;
}

Point orient_b_to_a(const Orientation& o, const Point& t) {
  Point out(t.size());
  for (Eigen::Index k = 0; k < t.size(); ++k) {
    const double v = t[o.perm[k]];
    out[k] = o.flip[k] ? 1.0 - v : v;
  }
  return out;
}

PartnerPoint partner_point(const MultiPatch& mp, int pair, PairSide from, const Point& t) {
  if (pair < 0 || pair >= static_cast<int>(mp.interfaces.size())) {
    throw TopologyError("interface index out of range");
  }
  const auto& ip = mp.interfaces[pair];
  const auto& o = ip.orientation;
  if (static_cast<int>(o.perm.size()) != mp.dim - 1 || o.flip.size() != o.perm.size()) {
    throw TopologyError("invalid orientation data on interface " + std::to_string(pair));
  }
  for (int v : o.perm) {
    if (v < 0 || v >= mp.dim - 1) {
      throw TopologyError("invalid orientation permutation on interface " + std::to_string(pair));
    }
  }
  PartnerPoint out;
  if (from == PairSide::a) {
    out.face = ip.b;
    out.t = orient_a_to_b(o, t);
  } else {
    out.face = ip.a;
    out.t = orient_b_to_a(o, t);
  }
  out.xhat = face_to_volume(mp.dim, out.face.dir, out.face.side, out.t);
  return out;
}

MultiPatch make_overlap(const MultiPatch& mp, int pair, double width) {
  if (pair < 0 || pair >= static_cast<int>(mp.interfaces.size())) {
    throw TopologyError("interface index out of range");
  }
  if (width < 0.0) throw ConfigError("overlap width must be nonnegative");
  if (width == 0.0) return mp;
  const auto& ip = mp.interfaces[pair];
  if (ip.kind != InterfaceKind::matching) {
    throw TopologyError("make_overlap expects a matching interface");
  }

  const Patch& pb = mp.patches[ip.b.patch];
  const Patch& pa = mp.patches[ip.a.patch];
  const TensorSpace& space = pb.space();
  const int d = mp.dim;
  const auto tdirs = tangential_dirs(d, ip.b.dir);
  const int layer = ip.b.side == Side::lo ? 0 : space.num_basis(ip.b.dir) - 1;

  // Averaged normal over the Greville abscissae of the face control points:
  // outward from b and into a (the mean of n_b and -n_a at paired points).
  Point direction = Point::Zero(d);
  std::vector<int> face_cps;
  for (int flat = 0; flat < space.num_basis(); ++flat) {
    const auto m = space.multi_index(flat);
    if (m[ip.b.dir] != layer) continue;
    face_cps.push_back(flat);
    Point t(d - 1);
    for (int k = 0; k < d - 1; ++k) {
      t[k] = space.direction(tdirs[k]).greville(m[tdirs[k]]);
    }
    const auto gb = pb.face_geometry(ip.b.dir, ip.b.side, t);
    const auto partner = partner_point(mp, pair, PairSide::b, t);
    const auto ga = pa.face_geometry(ip.a.dir, ip.a.side, partner.t);
    direction += 0.5 * (gb.normal - ga.normal);
  }
  direction /= direction.norm();

  Eigen::MatrixXd cps = pb.control_points();
  for (int flat : face_cps) cps.row(flat) += width * direction.transpose();

  MultiPatch out = mp;
  out.patches[ip.b.patch] = Patch(space, std::move(cps));
  const double det_min = out.patches[ip.b.patch].min_jacobian_det(space.direction(0).degree() + 1);
  if (!(det_min > 0.0)) {
    throw GeometryError("overlap width " + std::to_string(width) + " inverts patch " +
                        std::to_string(ip.b.patch) + " (min det J = " + std::to_string(det_min) +
                        ")");
  }
  out.interfaces[pair].kind = InterfaceKind::overlap;
  out.interfaces[pair].width = width;
  return out;
}

double overlap_width(const MultiPatch& mp, int pair, int samples) {
  if (samples < 2) throw ConfigError("overlap_width needs at least 2 samples per direction");
  const auto& ip = mp.interfaces.at(static_cast<std::size_t>(pair));
  const int d = mp.dim;
  const Patch& pa = mp.patches[ip.a.patch];
  const Patch& pb = mp.patches[ip.b.patch];
  int total = 1;
  for (int k = 0; k < d - 1; ++k) total *= samples;
  double width = 0.0;
  for (int s = 0; s < total; ++s) {
    int rem = s;
    Point t(d - 1);
    for (int k = 0; k < d - 1; ++k) {
      t[k] = static_cast<double>(rem % samples) / (samples - 1);
      rem /= samples;
    }
    const Point xa = pa.map_point(face_to_volume(d, ip.a.dir, ip.a.side, t));
    const auto partner = partner_point(mp, pair, PairSide::a, t);
    const Point xb = pb.map_point(partner.xhat);
    width = std::max(width, (xa - xb).norm());
  }
  return width;
}

MultiPatch refine_uniform(const MultiPatch& mp) {
  MultiPatch out = mp;
  for (auto& patch : out.patches) {
    TensorSpace space = patch.space();
    Eigen::MatrixXd cps = patch.control_points();
    for (int dir = 0; dir < space.dim(); ++dir) {
      const auto b = space.direction(dir).breaks();
      for (std::size_t i = 0; i + 1 < b.size(); ++i) {
        auto [kv, fine] = insert_knot(space, cps, dir, 0.5 * (b[i] + b[i + 1]));
        std::vector<KnotVector> dirs = space.directions();
        dirs[dir] = kv;
        space = TensorSpace(dirs);
        cps = std::move(fine);
      }
    }
    patch = Patch(space, std::move(cps));
  }
  return out;
}

}  // namespace odg
