#include "odg/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "odg/errors.hpp"

namespace odg {

namespace {

constexpr double kKnotTol = 1e-14;

void check_unit_interval(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << "evaluation point " << x << " outside [0,1]";
    throw DomainError(os.str());
  }
}

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : degree_(degree), knots_(std::move(knots)) {
  if (degree_ < 0) throw ConfigError("negative spline degree");
  const auto m = static_cast<int>(knots_.size());
  if (m < 2 * (degree_ + 1)) {
    throw ConfigError("knot vector too short for degree " + std::to_string(degree_));
  }
  for (int i = 0; i + 1 < m; ++i) {
    if (knots_[i] > knots_[i + 1]) throw ConfigError("knot vector is not nondecreasing");
  }
  if (knots_.front() != 0.0 || knots_.back() != 1.0) {
    throw ConfigError("knot vector must start at 0 and end at 1");
  }
  for (int i = 0; i <= degree_; ++i) {
    if (knots_[i] != 0.0 || knots_[m - 1 - i] != 1.0) {
      throw ConfigError("knot vector is not open (end multiplicity must be degree+1)");
    }
  }
  if (knots_[degree_ + 1] == 0.0 || knots_[m - degree_ - 2] == 1.0) {
    throw ConfigError("end knot multiplicity exceeds degree+1");
  }
  int mult = 1;
  for (int i = degree_ + 2; i < m - degree_ - 1; ++i) {
    mult = (knots_[i] == knots_[i - 1]) ? mult + 1 : 1;
    if (mult > degree_) throw ConfigError("interior knot multiplicity exceeds degree");
  }
}

KnotVector KnotVector::uniform(int degree, int elements) {
  if (elements < 1) throw ConfigError("need at least one element");
  std::vector<double> k(static_cast<std::size_t>(degree + 1), 0.0);
  for (int e = 1; e < elements; ++e) k.push_back(static_cast<double>(e) / elements);
  k.insert(k.end(), static_cast<std::size_t>(degree + 1), 1.0);
  return KnotVector(degree, std::move(k));
}

std::vector<double> KnotVector::breaks() const {
  std::vector<double> b;
  for (double k : knots_) {
    if (b.empty() || k > b.back()) b.push_back(k);
  }
  return b;
}

double KnotVector::max_span_length() const {
  const auto b = breaks();
  double h = 0.0;
  for (std::size_t i = 0; i + 1 < b.size(); ++i) h = std::max(h, b[i + 1] - b[i]);
  return h;
}

int KnotVector::find_span(double x) const {
  check_unit_interval(x);
  const int n = num_basis();
  if (x >= knots_[static_cast<std::size_t>(n)]) return n - 1;
  // upper_bound gives the first knot > x; the span starts one before it.
  const auto it = std::upper_bound(knots_.begin() + degree_, knots_.begin() + n + 1, x);
  return static_cast<int>(it - knots_.begin()) - 1;
}

double KnotVector::greville(int i) const {
  double s = 0.0;
  for (int j = 1; j <= degree_; ++j) s += knots_[static_cast<std::size_t>(i + j)];
  return degree_ == 0 ? 0.5 * (knots_[i] + knots_[i + 1]) : s / degree_;
}

KnotVector KnotVector::refine_uniform() const {
  std::vector<double> fine;
  fine.reserve(2 * knots_.size());
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (i > 0 && knots_[i] > knots_[i - 1] + kKnotTol) {
      fine.push_back(0.5 * (knots_[i - 1] + knots_[i]));
    }
    fine.push_back(knots_[i]);
  }
  return KnotVector(degree_, std::move(fine));
}

BasisValues eval_basis(const KnotVector& kv, double x) {
  const int p = kv.degree();
  const int span = kv.find_span(x);
  const auto U = kv.knots();
  std::vector<double> N(static_cast<std::size_t>(p + 1), 0.0);
  std::vector<double> left(static_cast<std::size_t>(p + 1)), right(static_cast<std::size_t>(p + 1));
  N[0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[span + 1 - j];
    right[j] = U[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = safe_ratio(N[r], right[r + 1] + left[j - r]);
      N[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    N[j] = saved;
  }
  return {span - p, std::move(N)};
}

BasisDerivatives eval_basis_derivs(const KnotVector& kv, double x, int order) {
  const int p = kv.degree();
  if (order < 0 || order > p) {
    throw DegreeError("derivative order " + std::to_string(order) + " exceeds degree " +
                      std::to_string(p));
  }
  const int span = kv.find_span(x);
  const auto U = kv.knots();
  const auto P = static_cast<std::size_t>(p + 1);

  // ndu holds basis values (upper triangle) and knot differences (lower).
  std::vector<std::vector<double>> ndu(P, std::vector<double>(P, 0.0));
  std::vector<double> left(P), right(P);
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - U[span + 1 - j];
    right[j] = U[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = safe_ratio(ndu[r][j - 1], ndu[j][r]);
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }

  std::vector<std::vector<double>> ders(static_cast<std::size_t>(order + 1), std::vector<double>(P, 0.0));
  for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];

  std::vector<std::vector<double>> a(2, std::vector<double>(P, 0.0));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= order; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = safe_ratio(a[s1][0], ndu[pk + 1][rk]);
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = safe_ratio(a[s1][j] - a[s1][j - 1], ndu[pk + 1][rk + j]);
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = safe_ratio(-a[s1][k - 1], ndu[pk + 1][r]);
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  int factor = p;
  for (int k = 1; k <= order; ++k) {
    for (int j = 0; j <= p; ++j) ders[k][j] *= factor;
    factor *= (p - k);
  }
  return {span - p, std::move(ders)};
}

TensorSpace::TensorSpace(std::vector<KnotVector> directions) : dirs_(std::move(directions)) {
  if (dirs_.size() < 1 || dirs_.size() > 3) {
    throw ConfigError("tensor space dimension must be 1, 2 or 3");
  }
  num_basis_ = 1;
  for (const auto& kv : dirs_) num_basis_ *= kv.num_basis();
}

int TensorSpace::flat_index(std::span<const int> multi) const {
  int flat = 0;
  int stride = 1;
  for (int k = 0; k < dim(); ++k) {
    flat += multi[k] * stride;
    stride *= dirs_[k].num_basis();
  }
  return flat;
}

std::vector<int> TensorSpace::multi_index(int flat) const {
  std::vector<int> m(static_cast<std::size_t>(dim()));
  for (int k = 0; k < dim(); ++k) {
    const int n = dirs_[k].num_basis();
    m[k] = flat % n;
    flat /= n;
  }
  return m;
}

std::vector<int> TensorSpace::element_counts() const {
  std::vector<int> c;
  for (const auto& kv : dirs_) c.push_back(kv.num_elements());
  return c;
}

TensorSpace TensorSpace::refine_uniform() const {
  std::vector<KnotVector> fine;
  for (const auto& kv : dirs_) fine.push_back(kv.refine_uniform());
  return TensorSpace(std::move(fine));
}

TensorBasis tensor_eval(const TensorSpace& space, const Point& xhat, int order) {
  const int d = space.dim();
  std::vector<BasisDerivatives> uni;
  uni.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    uni.push_back(eval_basis_derivs(space.direction(k), xhat[k], order >= 1 ? 1 : 0));
  }

  std::size_t count = 1;
  for (const auto& u : uni) count *= u.table[0].size();

  TensorBasis out;
  out.indices.reserve(count);
  out.values.reserve(count);
  if (order >= 1) out.gradients.reserve(count);

  std::vector<int> local(static_cast<std::size_t>(d), 0);
  std::vector<int> global(static_cast<std::size_t>(d), 0);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rem = c;
    for (int k = 0; k < d; ++k) {
      const std::size_t nk = uni[k].table[0].size();
      local[k] = static_cast<int>(rem % nk);
      rem /= nk;
      global[k] = uni[k].first + local[k];
    }
    double value = 1.0;
    for (int k = 0; k < d; ++k) value *= uni[k].table[0][local[k]];
    out.indices.push_back(space.flat_index(global));
    out.values.push_back(value);
    if (order >= 1) {
      Point g(d);
      for (int a = 0; a < d; ++a) {
        double prod = 1.0;
        for (int k = 0; k < d; ++k) {
          prod *= (k == a) ? uni[k].table[1][local[k]] : uni[k].table[0][local[k]];
        }
        g[a] = prod;
      }
      out.gradients.push_back(g);
    }
  }
  return out;
}

}  // namespace odg
