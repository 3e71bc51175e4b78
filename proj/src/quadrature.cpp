#include "odg/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "odg/errors.hpp"

namespace odg {

QuadRule gauss_rule(int n) {
  if (n < 1) throw ConfigError("quadrature needs at least one point");
  QuadRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-like initial guess for the i-th root of P_n on [-1,1].
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1,1] to [0,1], ascending order.
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.5;
  return rule;
}

std::vector<QuadPoint> box_quadrature(std::span<const double> lo, std::span<const double> hi,
                                      const QuadRule& rule) {
  const auto d = lo.size();
  double volume = 1.0;
  for (std::size_t k = 0; k < d; ++k) volume *= hi[k] - lo[k];
  if (!(volume > 0.0)) return {};

  const auto n = static_cast<std::size_t>(rule.size());
  std::size_t count = 1;
  for (std::size_t k = 0; k < d; ++k) count *= n;

  std::vector<QuadPoint> pts;
  pts.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t rem = c;
    Point x(static_cast<Eigen::Index>(d));
    double w = volume;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t q = rem % n;
      rem /= n;
      x[static_cast<Eigen::Index>(k)] = lo[k] + (hi[k] - lo[k]) * rule.nodes[q];
      w *= rule.weights[q];
    }
    pts.push_back({x, w});
  }
  return pts;
}

std::vector<QuadPoint> element_quadrature(const TensorSpace& space, std::span<const int> element,
                                          const QuadRule& rule) {
  const int d = space.dim();
  std::vector<double> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const auto b = space.direction(k).breaks();
    const int e = element[k];
    if (e < 0 || e + 1 >= static_cast<int>(b.size())) {
      throw ConfigError("element index out of range");
    }
    lo[k] = b[e];
    hi[k] = b[e + 1];
  }
  return box_quadrature(lo, hi, rule);
}

std::vector<QuadPoint> face_quadrature(const TensorSpace& space, int normal_dir,
                                       std::span<const int> face_element, const QuadRule& rule) {
  const int d = space.dim();
  if (normal_dir < 0 || normal_dir >= d) throw ConfigError("face direction out of range");
  std::vector<double> lo, hi;
  int t = 0;
  for (int k = 0; k < d; ++k) {
    if (k == normal_dir) continue;
    const auto b = space.direction(k).breaks();
    const int e = face_element[t++];
    if (e < 0 || e + 1 >= static_cast<int>(b.size())) {
      throw ConfigError("face element index out of range");
    }
    lo.push_back(b[e]);
    hi.push_back(b[e + 1]);
  }
  return box_quadrature(lo, hi, rule);
}

}  // namespace odg
