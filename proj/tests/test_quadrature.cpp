#include <doctest.h>

#include <cmath>
#include <random>

#include "odg/errors.hpp"
#include "odg/quadrature.hpp"

using namespace odg;

TEST_CASE("gauss_rule closed forms") {
  auto r = gauss_rule(1);
  CHECK(r.nodes[0] == doctest::Approx(0.5));
  CHECK(r.weights[0] == doctest::Approx(1.0));
  r = gauss_rule(2);
  const double off = 1.0 / (2.0 * std::sqrt(3.0));
  CHECK(std::min(r.nodes[0], r.nodes[1]) == doctest::Approx(0.5 - off).epsilon(1e-15));
  CHECK(std::max(r.nodes[0], r.nodes[1]) == doctest::Approx(0.5 + off).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(0.5));
  CHECK(r.weights[1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(gauss_rule(0), ConfigError);
}

TEST_CASE("gauss_rule exactness, symmetry, positivity") {
  const auto r5 = gauss_rule(5);
  double s = 0.0;
  for (int i = 0; i < 5; ++i) s += r5.weights[i] * std::pow(r5.nodes[i], 9);
  CHECK(std::abs(s - 0.1) < 1e-14);
  for (int n = 1; n <= 12; ++n) {
    const auto r = gauss_rule(n);
    REQUIRE(r.size() == n);
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double q = 0.0;
      for (int i = 0; i < n; ++i) q += r.weights[i] * std::pow(r.nodes[i], k);
      CHECK(std::abs(q - 1.0 / (k + 1)) < 1e-13);
    }
    std::vector<double> x = r.nodes, w = r.weights;
    std::vector<std::size_t> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    for (int i = 0; i < n; ++i) {
      CHECK(w[idx[i]] > 0.0);
      CHECK(x[idx[i]] + x[idx[n - 1 - i]] == doctest::Approx(1.0).epsilon(1e-15));
      CHECK(w[idx[i]] == doctest::Approx(w[idx[n - 1 - i]]).epsilon(1e-14));
    }
  }
}

TEST_CASE("element quadrature") {
  TensorSpace one({KnotVector::uniform(2, 1), KnotVector::uniform(2, 1)});
  const std::vector<int> e0{0, 0};
  const auto pts = element_quadrature(one, e0, gauss_rule(1));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].xhat[0] == doctest::Approx(0.5));
  CHECK(pts[0].xhat[1] == doctest::Approx(0.5));

  TensorSpace sp({KnotVector(2, {0, 0, 0, 0.3, 1, 1, 1}), KnotVector::uniform(2, 3)});
  const std::vector<int> e{1, 2};
  double wsum = 0.0;
  for (const auto& q : element_quadrature(sp, e, gauss_rule(3))) wsum += q.weight;
  CHECK(wsum == doctest::Approx(0.7 / 3.0).epsilon(1e-14));

  // Random polynomial of degree 2n-1 per direction over the whole space.
  std::mt19937 rng(6);
  std::uniform_real_distribution<double> u(-1, 1);
  const int n = 3;
  std::vector<double> a(2 * n), b(2 * n);
  for (auto& v : a) v = u(rng);
  for (auto& v : b) v = u(rng);
  const auto poly = [](const std::vector<double>& c, double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::pow(x, static_cast<double>(k));
    return s;
  };
  const auto antider = [](const std::vector<double>& c) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] / static_cast<double>(k + 1);
    return s;
  };
  double total = 0.0;
  const auto counts = sp.element_counts();
  for (int j = 0; j < counts[1]; ++j) {
    for (int i = 0; i < counts[0]; ++i) {
      const std::vector<int> el{i, j};
      for (const auto& q : element_quadrature(sp, el, gauss_rule(n))) {
        total += q.weight * poly(a, q.xhat[0]) * poly(b, q.xhat[1]);
      }
    }
  }
  CHECK(total == doctest::Approx(antider(a) * antider(b)).epsilon(1e-13));
}

TEST_CASE("face and box quadrature") {
  TensorSpace one({KnotVector::uniform(1, 1), KnotVector::uniform(1, 1)});
  const std::vector<int> f0{0};
  const auto pts = face_quadrature(one, 0, f0, gauss_rule(1));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0].xhat.size() == 1);
  CHECK(pts[0].xhat[0] == doctest::Approx(0.5));

  TensorSpace sp({KnotVector::uniform(2, 4), KnotVector::uniform(2, 3), KnotVector::uniform(2, 5)});
  double wsum = 0.0, moment = 0.0;
  for (int j = 0; j < 5; ++j) {
    for (int i = 0; i < 4; ++i) {
      const std::vector<int> fe{i, j};  // tangential directions 0 and 2
      for (const auto& q : face_quadrature(sp, 1, fe, gauss_rule(3))) {
        wsum += q.weight;
        moment += q.weight * std::pow(q.xhat[0], 4) * std::pow(q.xhat[1], 5);
      }
    }
  }
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(moment == doctest::Approx(1.0 / 30.0).epsilon(1e-13));

  const std::vector<double> lo{0.2, 0.4}, hi{0.2, 0.9};
  CHECK(box_quadrature(lo, hi, gauss_rule(2)).empty());
}
