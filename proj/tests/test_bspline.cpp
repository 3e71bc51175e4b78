#include <doctest.h>

#include <random>

#include "odg/bspline.hpp"
#include "odg/errors.hpp"
#include "oracles.hpp"

using namespace odg;

namespace {

std::vector<double> to_vec(std::span<const double> s) { return {s.begin(), s.end()}; }

KnotVector random_knots(std::mt19937& rng, int p) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::vector<double> interior(5);
  for (double& v : interior) v = u(rng);
  std::sort(interior.begin(), interior.end());
  std::vector<double> k(p + 1, 0.0);
  k.insert(k.end(), interior.begin(), interior.end());
  k.insert(k.end(), p + 1, 1.0);
  return KnotVector(p, k);
}

}  // namespace

TEST_CASE("knot vector validation") {
  CHECK_NOTHROW(KnotVector(2, {0, 0, 0, 1, 1, 1}));
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 1, 1, 1}), ConfigError);          // not open at 0
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 0.6, 0.4, 1, 1, 1}), ConfigError);  // decreasing
  CHECK_THROWS_AS(KnotVector(1, {0, 0, 0.5, 0.5, 1, 1}), ConfigError);   // interior m > p
  CHECK_THROWS_AS(KnotVector(2, {0, 0, 0, 1, 1, 1, 1}), ConfigError);    // end m > p+1
  const auto kv = KnotVector::uniform(3, 4);
  CHECK(kv.num_basis() == 7);
  CHECK(kv.num_elements() == 4);
  CHECK(kv.max_span_length() == doctest::Approx(0.25));
}

TEST_CASE("find_span") {
  CHECK(KnotVector(2, {0, 0, 0, 1, 1, 1}).find_span(0.5) == 2);
  CHECK(KnotVector(2, {0, 0, 0, 0.5, 1, 1, 1}).find_span(1.0) == 3);
  CHECK(KnotVector(2, {0, 0, 0, 0.25, 0.5, 0.75, 1, 1, 1}).find_span(0.3) == 3);
  const KnotVector kv(2, {0, 0, 0, 0.25, 0.5, 0.75, 1, 1, 1});
  CHECK_THROWS_AS(kv.find_span(-1e-9), DomainError);
  CHECK_THROWS_AS(kv.find_span(1.0 + 1e-9), DomainError);
  // Linear-scan oracle.
  for (double x : {0.0, 0.1, 0.25, 0.49, 0.5, 0.74, 0.99}) {
    const auto U = to_vec(kv.knots());
    int expect = -1;
    for (int i = 0; i + 1 < static_cast<int>(U.size()); ++i) {
      if (U[i] <= x && x < U[i + 1]) expect = i;
    }
    CHECK(kv.find_span(x) == expect);
  }
}

TEST_CASE("eval_basis examples") {
  auto b = eval_basis(KnotVector(1, {0, 0, 1, 1}), 0.25);
  CHECK(b.first == 0);
  CHECK(b.values[0] == doctest::Approx(0.75));
  CHECK(b.values[1] == doctest::Approx(0.25));
  b = eval_basis(KnotVector(2, {0, 0, 0, 1, 1, 1}), 0.5);
  CHECK(b.values[0] == doctest::Approx(0.25));
  CHECK(b.values[1] == doctest::Approx(0.5));
  CHECK(b.values[2] == doctest::Approx(0.25));
  CHECK_THROWS_AS(eval_basis(KnotVector(2, {0, 0, 0, 1, 1, 1}), 1.5), DomainError);
}

TEST_CASE("eval_basis matches the recursive definition") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const KnotVector fixed(2, {0, 0, 0, 0.5, 1, 1, 1});
  const auto b = eval_basis(fixed, 0.25);
  for (int j = 0; j < 3; ++j) {
    CHECK(b.values[j] == doctest::Approx(oracle::cox_de_boor(to_vec(fixed.knots()), b.first + j, 2, 0.25)).epsilon(1e-14));
  }
  for (int p = 1; p <= 4; ++p) {
    const auto kv = random_knots(rng, p);
    const auto U = to_vec(kv.knots());
    for (int s = 0; s < 50; ++s) {
      const double x = s == 0 ? 1.0 : u(rng);
      const auto e = eval_basis(kv, x);
      for (int i = 0; i < kv.num_basis(); ++i) {
        const int local = i - e.first;
        const double got = local >= 0 && local <= p ? e.values[local] : 0.0;
        CHECK(got == doctest::Approx(oracle::cox_de_boor(U, i, p, x)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("basis properties: partition of unity, nonnegativity, local support") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p = 1; p <= 4; ++p) {
    const auto kv = random_knots(rng, p);
    const auto U = to_vec(kv.knots());
    for (int s = 0; s < 200; ++s) {
      const double x = u(rng);
      const auto e = eval_basis(kv, x);
      double sum = 0.0;
      for (double v : e.values) {
        CHECK(v >= -1e-14);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      // Functions outside [first, first+p] have x outside their support.
      for (int i = 0; i < kv.num_basis(); ++i) {
        if (i < e.first || i > e.first + p) {
          CHECK((x < U[i] || x >= U[i + p + 1]));
          CHECK(oracle::cox_de_boor(U, i, p, x) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("derivatives") {
  auto d = eval_basis_derivs(KnotVector(1, {0, 0, 1, 1}), 0.37, 1);
  CHECK(d.table[1][0] == doctest::Approx(-1.0));
  CHECK(d.table[1][1] == doctest::Approx(1.0));
  d = eval_basis_derivs(KnotVector(2, {0, 0, 0, 1, 1, 1}), 0.5, 1);
  CHECK(d.table[1][0] == doctest::Approx(-1.0));
  CHECK(d.table[1][1] == doctest::Approx(0.0));
  CHECK(d.table[1][2] == doctest::Approx(1.0));
  CHECK_THROWS_AS(eval_basis_derivs(KnotVector(2, {0, 0, 0, 1, 1, 1}), 0.5, 3), DegreeError);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  constexpr double delta = 1e-6;
  for (int p = 1; p <= 4; ++p) {
    const auto kv = random_knots(rng, p);
    const auto U = to_vec(kv.knots());
    int tested = 0;
    while (tested < 100) {
      const double x = u(rng);
      if (kv.find_span(std::max(0.0, x - delta)) != kv.find_span(std::min(1.0, x + delta))) continue;
      if (x - delta < 0 || x + delta > 1) continue;
      ++tested;
      const auto e = eval_basis_derivs(kv, x, std::min(p, 2));
      const auto lo = eval_basis(kv, x - delta), hi = eval_basis(kv, x + delta);
      double row1 = 0.0;
      for (int j = 0; j <= p; ++j) {
        CHECK(e.table[0][j] == doctest::Approx(eval_basis(kv, x).values[j]).epsilon(1e-14));
        const double fd = (hi.values[j] - lo.values[j]) / (2 * delta);
        CHECK(std::abs(e.table[1][j] - fd) < 1e-5);
        CHECK(e.table[1][j] == doctest::Approx(oracle::cox_de_boor_deriv(U, e.first + j, p, x)).epsilon(1e-10));
        row1 += e.table[1][j];
      }
      CHECK(std::abs(row1) < 1e-10);
    }
  }
}

TEST_CASE("tensor_eval") {
  TensorSpace sp({KnotVector(2, {0, 0, 0, 1, 1, 1}), KnotVector(2, {0, 0, 0, 1, 1, 1})});
  Point x(2);
  x << 0.5, 0.5;
  const auto b = tensor_eval(sp, x, 0);
  CHECK(b.values.size() == 9);
  CHECK(b.values[0] == doctest::Approx(0.0625));

  // Mixed spaces against an explicit double loop.
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const KnotVector a = random_knots(rng, 2), c = random_knots(rng, 3);
  TensorSpace mixed({a, c});
  for (int s = 0; s < 50; ++s) {
    Point y(2);
    y << u(rng), u(rng);
    const auto t = tensor_eval(mixed, y, 1);
    const auto ba = eval_basis_derivs(a, y[0], 1), bc = eval_basis_derivs(c, y[1], 1);
    double sum = 0.0;
    std::size_t k = 0;
    for (int j = 0; j <= 3; ++j) {
      for (int i = 0; i <= 2; ++i) {
        const int flat = (bc.first + j) * a.num_basis() + (ba.first + i);
        // Find the entry with this flat index.
        std::size_t pos = 0;
        while (pos < t.indices.size() && t.indices[pos] != flat) ++pos;
        REQUIRE(pos < t.indices.size());
        CHECK(t.values[pos] == doctest::Approx(ba.table[0][i] * bc.table[0][j]).epsilon(1e-14));
        CHECK(t.gradients[pos][0] == doctest::Approx(ba.table[1][i] * bc.table[0][j]).epsilon(1e-12));
        CHECK(t.gradients[pos][1] == doctest::Approx(ba.table[0][i] * bc.table[1][j]).epsilon(1e-12));
        ++k;
      }
    }
    for (double v : t.values) sum += v;
    CHECK(k == t.values.size());
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("flat and multi indices are inverse") {
  TensorSpace sp({KnotVector::uniform(2, 3), KnotVector::uniform(1, 2), KnotVector::uniform(3, 2)});
  CHECK(sp.num_basis() == 5 * 3 * 5);
  for (int j = 0; j < sp.num_basis(); ++j) {
    const auto m = sp.multi_index(j);
    CHECK(sp.flat_index(m) == j);
  }
  const std::vector<int> m{1, 2, 3};
  CHECK(sp.flat_index(m) == 1 + 5 * (2 + 3 * 3));
}

TEST_CASE("uniform refinement") {
  CHECK(KnotVector(2, {0, 0, 0, 1, 1, 1}).refine_uniform() == KnotVector(2, {0, 0, 0, 0.5, 1, 1, 1}));
  CHECK(KnotVector(2, {0, 0, 0, 0.5, 1, 1, 1}).refine_uniform() ==
        KnotVector(2, {0, 0, 0, 0.25, 0.5, 0.75, 1, 1, 1}));
  const auto kv = KnotVector(3, {0, 0, 0, 0, 0.2, 0.2, 0.7, 1, 1, 1, 1});
  CHECK(kv.refine_uniform().max_span_length() == doctest::Approx(0.5 * kv.max_span_length()));

  // Nested spaces: prolong random coefficients by Boehm insertion (oracle)
  // and compare values on the refined knot vector.
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p = 1; p <= 4; ++p) {
    const auto coarse = random_knots(rng, p);
    const auto fine = coarse.refine_uniform();
    Eigen::MatrixXd c(coarse.num_basis(), 1);
    for (int i = 0; i < c.rows(); ++i) c(i, 0) = u(rng) - 0.5;
    auto U = to_vec(coarse.knots());
    Eigen::MatrixXd P = c;
    const auto b = coarse.breaks();
    for (std::size_t i = 0; i + 1 < b.size(); ++i) oracle::boehm_insert(U, p, P, 0.5 * (b[i] + b[i + 1]));
    REQUIRE(U == to_vec(fine.knots()));
    for (int s = 0; s < 100; ++s) {
      const double x = u(rng);
      const double vc = oracle::spline_value(to_vec(coarse.knots()), p, c.col(0), x);
      const auto e = eval_basis(fine, x);
      double vf = 0.0;
      for (int j = 0; j <= p; ++j) vf += P(e.first + j, 0) * e.values[j];
      CHECK(std::abs(vc - vf) < 1e-12);
    }
  }
}
