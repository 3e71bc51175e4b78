// Acceptance run: one PASS/FAIL line per criterion, details indented below.
//
//   acceptance                      exit 0 only if every criterion passes
//   acceptance --expect-red C1,C4   exit 0 only if exactly these fail
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "odg/harness.hpp"
#include "odg/self_check.hpp"
#include "oracles.hpp"

using namespace odg;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> details;

  void add(bool ok, const std::string& text) {
    passed = passed && ok;
    details.push_back(std::string(ok ? "ok   " : "miss ") + text);
  }
  void note(const std::string& text) { details.push_back("note " + text); }
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ConvergenceTable study(const std::string& example, double lambda, int levels, bool matching = false) {
  RunConfig cfg;
  cfg.example = example;
  cfg.lambda = lambda;
  cfg.levels = levels;
  cfg.matching = matching;
  return run_convergence(cfg);
}

// Splits the finest-level error of an overlap run against the matching run
// on the same meshes.
void explain(Outcome& out, const ConvergenceTable& overlap, const ConvergenceTable& matching) {
  const auto& o = overlap.levels.back();
  const auto& m = matching.levels.back();
  out.note(fmt("finest level: DG error %.3e with overlap, %.3e with matching faces (d_o = %.2e)",
               o.dg_error, m.dg_error, o.overlap_width));
  out.note(fmt("overlap run split: volume %.3e, interface %.3e, boundary %.3e", o.volume, o.interface,
               o.boundary));
}

struct Bracket {
  double lambda, lo, hi;
};

Outcome rate_brackets(const std::string& example, const std::vector<Bracket>& brackets, int levels,
                      double budget, std::vector<ConvergenceTable>* tables = nullptr) {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& b : brackets) {
    const auto t = study(example, b.lambda, levels);
    const double r = t.final_rate().value_or(-1.0);
    out.add(r >= b.lo && r <= b.hi, fmt("lambda=%-4g r = %.3f", b.lambda, r) +
                                        fmt(" in [%.2f, %.2f]", b.lo, b.hi));
    if (tables) tables->push_back(t);
  }
  const double s = seconds_since(t0);
  out.add(s < budget, fmt("runtime %.1f s (limit %.0f s)", s, budget));
  return out;
}

const std::vector<Bracket> table_brackets{
    {1.0, 0.35, 0.75}, {2.0, 1.3, 1.7}, {2.5, 1.8, 2.2}, {3.0, 1.8, 2.2}};

Outcome criterion1(const ConvergenceTable& matching) {
  std::vector<ConvergenceTable> tables;
  auto out = rate_brackets("smooth", table_brackets, 5, 120.0, &tables);
  explain(out, tables.back(), matching);
  return out;
}

Outcome criterion2() { return rate_brackets("jump-rho", table_brackets, 5, 120.0); }

Outcome criterion3() {
  std::vector<ConvergenceTable> tables;
  auto out = rate_brackets("multiface", {{2.5, 1.8, 2.2}, {3.0, 1.8, 2.2}}, 5, 180.0, &tables);
  const auto t0 = std::chrono::steady_clock::now();
  for (double lambda : {1.0, 2.0}) {
    const double r = study("multiface", lambda, 5).final_rate().value_or(-1.0);
    out.add(r < 1.7, fmt("lambda=%-4g r = %.3f suboptimal (< 1.7)", lambda, r));
  }
  out.note(fmt("suboptimal runs took %.1f s", seconds_since(t0)));
  return out;
}

Outcome criterion4() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const auto t = study("box3d", 3.0, 3);
  const double s = seconds_since(t0);
  const double r = t.final_rate().value_or(-1.0);
  out.add(r >= 1.7 && r <= 2.3, fmt("lambda=3 r = %.3f in [1.70, 2.30]", r));
  out.add(s < 600.0, fmt("runtime %.1f s (limit 600 s)", s));
  const auto m = study("box3d", 3.0, 3, true);
  out.note(fmt("matching faces on the same meshes: r = %.3f", m.final_rate().value_or(-1.0)));
  explain(out, t, m);
  return out;
}

Outcome criterion5(const ConvergenceTable& matching) {
  Outcome out;
  const double r = matching.final_rate().value_or(-1.0);
  out.add(r >= 1.9 && r <= 2.1, fmt("d_o = 0, r = %.3f in [1.90, 2.10]", r));
  return out;
}

Outcome criterion6() {
  Outcome out;
  for (const auto& c : run_self_checks()) out.add(c.passed, c.name + ": " + c.detail);
  return out;
}

ProblemSpec sine_problem(int patches) {
  using std::numbers::pi;
  ProblemSpec s;
  s.diffusion.assign(patches, 1.0);
  s.source = [](int, const Point& x) { return 2 * pi * pi * std::sin(pi * x[0]) * std::sin(pi * x[1]); };
  s.dirichlet = [](int, const Point&) { return 0.0; };
  return s;
}

Outcome criterion7() {
  Outcome out;
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);

  // Element stiffness of a curved patch against composite Gauss overkill.
  {
    const auto patch = fixture::curved(2, 3);
    const auto mp = fixture::single(patch);
    ProblemSpec spec = sine_problem(1);
    AssemblyConfig cfg = AssemblyConfig::defaults(2);
    cfg.quad_points = 2 + 4;
    SystemBuilder sys(mp);
    assemble_volume(sys, mp, 0, spec, cfg);
    const Eigen::MatrixXd A(std::move(sys).finalize().matrix);
    oracle::Patch2 o;
    const auto k = patch.space().direction(0).knots();
    o.U.assign(k.begin(), k.end());
    o.V = o.U;
    o.cps = patch.control_points();
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::VectorXd v(A.rows());
      for (int i = 0; i < v.size(); ++i) v[i] = u(rng);
      const double ref = oracle::integrate_2d(
          [&](double s, double t) {
            return o.gradient(v, s, t).squaredNorm() * std::abs(o.jacobian(s, t).determinant());
          },
          24);
      worst = std::max(worst, std::abs(v.dot(A * v) - ref) / ref);
    }
    out.add(worst <= 1e-10, fmt("stiffness vs overkill quadrature: %.2e relative (<= 1e-10)", worst));
  }

  // CG against a dense direct solve.
  {
    const auto mp = fixture::two_squares(2, 12);
    const auto sys = assemble(mp, sine_problem(2), AssemblyConfig::defaults(2));
    const auto x = conjugate_gradient(sys.matrix, sys.rhs, 1e-13, 10000);
    const auto y = dense_direct_solve(sys.matrix, sys.rhs);
    const double d = (x - y).norm() / y.norm();
    out.add(d <= 1e-8, fmt("CG vs dense direct: %.2e relative (<= 1e-8)", d));
  }

  // Two matching patches against one patch on the same mesh.
  {
    const int p = 3, n = 16;
    TensorSpace space({KnotVector::uniform(p, 2 * n), KnotVector::uniform(p, n)});
    Eigen::MatrixXd cps(space.num_basis(), 2);
    for (int j = 0; j < space.num_basis(); ++j) {
      const auto m = space.multi_index(j);
      cps(j, 0) = space.direction(0).greville(m[0]);
      cps(j, 1) = space.direction(1).greville(m[1]);
    }
    auto one = std::make_shared<const MultiPatch>(fixture::single(Patch(space, cps)));
    auto two = std::make_shared<const MultiPatch>(
        fixture::side_by_side(fixture::box(p, n, 0, 0, 0.5, 1), fixture::box(p, n, 0.5, 0, 0.5, 1)));
    const auto s1 = solve(one, assemble(*one, sine_problem(1), AssemblyConfig::defaults(p)));
    const auto s2 = solve(two, assemble(*two, sine_problem(2), AssemblyConfig::defaults(p)));
    std::uniform_real_distribution<double> unit(0, 1);
    double worst = 0.0;
    for (int s = 0; s < 100; ++s) {
      Point x(2), xh(2);
      x << unit(rng), unit(rng);
      const int patch = x[0] < 0.5 ? 0 : 1;
      xh << (patch == 0 ? 2 * x[0] : 2 * x[0] - 1), x[1];
      worst = std::max(worst, std::abs(eval_solution(s1, 0, x, false).value -
                                       eval_solution(s2, patch, xh, false).value));
    }
    out.add(worst <= 1e-6, fmt("two patches vs one patch: %.2e max pointwise (<= 1e-6)", worst));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<std::string> expect_red;
  app.add_option("--expect-red", expect_red, "criteria known to fail, e.g. C1,C4")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const auto matching = study("smooth", 1.0, 5, true);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 smooth example rate table", [&] { return criterion1(matching); }},
      {"C2 discontinuous coefficient rates", criterion2},
      {"C3 multiface overlap rates", criterion3},
      {"C4 3D example rate", criterion4},
      {"C5 matching baseline rate", [&] { return criterion5(matching); }},
      {"C6 property suites", criterion6},
      {"C7 oracle equivalences", criterion7},
  };

  std::set<std::string> red;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.add(false, std::string("threw: ") + e.what());
    }
    std::printf("%s  %s\n", o.passed ? "PASS" : "FAIL", name.c_str());
    for (const auto& d : o.details) std::printf("        %s\n", d.c_str());
    std::fflush(stdout);
    if (!o.passed) red.insert(name.substr(0, 2));
  }

  const std::set<std::string> expected(expect_red.begin(), expect_red.end());
  if (red == expected) return 0;
  for (const auto& c : red) {
    if (!expected.count(c)) std::printf("unexpected failure: %s\n", c.c_str());
  }
  for (const auto& c : expected) {
    if (!red.count(c)) std::printf("expected %s to fail but it passed\n", c.c_str());
  }
  return 1;
}
