// overlap-dgiga: convergence studies for DG-IGA on overlapping multipatch domains.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "odg/errors.hpp"
#include "odg/geometry_io.hpp"
#include "odg/harness.hpp"
#include "odg/self_check.hpp"

namespace {

enum Exit { ok = 0, failure = 1, config = 2, geometry = 3, solver = 4 };

void add_run_options(CLI::App& cmd, odg::RunConfig& cfg, std::string& variant) {
  cmd.add_option("--example", cfg.example, "smooth, jump-rho, multiface or box3d")
      ->check(CLI::IsMember(odg::example_names()))
      ->required();
  cmd.add_option("--degree", cfg.degree, "spline degree p")->capture_default_str();
  cmd.add_option("--levels", cfg.levels, "number of refinement levels")->capture_default_str();
  cmd.add_option("--eta", cfg.eta, "penalty parameter (default 4(p+1)^2)");
  cmd.add_option("--quad", cfg.quad, "Gauss points per direction (default p+1)");
  cmd.add_option("--variant", variant, "flux variant")
      ->check(CLI::IsMember({"symmetric", "one-sided"}))
      ->capture_default_str();
  cmd.add_flag("--non-matching", cfg.non_matching, "refine one patch once more");
  cmd.add_flag("--matching", cfg.matching, "keep interfaces matching (d_o = 0)");
  cmd.add_option("--out", cfg.out, "output directory")->required();
}

void apply_variant(odg::RunConfig& cfg, const std::string& variant) {
  cfg.variant = variant == "one-sided" ? odg::FluxVariant::one_sided : odg::FluxVariant::symmetric;
}

std::string title_of(const odg::RunConfig& cfg) {
  return cfg.example + ", p=" + std::to_string(cfg.degree);
}

odg::ConvergenceTable run_one(const odg::RunConfig& cfg, bool quiet) {
  cfg.validate();
  std::printf("%s  p=%d  lambda=%g\n", cfg.example.c_str(), cfg.degree, cfg.lambda);
  const auto progress = [quiet](int level, const odg::ErrorReport& r) {
    if (!quiet) {
      std::printf("  level %d  h=%.4e  d_o=%.4e  dofs=%d  dg=%.6e  l2=%.6e\n", level, r.h,
                  r.overlap_width, r.dofs, r.dg_error, r.l2_error);
      std::fflush(stdout);
    }
  };
  auto table = odg::run_convergence(cfg, progress);
  if (const auto r = table.final_rate()) std::printf("  rate %.4f\n", *r);
  return table;
}

int cmd_run(const odg::RunConfig& cfg, bool quiet, const std::filesystem::path& dump_geometry) {
  if (!dump_geometry.empty()) {
    if (dump_geometry.has_parent_path()) {
      std::error_code ec;
      std::filesystem::create_directories(dump_geometry.parent_path(), ec);
      if (ec) throw odg::IoError("cannot create " + dump_geometry.parent_path().string());
    }
    const auto ex = odg::example_by_name(cfg.example);
    odg::write_geometry_file(odg::build_level(ex, cfg, cfg.levels - 1).multipatch, dump_geometry);
  }
  const auto table = run_one(cfg, quiet);
  odg::emit_outputs(table, title_of(cfg), cfg.out);
  return ok;
}

int cmd_sweep(odg::RunConfig cfg, const std::vector<double>& lambdas, bool quiet) {
  std::vector<odg::ConvergenceTable> tables;
  std::error_code ec;
  std::filesystem::create_directories(cfg.out, ec);
  if (ec) throw odg::IoError("cannot create " + cfg.out.string() + ": " + ec.message());
  for (double l : lambdas) {
    cfg.lambda = l;
    tables.push_back(run_one(cfg, quiet));
    std::ostringstream name;
    name << "convergence_lambda" << l << ".csv";
    odg::write_csv(tables.back(), cfg.out / name.str());
  }
  odg::write_svg(tables, title_of(cfg), cfg.out / "convergence.svg");
  std::printf("\n%-8s %s\n", "lambda", "rate");
  for (const auto& t : tables) {
    const auto r = t.final_rate();
    std::printf("%-8g %s\n", t.lambda, r ? std::to_string(*r).c_str() : "n/a");
  }
  return ok;
}

int cmd_check() {
  bool all = true;
  for (const auto& r : odg::run_self_checks()) {
    std::printf("[%s] %-34s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    all = all && r.passed;
  }
  return all ? ok : failure;
}

int cmd_validate(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw odg::IoError("cannot open " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const auto diags = odg::validate_geometry_json(buf.str());
  for (const auto& d : diags) {
    std::fprintf(stderr, "%s:%d: %s: %s\n", file.string().c_str(), d.line, d.pointer.c_str(),
                 d.message.c_str());
  }
  if (!diags.empty()) return config;
  const auto mp = odg::parse_geometry_json(buf.str());
  std::printf("%s: %zu patches, %zu interfaces, %d dofs\n", file.string().c_str(),
              mp.patches.size(), mp.interfaces.size(), mp.total_dofs());
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DG-IGA convergence studies on overlapping multipatch domains"};
  app.require_subcommand(1);

  odg::RunConfig run_cfg;
  std::string run_variant = "symmetric";
  bool quiet = false;
  std::filesystem::path dump_geometry;
  auto* run = app.add_subcommand("run", "refinement study for one lambda");
  add_run_options(*run, run_cfg, run_variant);
  run->add_option("--lambda", run_cfg.lambda, "overlap exponent, d_o = h^lambda")->required();
  run->add_option("--dump-geometry", dump_geometry, "write the finest geometry as JSON");
  run->add_flag("--quiet", quiet, "print only the final rate");

  odg::RunConfig sweep_cfg;
  std::string sweep_variant = "symmetric";
  std::vector<double> lambdas{1.0, 2.0, 2.5, 3.0};
  auto* sweep = app.add_subcommand("sweep", "refinement studies for several lambdas");
  add_run_options(*sweep, sweep_cfg, sweep_variant);
  sweep->add_option("--lambdas", lambdas, "comma separated exponents")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_flag("--quiet", quiet, "print only the final rates");

  auto* check = app.add_subcommand("check", "run the invariant self-test suite");

  std::filesystem::path geometry_file;
  auto* validate = app.add_subcommand("validate", "check a geometry JSON file");
  validate->add_option("file", geometry_file, "geometry file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config;
  }

  try {
    if (*run) {
      apply_variant(run_cfg, run_variant);
      return cmd_run(run_cfg, quiet, dump_geometry);
    }
    if (*sweep) {
      apply_variant(sweep_cfg, sweep_variant);
      return cmd_sweep(sweep_cfg, lambdas, quiet);
    }
    if (*check) return cmd_check();
    if (*validate) return cmd_validate(geometry_file);
  } catch (const odg::SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return solver;
  } catch (const odg::GeometryError& e) {
    std::fprintf(stderr, "geometry error: %s\n", e.what());
    return geometry;
  } catch (const odg::TopologyError& e) {
    std::fprintf(stderr, "topology error: %s\n", e.what());
    return geometry;
  } catch (const odg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return config;
  }
  return ok;
}
