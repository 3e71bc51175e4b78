#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "odg/analysis.hpp"
#include "odg/assembly.hpp"
#include "odg/examples.hpp"
#include "odg/solver.hpp"

namespace odg {

struct RunConfig {
  std::string example = "smooth";
  int degree = 2;
  double lambda = 2.0;
  int levels = 5;
  std::optional<double> eta;   // default 4(p+1)^2
  std::optional<int> quad;     // default p+1
  FluxVariant variant = FluxVariant::symmetric;
  bool non_matching = false;
  bool matching = false;       // keep every interface matching (d_o = 0)
  std::filesystem::path out;

  /// Throws ConfigError unless lambda > 0, levels >= 2, degree >= 1 and the
  /// optional overrides are positive.
  void validate() const;
  AssemblyConfig assembly() const;
};

/// Geometry of one level: refined, then every overlap pair of the example
/// displaced by d_o = h^lambda, h measured before displacement.
struct LevelGeometry {
  MultiPatch multipatch;
  double h = 0.0;
  double width = 0.0;
};

LevelGeometry build_level(const ExampleCase& ex, const RunConfig& cfg, int level);

/// Runs levels 0..levels-1 of the refinement sequence. Library errors are
/// rethrown with the level prefixed to the message, keeping their type.
ConvergenceTable run_convergence(const RunConfig& cfg,
                                 const std::function<void(int, const ErrorReport&)>& progress = {});

/// level,h,d_o,dofs,dg_error,l2_error,rate with 17 significant digits; the
/// rate of level 0 is left empty.
std::string csv_text(const ConvergenceTable& table);
void write_csv(const ConvergenceTable& table, const std::filesystem::path& path);

/// Parses csv_text output back (h, d_o, dofs and both errors per level).
ConvergenceTable parse_csv(const std::string& text);

/// Log-log plot of DG error against h, one polyline per table.
std::string svg_text(const std::vector<ConvergenceTable>& tables, const std::string& title);
void write_svg(const std::vector<ConvergenceTable>& tables, const std::string& title,
               const std::filesystem::path& path);

/// Writes convergence.csv and convergence.svg into `dir` (created if absent).
/// Throws IoError when the directory or files cannot be written.
void emit_outputs(const ConvergenceTable& table, const std::string& title,
                  const std::filesystem::path& dir);

}  // namespace odg
