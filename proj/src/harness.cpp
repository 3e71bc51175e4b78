#include "odg/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "odg/errors.hpp"

namespace odg {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// Rethrows the active library error with a prefix, keeping its type.
[[noreturn]] void rethrow_with(const std::string& prefix) {
  try {
    throw;
  } catch (const SolverError& e) {
    throw SolverError(prefix + e.what(), e.residual());
  } catch (const GeometryError& e) {
    throw GeometryError(prefix + e.what());
  } catch (const TopologyError& e) {
    throw TopologyError(prefix + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DomainError& e) {
    throw DomainError(prefix + e.what());
  } catch (const DegreeError& e) {
    throw DegreeError(prefix + e.what());
  } catch (const IoError& e) {
    throw IoError(prefix + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

void RunConfig::validate() const {
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (levels < 2) throw ConfigError("at least two levels are needed for rates");
  if (degree < 1) throw ConfigError("degree must be at least 1");
  if (eta && !(*eta > 0.0)) throw ConfigError("eta must be positive");
  if (quad && *quad < 1) throw ConfigError("quadrature points must be at least 1");
}

AssemblyConfig RunConfig::assembly() const {
  AssemblyConfig a = AssemblyConfig::defaults(degree);
  if (eta) a.penalty = *eta;
  if (quad) a.quad_points = *quad;
  a.variant = variant;
  return a;
}

LevelGeometry build_level(const ExampleCase& ex, const RunConfig& cfg, int level) {
  LevelGeometry g;
  g.multipatch = ex.geometry(cfg.degree, level, cfg.non_matching);
  g.h = g.multipatch.mesh_size();
  g.width = cfg.matching ? 0.0 : std::pow(g.h, cfg.lambda);
  if (g.width > 0.0) {
    for (int pair : ex.overlap_pairs) g.multipatch = make_overlap(g.multipatch, pair, g.width);
  }
  return g;
}

ConvergenceTable run_convergence(const RunConfig& cfg,
                                 const std::function<void(int, const ErrorReport&)>& progress) {
  cfg.validate();
  const ExampleCase ex = example_by_name(cfg.example);
  const ProblemSpec spec = ex.problem();
  const AssemblyConfig acfg = cfg.assembly();
  ConvergenceTable table;
  table.lambda = cfg.lambda;
  for (int level = 0; level < cfg.levels; ++level) {
    try {
      auto g = build_level(ex, cfg, level);
      auto mp = std::make_shared<const MultiPatch>(std::move(g.multipatch));
      const LinearSystem sys = assemble(*mp, spec, acfg);
      const DiscreteSolution sol = solve(mp, sys);
      ErrorReport rep = dg_error(sol, spec);
      rep.h = g.h;
      rep.overlap_width = g.width;
      table.levels.push_back(rep);
      if (progress) progress(level, rep);
    } catch (const Error&) {
      rethrow_with("level " + std::to_string(level) + ": ");
    }
  }
  return table;
}

std::string csv_text(const ConvergenceTable& table) {
  std::ostringstream out;
  out << "level,h,d_o,dofs,dg_error,l2_error,rate\n";
  const auto rates = table.rates();
  for (std::size_t i = 0; i < table.levels.size(); ++i) {
    const auto& l = table.levels[i];
    out << i << ',' << fmt17(l.h) << ',' << fmt17(l.overlap_width) << ',' << l.dofs << ','
        << fmt17(l.dg_error) << ',' << fmt17(l.l2_error) << ',';
    if (i < rates.size() && rates[i]) out << fmt17(*rates[i]);
    out << '\n';
  }
  return out.str();
}

void write_csv(const ConvergenceTable& table, const std::filesystem::path& path) {
  write_text(path, csv_text(table));
}

ConvergenceTable parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "level,h,d_o,dofs,dg_error,l2_error,rate") {
    throw ConfigError("unexpected CSV header");
  }
  ConvergenceTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() != 7) throw ConfigError("CSV row needs 7 columns: " + line);
    ErrorReport r;
    try {
      r.h = std::stod(cells[1]);
      r.overlap_width = std::stod(cells[2]);
      r.dofs = std::stoi(cells[3]);
      r.dg_error = std::stod(cells[4]);
      r.l2_error = std::stod(cells[5]);
    } catch (const std::exception&) {
      throw ConfigError("malformed number in CSV row: " + line);
    }
    table.levels.push_back(r);
  }
  return table;
}

std::string svg_text(const std::vector<ConvergenceTable>& tables, const std::string& title) {
  constexpr double width = 640, height = 480, left = 80, right = 150, top = 40, bottom = 60;
  double hmin = INFINITY, hmax = 0, emin = INFINITY, emax = 0;
  for (const auto& t : tables) {
    for (const auto& l : t.levels) {
      if (l.h <= 0 || l.dg_error <= 0) continue;
      hmin = std::min(hmin, l.h);
      hmax = std::max(hmax, l.h);
      emin = std::min(emin, l.dg_error);
      emax = std::max(emax, l.dg_error);
    }
  }
  if (!(hmax > 0)) hmin = 0.1, hmax = 1, emin = 0.1, emax = 1;
  // Decade-aligned axes.
  const double x0 = std::floor(std::log10(hmin)), x1 = std::ceil(std::log10(hmax) + 1e-12);
  const double y0 = std::floor(std::log10(emin)), y1 = std::ceil(std::log10(emax) + 1e-12);
  const double xs = x1 > x0 ? x1 - x0 : 1, ys = y1 > y0 ? y1 - y0 : 1;
  const double pw = width - left - right, ph = height - top - bottom;
  const auto px = [&](double h) { return left + (std::log10(h) - x0) / xs * pw; };
  const auto py = [&](double e) { return top + (y1 - std::log10(e)) / ys * ph; };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << title << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = x0; d <= x1 + 1e-9; d += 1) {
    const double x = left + (d - x0) / xs * pw;
    out << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + ph
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">1e"
        << static_cast<int>(d) << "</text>\n";
  }
  for (double d = y0; d <= y1 + 1e-9; d += 1) {
    const double y = top + (y1 - d) / ys * ph;
    out << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e"
        << static_cast<int>(d) << "</text>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\">h</text>\n";
  out << "<text x=\"20\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << top + ph / 2 << ")\">DG error</text>\n";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const char* color = colors[i % std::size(colors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& l : tables[i].levels) {
      if (l.h > 0 && l.dg_error > 0) out << fmt(px(l.h), 6) << ',' << fmt(py(l.dg_error), 6) << ' ';
    }
    out << "\"/>\n";
    const auto r = tables[i].final_rate();
    const double ly = top + 16 + 18.0 * static_cast<double>(i);
    out << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << left + pw + 30
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << left + pw + 36 << "\" y=\"" << ly << "\">&#955;=" << fmt(tables[i].lambda, 4);
    if (r) out << " r=" << fmt(*r, 3);
    out << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(const std::vector<ConvergenceTable>& tables, const std::string& title,
               const std::filesystem::path& path) {
  write_text(path, svg_text(tables, title));
}

void emit_outputs(const ConvergenceTable& table, const std::string& title,
                  const std::filesystem::path& dir) {
  if (table.levels.empty()) throw ConfigError("nothing to write: the table is empty");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  write_csv(table, dir / "convergence.csv");
  write_svg({table}, title, dir / "convergence.svg");
}

}  // namespace odg
