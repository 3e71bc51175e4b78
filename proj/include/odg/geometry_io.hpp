#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "odg/geometry.hpp"

namespace odg {

/// One schema violation, located by JSON pointer and 1-based source line.
struct GeometryDiagnostic {
  int line = 0;
  std::string pointer;
  std::string message;
};

/// Collects every schema violation of a geometry document. Parse errors are
/// reported as a single diagnostic. An empty result means the text is valid.
std::vector<GeometryDiagnostic> validate_geometry_json(std::string_view text);

/// Parses and validates; throws ConfigError listing all diagnostics as
/// "line N: <pointer>: <message>".
MultiPatch parse_geometry_json(std::string_view text);
MultiPatch read_geometry_file(const std::filesystem::path& path);

/// Serializes with 17 significant digits so parse(write(mp)) is exact.
std::string write_geometry_json(const MultiPatch& mp);
void write_geometry_file(const MultiPatch& mp, const std::filesystem::path& path);

}  // namespace odg
