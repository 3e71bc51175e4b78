#include "odg/geometry_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "odg/errors.hpp"

namespace odg {

namespace {

using nlohmann::json;

// Maps JSON pointers to the 1-based line where their value starts. Only run
// on text that nlohmann already accepted, so the scanner can assume validity.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {
    skip_ws();
    value("");
  }

  int line_of(std::string pointer) const {
    // Fall back to the closest enclosing value.
    while (true) {
      const auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      const auto slash = pointer.rfind('/');
      if (slash == std::string::npos) return 1;
      pointer.resize(slash);
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out.push_back(text_[pos_++]);
    }
    ++pos_;  // closing quote
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out.push_back(c);
      }
    }
    return out;
  }

  void value(const std::string& pointer) {
    lines_.emplace(pointer, line_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // colon
        skip_ws();
        value(pointer + "/" + escape(key));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      int index = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(pointer + "/" + std::to_string(index++));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
             text_[pos_] != '}' && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

class Validator {
 public:
  Validator(const json& doc, const LineIndex& lines) : doc_(doc), lines_(lines) {}

  std::vector<GeometryDiagnostic> run(MultiPatch* out) {
    if (!doc_.is_object()) {
      report("", "document must be an object");
      return diags_;
    }
    if (!doc_.contains("dim") || !doc_["dim"].is_number_integer() ||
        (doc_["dim"].get<int>() != 2 && doc_["dim"].get<int>() != 3)) {
      report("/dim", "\"dim\" must be 2 or 3");
      return diags_;
    }
    dim_ = doc_["dim"].get<int>();

    MultiPatch mp;
    mp.dim = dim_;
    if (!doc_.contains("patches") || !doc_["patches"].is_array() || doc_["patches"].empty()) {
      report("/patches", "\"patches\" must be a nonempty array");
    } else {
      const auto& patches = doc_["patches"];
      for (std::size_t i = 0; i < patches.size(); ++i) {
        patch("/patches/" + std::to_string(i), patches[i], mp);
      }
    }
    num_patches_ = static_cast<int>(doc_.contains("patches") && doc_["patches"].is_array()
                                        ? doc_["patches"].size()
                                        : 0);

    if (!doc_.contains("interfaces") || !doc_["interfaces"].is_array()) {
      report("/interfaces", "\"interfaces\" must be an array");
    } else {
      const auto& ifs = doc_["interfaces"];
      for (std::size_t i = 0; i < ifs.size(); ++i) {
        interface("/interfaces/" + std::to_string(i), ifs[i], mp);
      }
    }
    if (!doc_.contains("dirichlet") || !doc_["dirichlet"].is_array()) {
      report("/dirichlet", "\"dirichlet\" must be an array");
    } else {
      const auto& dir = doc_["dirichlet"];
      for (std::size_t i = 0; i < dir.size(); ++i) {
        FaceId f;
        if (face("/dirichlet/" + std::to_string(i), dir[i], f)) mp.dirichlet.push_back(f);
      }
    }

    if (diags_.empty()) {
      try {
        mp.validate();
      } catch (const TopologyError& e) {
        report("", e.what());
      }
    }
    if (diags_.empty() && out != nullptr) *out = std::move(mp);
    return diags_;
  }

 private:
  void report(const std::string& pointer, const std::string& message) {
    diags_.push_back({lines_.line_of(pointer), pointer.empty() ? "/" : pointer, message});
  }

  bool face(const std::string& ptr, const json& j, FaceId& f) {
    if (!j.is_object()) {
      report(ptr, "face must be an object with \"patch\", \"dir\" and \"side\"");
      return false;
    }
    bool ok = true;
    if (!j.contains("patch") || !j["patch"].is_number_integer() || j["patch"].get<int>() < 0 ||
        j["patch"].get<int>() >= num_patches_) {
      report(ptr + "/patch", "\"patch\" must be a patch index in [0, " +
                                 std::to_string(num_patches_) + ")");
      ok = false;
    }
    if (!j.contains("dir") || !j["dir"].is_number_integer() || j["dir"].get<int>() < 0 ||
        j["dir"].get<int>() >= dim_) {
      report(ptr + "/dir", "\"dir\" must be a direction in [0, " + std::to_string(dim_) + ")");
      ok = false;
    }
    if (!j.contains("side") || !j["side"].is_string() ||
        (j["side"] != "lo" && j["side"] != "hi")) {
      report(ptr + "/side", "\"side\" must be \"lo\" or \"hi\"");
      ok = false;
    }
    if (ok) {
      f.patch = j["patch"].get<int>();
      f.dir = j["dir"].get<int>();
      f.side = j["side"] == "lo" ? Side::lo : Side::hi;
    }
    return ok;
  }

  void patch(const std::string& ptr, const json& j, MultiPatch& mp) {
    if (!j.is_object()) {
      report(ptr, "patch must be an object");
      return;
    }
    const auto before = diags_.size();
    if (!j.contains("degree") || !j["degree"].is_array() ||
        static_cast<int>(j["degree"].size()) != dim_) {
      report(ptr + "/degree", "\"degree\" must be an array of " + std::to_string(dim_) + " integers");
    }
    if (!j.contains("knots") || !j["knots"].is_array() ||
        static_cast<int>(j["knots"].size()) != dim_) {
      report(ptr + "/knots", "\"knots\" must be an array of " + std::to_string(dim_) + " knot vectors");
    }
    if (diags_.size() != before) return;

    std::vector<KnotVector> dirs;
    for (int k = 0; k < dim_; ++k) {
      const auto& deg = j["degree"][k];
      const std::string kptr = ptr + "/knots/" + std::to_string(k);
      if (!deg.is_number_integer() || deg.get<int>() < 0) {
        report(ptr + "/degree/" + std::to_string(k), "degree must be a nonnegative integer");
        continue;
      }
      const auto& kn = j["knots"][k];
      if (!kn.is_array() ||
          !std::all_of(kn.begin(), kn.end(), [](const json& v) { return v.is_number(); })) {
        report(kptr, "knot vector must be an array of numbers");
        continue;
      }
      try {
        dirs.emplace_back(deg.get<int>(), kn.get<std::vector<double>>());
      } catch (const ConfigError& e) {
        report(kptr, e.what());
      }
    }
    if (diags_.size() != before) return;
    TensorSpace space(dirs);

    const std::string cptr = ptr + "/control_points";
    if (!j.contains("control_points") || !j["control_points"].is_array()) {
      report(cptr, "\"control_points\" must be an array");
      return;
    }
    const auto& cps = j["control_points"];
    if (static_cast<int>(cps.size()) != space.num_basis()) {
      report(cptr, "expected " + std::to_string(space.num_basis()) + " control points, got " +
                       std::to_string(cps.size()));
      return;
    }
    Eigen::MatrixXd m(space.num_basis(), dim_);
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const auto& row = cps[i];
      if (!row.is_array() || static_cast<int>(row.size()) != dim_ ||
          !std::all_of(row.begin(), row.end(), [](const json& v) { return v.is_number(); })) {
        report(cptr + "/" + std::to_string(i),
               "control point must be an array of " + std::to_string(dim_) + " numbers");
        continue;
      }
      for (int k = 0; k < dim_; ++k) m(static_cast<Eigen::Index>(i), k) = row[k].get<double>();
    }
    if (diags_.size() != before) return;
    mp.patches.emplace_back(space, m);
  }

  void interface(const std::string& ptr, const json& j, MultiPatch& mp) {
    if (!j.is_object()) {
      report(ptr, "interface must be an object");
      return;
    }
    InterfacePair ip;
    bool ok = true;
    ok &= j.contains("a") ? face(ptr + "/a", j["a"], ip.a) : (report(ptr, "missing \"a\""), false);
    ok &= j.contains("b") ? face(ptr + "/b", j["b"], ip.b) : (report(ptr, "missing \"b\""), false);
    const int nt = dim_ - 1;
    if (!j.contains("flip") || !j["flip"].is_array() || static_cast<int>(j["flip"].size()) != nt ||
        !std::all_of(j["flip"].begin(), j["flip"].end(),
                     [](const json& v) { return v.is_boolean(); })) {
      report(ptr + "/flip", "\"flip\" must be an array of " + std::to_string(nt) + " booleans");
      ok = false;
    }
    if (!j.contains("perm") || !j["perm"].is_array() || static_cast<int>(j["perm"].size()) != nt ||
        !std::all_of(j["perm"].begin(), j["perm"].end(),
                     [](const json& v) { return v.is_number_integer(); })) {
      report(ptr + "/perm", "\"perm\" must be an array of " + std::to_string(nt) + " integers");
      ok = false;
    } else {
      auto perm = j["perm"].get<std::vector<int>>();
      auto sorted = perm;
      std::sort(sorted.begin(), sorted.end());
      for (int k = 0; k < nt; ++k) {
        if (sorted[k] != k) {
          report(ptr + "/perm", "\"perm\" must be a permutation of 0.." + std::to_string(nt - 1));
          ok = false;
          break;
        }
      }
    }
    if (!j.contains("kind") || !j["kind"].is_string() ||
        (j["kind"] != "matching" && j["kind"] != "overlap")) {
      report(ptr + "/kind", "\"kind\" must be \"matching\" or \"overlap\"");
      ok = false;
    }
    if (j.contains("width") && (!j["width"].is_number() || j["width"].get<double>() < 0.0)) {
      report(ptr + "/width", "\"width\" must be a nonnegative number");
      ok = false;
    }
    if (!ok) return;
    ip.orientation.perm = j["perm"].get<std::vector<int>>();
    for (const auto& v : j["flip"]) ip.orientation.flip.push_back(v.get<bool>());
    ip.kind = j["kind"] == "matching" ? InterfaceKind::matching : InterfaceKind::overlap;
    ip.width = j.value("width", 0.0);
    mp.interfaces.push_back(ip);
  }

  const json& doc_;
  const LineIndex& lines_;
  int dim_ = 2;
  int num_patches_ = 0;
  std::vector<GeometryDiagnostic> diags_;
};

int line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

std::vector<GeometryDiagnostic> check(std::string_view text, MultiPatch* out) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    return {{line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0), "/", e.what()}};
  }
  const LineIndex lines(text);
  return Validator(doc, lines).run(out);
}

json face_json(const FaceId& f) {
  return {{"patch", f.patch}, {"dir", f.dir}, {"side", f.side == Side::lo ? "lo" : "hi"}};
}

}  // namespace

std::vector<GeometryDiagnostic> validate_geometry_json(std::string_view text) {
  return check(text, nullptr);
}

MultiPatch parse_geometry_json(std::string_view text) {
  MultiPatch mp;
  const auto diags = check(text, &mp);
  if (!diags.empty()) {
    std::ostringstream os;
    os << "invalid geometry file:";
    for (const auto& d : diags) os << "\n  line " << d.line << ": " << d.pointer << ": " << d.message;
    throw ConfigError(os.str());
  }
  return mp;
}

MultiPatch read_geometry_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open geometry file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_geometry_json(ss.str());
}

std::string write_geometry_json(const MultiPatch& mp) {
  // Hand-formatted so each control point sits on its own line; the diagnostics
  // then point at the offending row.
  std::ostringstream os;
  os.precision(17);
  os << "{\n  \"dim\": " << mp.dim << ",\n  \"patches\": [\n";
  for (std::size_t i = 0; i < mp.patches.size(); ++i) {
    const auto& p = mp.patches[i];
    const auto& s = p.space();
    os << "    {\n      \"degree\": [";
    for (int k = 0; k < s.dim(); ++k) os << (k ? ", " : "") << s.direction(k).degree();
    os << "],\n      \"knots\": [";
    for (int k = 0; k < s.dim(); ++k) {
      os << (k ? ", " : "") << "[";
      const auto kn = s.direction(k).knots();
      for (std::size_t m = 0; m < kn.size(); ++m) os << (m ? ", " : "") << kn[m];
      os << "]";
    }
    os << "],\n      \"control_points\": [\n";
    const auto& cps = p.control_points();
    for (Eigen::Index r = 0; r < cps.rows(); ++r) {
      os << "        [";
      for (Eigen::Index c = 0; c < cps.cols(); ++c) os << (c ? ", " : "") << cps(r, c);
      os << "]" << (r + 1 < cps.rows() ? "," : "") << "\n";
    }
    os << "      ]\n    }" << (i + 1 < mp.patches.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"interfaces\": [\n";
  for (std::size_t i = 0; i < mp.interfaces.size(); ++i) {
    const auto& ip = mp.interfaces[i];
    json j = {{"a", face_json(ip.a)},
              {"b", face_json(ip.b)},
              {"flip", ip.orientation.flip},
              {"perm", ip.orientation.perm},
              {"kind", ip.kind == InterfaceKind::matching ? "matching" : "overlap"}};
    if (ip.kind == InterfaceKind::overlap) j["width"] = ip.width;
    os << "    " << j.dump() << (i + 1 < mp.interfaces.size() ? "," : "") << "\n";
  }
  os << "  ],\n  \"dirichlet\": [\n";
  for (std::size_t i = 0; i < mp.dirichlet.size(); ++i) {
    os << "    " << face_json(mp.dirichlet[i]).dump() << (i + 1 < mp.dirichlet.size() ? "," : "")
       << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

void write_geometry_file(const MultiPatch& mp, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write geometry file " + path.string());
  out << write_geometry_json(mp);
  if (!out) throw IoError("failed writing geometry file " + path.string());
}

}  // namespace odg
