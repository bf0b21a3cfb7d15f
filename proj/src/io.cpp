#include "thermocluster/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace thermo {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    size_t line = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw UsageError("malformed JSON in " + what + " at line " + std::to_string(line) + ": " +
                     e.what());
  }
}

}  // namespace

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmtg(double x, int sig) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", sig, x);
  return buf;
}

std::vector<int> parse_dims(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw UsageError("bad dimension value '" + tok + "'");
    }
  }
  return out;
}

Boundary parse_boundary(const std::string& s) {
  if (s == "open") return Boundary::open;
  if (s == "periodic") return Boundary::periodic;
  throw UsageError("boundary must be 'open' or 'periodic', got '" + s + "'");
}

LatticeKind kind_from_name(const std::string& name) {
  if (auto k = parse_kind(name)) return *k;
  throw UsageError("unknown lattice kind '" + name + "'");
}

Graph parse_edge_list(std::istream& in) {
  std::vector<std::pair<int, int>> bonds;
  int n = 0;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    int i, j;
    if (!(ls >> i)) continue;
    if (!(ls >> j)) throw UsageError("edge list line with a single endpoint: '" + line + "'");
    bonds.emplace_back(i, j);
    n = std::max(n, std::max(i, j) + 1);
  }
  if (bonds.empty()) throw UsageError("edge list is empty");
  return make_graph(n, bonds);
}

Graph lattice_from_json_text(const std::string& text, const std::string& what) {
  json j = parse_json(text, what);
  if (!j.is_object() || !j.contains("kind"))
    throw UsageError("lattice JSON must be an object with a 'kind' field");
  try {
    LatticeKind kind = kind_from_name(j["kind"].get<std::string>());
    std::vector<int> dims;
    if (j.contains("dims")) {
      if (!j["dims"].is_array()) throw UsageError("lattice 'dims' must be an array");
      for (const auto& d : j["dims"]) dims.push_back(d.get<int>());
    }
    Boundary bc = Boundary::periodic;
    if (j.contains("boundary")) bc = parse_boundary(j["boundary"].get<std::string>());
    return make_lattice(kind, dims, bc);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot open file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Graph resolve_lattice(const std::string& arg, const std::string& dims_csv,
                      const std::string& boundary) {
  if (arg.empty()) throw UsageError("a lattice is required (--lattice)");
  if (arg.front() == '{') return lattice_from_json_text(arg, "--lattice");
  if (std::ifstream probe(arg); probe.good()) {
    std::string text = read_text_file(arg);
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
      return lattice_from_json_text(text, arg);
    std::istringstream ss(text);
    return parse_edge_list(ss);
  }
  try {
    LatticeKind kind = kind_from_name(arg);
    return make_lattice(kind, parse_dims(dims_csv), parse_boundary(boundary));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

MeasurementPattern pattern_from_file(const std::string& path) {
  json j = parse_json(read_text_file(path), path);
  if (!j.is_array()) throw UsageError("pattern file must be a JSON list of steps");
  MeasurementPattern p;
  for (const auto& step : j) {
    if (!step.is_object() || !step.contains("site") || !step.contains("polar") ||
        !step.contains("azimuthal"))
      throw UsageError("pattern step needs 'site', 'polar', 'azimuthal'");
    MeasureStep ms;
    ms.site = step["site"].get<int>();
    ms.polar = step["polar"].get<double>();
    ms.azimuthal = step["azimuthal"].get<double>();
    if (step.contains("adapt") && !step["adapt"].is_null()) {
      const auto& a = step["adapt"];
      AdaptiveRule rule;
      if (a.contains("xor_of"))
        for (const auto& r : a["xor_of"]) rule.xor_of.push_back(r.get<int>());
      if (a.contains("negate")) rule.negate = a["negate"].get<bool>();
      ms.adapt = rule;
    }
    p.steps.push_back(std::move(ms));
  }
  if (p.steps.empty()) throw UsageError("pattern file has no steps");
  return p;
}

std::string outcomes_string(const std::vector<uint8_t>& bits) {
  std::string s(bits.size(), '0');
  for (size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

}  // namespace thermo
