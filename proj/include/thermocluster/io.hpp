#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "thermocluster/lattice.hpp"
#include "thermocluster/measurement.hpp"

namespace thermo {

inline constexpr const char* kSchemaVersion = "1";

// command-line / config mistakes, mapped to exit code 2
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt17(double x);
std::string fmtg(double x, int sig);

std::vector<int> parse_dims(const std::string& csv);
Boundary parse_boundary(const std::string& s);
LatticeKind kind_from_name(const std::string& name);

// edge list: one "i j" pair per line, '#' comments allowed
Graph parse_edge_list(std::istream& in);

// {"kind": name, "dims": [...], "boundary": "open"|"periodic"}
Graph lattice_from_json_text(const std::string& text, const std::string& what);

// arg may be inline JSON, a file (JSON object or edge list), or a lattice name
Graph resolve_lattice(const std::string& arg, const std::string& dims_csv,
                      const std::string& boundary);

MeasurementPattern pattern_from_file(const std::string& path);

std::string outcomes_string(const std::vector<uint8_t>& bits);

std::string read_text_file(const std::string& path);

}  // namespace thermo
