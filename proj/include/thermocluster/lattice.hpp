#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace thermo {

enum class Boundary { open, periodic };

enum class LatticeKind { chain, honeycomb, square, triangular, cubic, bcc };

// Undirected graph; bonds canonicalized to (min,max) and sorted lexicographically.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> bonds;
  std::vector<std::vector<int>> adj;
  std::vector<int> deg;
  // per site: list of (bond index, end) with end 0 if the site is bonds[b].first
  std::vector<std::vector<std::pair<int, int>>> site_bonds;
};

Graph make_graph(int n, std::vector<std::pair<int, int>> bonds);

Graph make_chain(int n, Boundary bc = Boundary::open);
Graph make_star(int leaves);
Graph make_square(int lx, int ly, Boundary bc = Boundary::periodic);
Graph make_honeycomb(int lx, int ly, Boundary bc = Boundary::periodic);
Graph make_triangular(int lx, int ly, Boundary bc = Boundary::periodic);
Graph make_cubic(int lx, int ly, int lz, Boundary bc = Boundary::periodic);
Graph make_bcc(int l, Boundary bc = Boundary::periodic);

int coordination(LatticeKind kind);
const char* kind_name(LatticeKind kind);
std::optional<LatticeKind> parse_kind(const std::string& name);

// dims: up to 3 positive extents, meaning depends on kind
Graph make_lattice(LatticeKind kind, const std::vector<int>& dims, Boundary bc);

}  // namespace thermo
