#include "thermocluster/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace thermo {

Graph make_graph(int n, std::vector<std::pair<int, int>> bonds) {
  if (n <= 0) throw std::invalid_argument("graph needs at least one site");
  for (auto& b : bonds) {
    if (b.first == b.second) throw std::invalid_argument("self-loop bond");
    if (b.first < 0 || b.second < 0 || b.first >= n || b.second >= n)
      throw std::invalid_argument("bond site out of range");
    if (b.first > b.second) std::swap(b.first, b.second);
  }
  std::sort(bonds.begin(), bonds.end());
  bonds.erase(std::unique(bonds.begin(), bonds.end()), bonds.end());
  Graph g;
  g.n = n;
  g.bonds = std::move(bonds);
  g.adj.resize(n);
  g.deg.assign(n, 0);
  g.site_bonds.resize(n);
  for (int b = 0; b < static_cast<int>(g.bonds.size()); ++b) {
    auto [i, j] = g.bonds[b];
    g.adj[i].push_back(j);
    g.adj[j].push_back(i);
    g.deg[i]++;
    g.deg[j]++;
    g.site_bonds[i].push_back({b, 0});
    g.site_bonds[j].push_back({b, 1});
  }
  return g;
}

Graph make_chain(int n, Boundary bc) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < n; ++i) bonds.push_back({i, i + 1});
  if (bc == Boundary::periodic && n > 2) bonds.push_back({n - 1, 0});
  return make_graph(n, std::move(bonds));
}

Graph make_star(int leaves) {
  if (leaves < 1) throw std::invalid_argument("star needs at least one leaf");
  std::vector<std::pair<int, int>> bonds;
  for (int i = 1; i <= leaves; ++i) bonds.push_back({0, i});
  return make_graph(leaves + 1, std::move(bonds));
}

namespace {
int wrap(int x, int l) { return ((x % l) + l) % l; }
}  // namespace

Graph make_square(int lx, int ly, Boundary bc) {
  if (lx < 1 || ly < 1) throw std::invalid_argument("bad square dims");
  auto id = [&](int x, int y) { return wrap(x, lx) + lx * wrap(y, ly); };
  std::vector<std::pair<int, int>> bonds;
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x < lx; ++x) {
      if (bc == Boundary::periodic || x + 1 < lx) bonds.push_back({id(x, y), id(x + 1, y)});
      if (bc == Boundary::periodic || y + 1 < ly) bonds.push_back({id(x, y), id(x, y + 1)});
    }
  return make_graph(lx * ly, std::move(bonds));
}

// two-site unit cell: A in cell bonds to its own B, and to B of cells (x-1,y), (x,y-1)
Graph make_honeycomb(int lx, int ly, Boundary bc) {
  if (lx < 1 || ly < 1) throw std::invalid_argument("bad honeycomb dims");
  auto A = [&](int x, int y) { return 2 * (wrap(x, lx) + lx * wrap(y, ly)); };
  auto B = [&](int x, int y) { return A(x, y) + 1; };
  std::vector<std::pair<int, int>> bonds;
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x < lx; ++x) {
      bonds.push_back({A(x, y), B(x, y)});
      if (bc == Boundary::periodic || x + 1 < lx) bonds.push_back({B(x, y), A(x + 1, y)});
      if (bc == Boundary::periodic || y + 1 < ly) bonds.push_back({B(x, y), A(x, y + 1)});
    }
  return make_graph(2 * lx * ly, std::move(bonds));
}

Graph make_triangular(int lx, int ly, Boundary bc) {
  if (lx < 1 || ly < 1) throw std::invalid_argument("bad triangular dims");
  auto id = [&](int x, int y) { return wrap(x, lx) + lx * wrap(y, ly); };
  std::vector<std::pair<int, int>> bonds;
  for (int y = 0; y < ly; ++y)
    for (int x = 0; x < lx; ++x) {
      if (bc == Boundary::periodic || x + 1 < lx) bonds.push_back({id(x, y), id(x + 1, y)});
      if (bc == Boundary::periodic || y + 1 < ly) bonds.push_back({id(x, y), id(x, y + 1)});
      if (bc == Boundary::periodic || (x + 1 < lx && y + 1 < ly))
        bonds.push_back({id(x, y), id(x + 1, y + 1)});
    }
  return make_graph(lx * ly, std::move(bonds));
}

Graph make_cubic(int lx, int ly, int lz, Boundary bc) {
  if (lx < 1 || ly < 1 || lz < 1) throw std::invalid_argument("bad cubic dims");
  auto id = [&](int x, int y, int z) {
    return wrap(x, lx) + lx * (wrap(y, ly) + ly * wrap(z, lz));
  };
  std::vector<std::pair<int, int>> bonds;
  for (int z = 0; z < lz; ++z)
    for (int y = 0; y < ly; ++y)
      for (int x = 0; x < lx; ++x) {
        if (bc == Boundary::periodic || x + 1 < lx) bonds.push_back({id(x, y, z), id(x + 1, y, z)});
        if (bc == Boundary::periodic || y + 1 < ly) bonds.push_back({id(x, y, z), id(x, y + 1, z)});
        if (bc == Boundary::periodic || z + 1 < lz) bonds.push_back({id(x, y, z), id(x, y, z + 1)});
      }
  return make_graph(lx * ly * lz, std::move(bonds));
}

// two interpenetrating cubic sublattices; cell-center site bonds to the 8 surrounding corners
Graph make_bcc(int l, Boundary bc) {
  if (l < 1) throw std::invalid_argument("bad bcc dims");
  auto corner = [&](int x, int y, int z) {
    return 2 * (wrap(x, l) + l * (wrap(y, l) + l * wrap(z, l)));
  };
  auto center = [&](int x, int y, int z) { return corner(x, y, z) + 1; };
  std::vector<std::pair<int, int>> bonds;
  for (int z = 0; z < l; ++z)
    for (int y = 0; y < l; ++y)
      for (int x = 0; x < l; ++x)
        for (int dz = 0; dz <= 1; ++dz)
          for (int dy = 0; dy <= 1; ++dy)
            for (int dx = 0; dx <= 1; ++dx) {
              if (bc == Boundary::open && (x + dx >= l || y + dy >= l || z + dz >= l)) continue;
              bonds.push_back({center(x, y, z), corner(x + dx, y + dy, z + dz)});
            }
  return make_graph(2 * l * l * l, std::move(bonds));
}

int coordination(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::chain: return 2;
    case LatticeKind::honeycomb: return 3;
    case LatticeKind::square: return 4;
    case LatticeKind::triangular: return 6;
    case LatticeKind::cubic: return 6;
    case LatticeKind::bcc: return 8;
  }
  throw std::invalid_argument("unknown lattice kind");
}

const char* kind_name(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::chain: return "chain";
    case LatticeKind::honeycomb: return "honeycomb";
    case LatticeKind::square: return "square";
    case LatticeKind::triangular: return "triangular";
    case LatticeKind::cubic: return "cubic";
    case LatticeKind::bcc: return "bcc";
  }
  return "?";
}

std::optional<LatticeKind> parse_kind(const std::string& name) {
  for (LatticeKind k : {LatticeKind::chain, LatticeKind::honeycomb, LatticeKind::square,
                        LatticeKind::triangular, LatticeKind::cubic, LatticeKind::bcc})
    if (name == kind_name(k)) return k;
  return std::nullopt;
}

Graph make_lattice(LatticeKind kind, const std::vector<int>& dims, Boundary bc) {
  auto need = [&](size_t k) {
    if (dims.size() < k) throw std::invalid_argument("not enough lattice dims");
  };
  switch (kind) {
    case LatticeKind::chain:
      need(1);
      return make_chain(dims[0], bc);
    case LatticeKind::square:
      need(1);
      return make_square(dims[0], dims.size() > 1 ? dims[1] : dims[0], bc);
    case LatticeKind::honeycomb:
      need(1);
      return make_honeycomb(dims[0], dims.size() > 1 ? dims[1] : dims[0], bc);
    case LatticeKind::triangular:
      need(1);
      return make_triangular(dims[0], dims.size() > 1 ? dims[1] : dims[0], bc);
    case LatticeKind::cubic:
      need(1);
      return make_cubic(dims[0], dims.size() > 1 ? dims[1] : dims[0],
                        dims.size() > 2 ? dims[2] : dims[0], bc);
    case LatticeKind::bcc:
      need(1);
      return make_bcc(dims[0], bc);
  }
  throw std::invalid_argument("unknown lattice kind");
}

}  // namespace thermo
