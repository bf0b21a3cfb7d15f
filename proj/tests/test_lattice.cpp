#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <stdexcept>

#include "doctest.h"
#include "thermocluster/lattice.hpp"

using namespace thermo;

namespace {

bool degrees_all(const Graph& g, int d) {
  return std::all_of(g.deg.begin(), g.deg.end(), [d](int x) { return x == d; });
}

}  // namespace

TEST_CASE("make_graph canonicalizes and rejects bad input") {
  Graph g = make_graph(3, {{2, 0}, {0, 1}, {1, 0}});
  CHECK(g.n == 3);
  REQUIRE(g.bonds.size() == 2);  // duplicate collapsed
  CHECK(g.bonds[0] == std::pair<int, int>{0, 1});
  CHECK(g.bonds[1] == std::pair<int, int>{0, 2});
  CHECK(g.deg[0] == 2);
  CHECK(g.deg[1] == 1);

  CHECK_THROWS_AS(make_graph(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(2, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(make_graph(2, {{0, 2}}), std::invalid_argument);
}

TEST_CASE("site_bonds lists each incidence with the right end") {
  Graph g = make_chain(3);
  REQUIRE(g.site_bonds[1].size() == 2);
  for (auto [b, end] : g.site_bonds[1]) {
    int site = end == 0 ? g.bonds[b].first : g.bonds[b].second;
    CHECK(site == 1);
  }
}

TEST_CASE("chain bond counts") {
  CHECK(make_chain(5).bonds.size() == 4);
  CHECK(make_chain(5, Boundary::periodic).bonds.size() == 5);
  CHECK(make_chain(2, Boundary::periodic).bonds.size() == 1);
  CHECK(make_chain(1).bonds.empty());
}

TEST_CASE("star graph") {
  Graph g = make_star(4);
  CHECK(g.n == 5);
  CHECK(g.deg[0] == 4);
  for (int i = 1; i < 5; ++i) CHECK(g.deg[i] == 1);
}

TEST_CASE("square lattice") {
  Graph open3 = make_square(3, 3, Boundary::open);
  CHECK(open3.n == 9);
  CHECK(open3.bonds.size() == 12);

  Graph per3 = make_square(3, 3);
  CHECK(per3.bonds.size() == 18);
  CHECK(degrees_all(per3, 4));
}

TEST_CASE("honeycomb lattice") {
  Graph g = make_honeycomb(2, 2);
  CHECK(g.n == 8);
  CHECK(g.bonds.size() == 12);
  CHECK(degrees_all(g, 3));
}

TEST_CASE("triangular lattice") {
  Graph g = make_triangular(3, 3);
  CHECK(g.n == 9);
  CHECK(g.bonds.size() == 27);
  CHECK(degrees_all(g, 6));
}

TEST_CASE("cubic lattice") {
  Graph open2 = make_cubic(2, 2, 2, Boundary::open);
  CHECK(open2.n == 8);
  CHECK(open2.bonds.size() == 12);

  Graph per3 = make_cubic(3, 3, 3);
  CHECK(per3.n == 27);
  CHECK(per3.bonds.size() == 81);
  CHECK(degrees_all(per3, 6));
}

TEST_CASE("bcc lattice") {
  Graph g = make_bcc(2);
  CHECK(g.n == 16);
  CHECK(g.bonds.size() == 64);
  CHECK(degrees_all(g, 8));

  Graph open2 = make_bcc(2, Boundary::open);
  CHECK(open2.n == 16);
  // each center keeps all 8 corners at l=2 open only when fully interior; here
  // centers at the far face lose the wrapped corners
  CHECK(open2.bonds.size() < 64);
}

TEST_CASE("kind names round-trip") {
  for (LatticeKind k : {LatticeKind::chain, LatticeKind::honeycomb, LatticeKind::square,
                        LatticeKind::triangular, LatticeKind::cubic, LatticeKind::bcc}) {
    auto back = parse_kind(kind_name(k));
    REQUIRE(back.has_value());
    CHECK(*back == k);
  }
  CHECK(!parse_kind("kagome").has_value());
}

TEST_CASE("coordination numbers") {
  CHECK(coordination(LatticeKind::chain) == 2);
  CHECK(coordination(LatticeKind::honeycomb) == 3);
  CHECK(coordination(LatticeKind::square) == 4);
  CHECK(coordination(LatticeKind::triangular) == 6);
  CHECK(coordination(LatticeKind::cubic) == 6);
  CHECK(coordination(LatticeKind::bcc) == 8);
}

TEST_CASE("make_lattice fills missing extents") {
  Graph sq = make_lattice(LatticeKind::square, {4}, Boundary::periodic);
  CHECK(sq.n == 16);
  Graph cu = make_lattice(LatticeKind::cubic, {2}, Boundary::periodic);
  CHECK(cu.n == 8);
  Graph ch = make_lattice(LatticeKind::chain, {6}, Boundary::open);
  CHECK(ch.bonds.size() == 5);
}
