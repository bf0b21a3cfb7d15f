#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "thermocluster/percolation.hpp"

using namespace thermo;

TEST_CASE("union-find merges components") {
  UnionFind uf(5);
  uf.unite(0, 1);
  uf.unite(3, 4);
  CHECK(uf.find(0) == uf.find(1));
  CHECK(uf.find(3) == uf.find(4));
  CHECK(uf.find(0) != uf.find(3));
  uf.unite(1, 3);
  CHECK(uf.find(0) == uf.find(4));
}

TEST_CASE("entangled bonds define the clusters") {
  SamplerModel m = build_bernoulli_sampler(make_chain(4), 0.5);
  // members: 0 entangled, 1 and 2 product
  ClusterPartition both_ends = entangled_clusters(m, {0, 1, 0});
  REQUIRE(both_ends.sizes.size() == 2);
  CHECK(both_ends.largest == 2);
  CHECK(both_ends.comp[0] == both_ends.comp[1]);
  CHECK(both_ends.comp[2] == both_ends.comp[3]);
  CHECK(both_ends.comp[0] != both_ends.comp[2]);

  ClusterPartition none = entangled_clusters(m, {1, 2, 1});
  CHECK(none.sizes.size() == 4);
  CHECK(none.largest == 1);

  ClusterPartition all = entangled_clusters(m, {0, 0, 0});
  CHECK(all.sizes.size() == 1);
  CHECK(all.largest == 4);
}

TEST_CASE("shot statistics at the deterministic extremes") {
  Graph g = make_chain(3);

  ClusterStats full = gather_stats(build_bernoulli_sampler(g, 1.0), 20, 9);
  CHECK(full.shots == 20);
  CHECK(full.mean_largest == doctest::Approx(3.0));
  CHECK(full.mean_cluster_size == doctest::Approx(3.0));  // 3^2 / 3
  CHECK(full.se_mean_cluster_size == doctest::Approx(0.0));
  for (const auto& r : full.records) {
    CHECK(r.n_clusters == 1);
    CHECK(r.cost_bound == doctest::Approx(3.0 * 64.0));  // n * 2^(2*3)
  }

  ClusterStats empty = gather_stats(build_bernoulli_sampler(g, 0.0), 20, 9);
  CHECK(empty.mean_largest == doctest::Approx(1.0));
  CHECK(empty.mean_cluster_size == doctest::Approx(1.0));
  for (const auto& r : empty.records) CHECK(r.n_clusters == 3);
}

TEST_CASE("chi averages the squared sizes") {
  SamplerModel m = build_bernoulli_sampler(make_chain(4), 0.5);
  ClusterPartition p = entangled_clusters(m, {0, 1, 0});
  double chi = 0.0;
  for (int s : p.sizes) chi += double(s) * s;
  chi /= m.g.n;
  CHECK(chi == doctest::Approx(2.0));
}

TEST_CASE("serial and parallel runs are identical") {
  SamplerModel m = build_bernoulli_sampler(make_square(8, 8), 0.4);
  ClusterStats a = gather_stats(m, 200, 31, Exec::serial);
  ClusterStats b = gather_stats(m, 200, 31, Exec::parallel);
  REQUIRE(a.records.size() == b.records.size());
  for (size_t i = 0; i < a.records.size(); ++i) {
    CHECK(a.records[i].largest == b.records[i].largest);
    CHECK(a.records[i].n_clusters == b.records[i].n_clusters);
    CHECK(a.records[i].chi == b.records[i].chi);
    CHECK(a.records[i].cost_bound == b.records[i].cost_bound);
  }
  CHECK(a.mean_cluster_size == b.mean_cluster_size);
  CHECK(a.mean_largest == b.mean_largest);
}

TEST_CASE("thermal sampler feeds the same statistics pipeline") {
  SamplerModel m = build_sampler(make_square(4, 4), ModelParams{2.0, 0.2});
  ClusterStats st = gather_stats(m, 100, 7);
  CHECK(st.records.size() == 100);
  for (const auto& r : st.records) {
    CHECK(r.largest >= 1);
    CHECK(r.largest <= 16);
    CHECK(r.n_clusters >= 1);
  }
}

TEST_CASE("configured percolation thresholds") {
  CHECK(threshold_bond(LatticeKind::square) == doctest::Approx(0.5));
  CHECK(threshold_bond(LatticeKind::honeycomb) ==
        doctest::Approx(1.0 - 2.0 * std::sin(M_PI / 18.0)));
  CHECK(threshold_bond(LatticeKind::triangular) == doctest::Approx(2.0 * std::sin(M_PI / 18.0)));
  CHECK(threshold_bond(LatticeKind::cubic) == doctest::Approx(0.2488));
  CHECK(threshold_bond(LatticeKind::bcc) == doctest::Approx(0.1803));

  CHECK(threshold_site(LatticeKind::square) == doctest::Approx(0.592746));
  CHECK(threshold_site(LatticeKind::honeycomb) == doctest::Approx(0.6962));
  CHECK(threshold_site(LatticeKind::triangular) == doctest::Approx(0.5));
  CHECK(threshold_site(LatticeKind::cubic) == doctest::Approx(0.3116));
  CHECK(threshold_site(LatticeKind::bcc) == doctest::Approx(0.246));

  CHECK_THROWS_AS(threshold_bond(LatticeKind::chain), std::invalid_argument);
  CHECK_THROWS_AS(threshold_site(LatticeKind::chain), std::invalid_argument);
}

TEST_CASE("simulability cutoff is strict") {
  CHECK(is_simulable(0.49, LatticeKind::square));
  CHECK(!is_simulable(0.5, LatticeKind::square));
  CHECK(!is_simulable(0.51, LatticeKind::square));
  CHECK_THROWS_AS(is_simulable(-0.1, LatticeKind::square), std::invalid_argument);
  CHECK_THROWS_AS(is_simulable(1.1, LatticeKind::square), std::invalid_argument);
}

TEST_CASE("subcritical clusters stay small") {
  SamplerModel m = build_bernoulli_sampler(make_square(64, 64), 0.35);
  ClusterStats st = gather_stats(m, 10000, 12345);
  int worst = 0;
  for (const auto& r : st.records) worst = std::max(worst, r.largest);
  CHECK(worst < 1024);
  CHECK(st.mean_largest < 12.0 * std::log2(4096.0));
}

TEST_CASE("largest cluster grows with log system size below threshold") {
  ScalingFit fit = log_scaling_check(LatticeKind::square, 0.35, {256, 1024, 4096}, 500, 99);
  REQUIRE(fit.mean_largest.size() == 3);
  CHECK(fit.log_preferred);
  CHECK(fit.slope > 0.0);
  CHECK(fit.resid_log < fit.resid_linear);

  CHECK_THROWS_AS(log_scaling_check(LatticeKind::square, 0.6, {256, 1024, 4096}, 10, 1),
                  std::invalid_argument);
}
