#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "thermocluster/measurement.hpp"

using namespace thermo;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const double kPi = 3.14159265358979323846;

MeasureStep step(int site, double polar, double azimuthal) {
  return MeasureStep{site, polar, azimuthal, {}};
}

MeasureStep astep(int site, double polar, double azimuthal, std::vector<int> xor_of,
                  bool negate = false) {
  return MeasureStep{site, polar, azimuthal, AdaptiveRule{std::move(xor_of), negate}};
}

std::map<std::string, double> empirical(const std::vector<ShotRecord>& recs) {
  std::map<std::string, double> out;
  for (const auto& r : recs) {
    REQUIRE(!r.failed);
    std::string key;
    for (uint8_t b : r.outcomes) key += char('0' + b);
    out[key] += 1.0 / recs.size();
  }
  return out;
}

double tvd(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
  double d = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    d += std::abs(v - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) d += v;
  return d / 2.0;
}

}  // namespace

TEST_CASE("pattern validation") {
  Graph g = make_chain(3);
  CHECK_THROWS_AS(validate_pattern({{step(3, 0, 0)}}, g), std::invalid_argument);
  CHECK_THROWS_AS(validate_pattern({{step(0, 0, 0), step(0, 0, 0)}}, g), std::invalid_argument);
  CHECK_THROWS_AS(validate_pattern({{step(0, 0, 0), astep(1, 0, 0, {1})}}, g),
                  std::invalid_argument);
  CHECK_THROWS_AS(validate_pattern({{astep(0, 0, 0, {-1})}}, g), std::invalid_argument);
  CHECK_NOTHROW(validate_pattern({{step(0, 0, 0), astep(1, 0, 0, {0})}}, g));
}

TEST_CASE("measure_site projects and removes the qubit") {
  Rng rng(1);
  double s = 1.0 / std::sqrt(2.0);

  // |+> on qubit 0, |0> on qubit 1
  Vec state(4);
  state << s, s, 0, 0;
  int bit = measure_site(state, 0, kPi / 2.0, 0.0, rng);
  CHECK(bit == 0);
  REQUIRE(state.size() == 2);
  CHECK(std::abs(state[0]) == doctest::Approx(1.0));
  CHECK(std::abs(state[1]) == doctest::Approx(0.0));

  // |1> measured along z always gives bit 1
  Vec one(2);
  one << 0, 1;
  CHECK(measure_site(one, 0, 0.0, 0.0, rng) == 1);
  REQUIRE(one.size() == 1);

  Vec bad(2);
  bad << 1, 0;
  CHECK_THROWS_AS(measure_site(bad, 1, 0.0, 0.0, rng), std::invalid_argument);
}

TEST_CASE("tilted measurement of the polarized site") {
  // single site at theta = pi/2, zero temperature: the state is |0>
  Graph g = make_graph(1, {});
  ModelParams p{kInf, kPi / 2.0};
  for (double polar : {0.0, 0.6, 1.2, kPi / 2.0}) {
    auto dist = born_exact(g, p, {{step(0, polar, 0.4)}});
    double c = std::cos(polar / 2.0);
    CHECK(dist["0"] == doctest::Approx(c * c).epsilon(1e-12));
  }
}

TEST_CASE("exact outcome distribution normalizes") {
  Graph g = make_chain(3);
  ModelParams p{1.0, 0.3};
  MeasurementPattern pat{{step(0, kPi / 2.0, 0.1), astep(2, 0.7, -0.5, {0}),
                          astep(1, 1.1, 0.9, {0, 1}, true)}};
  auto dist = born_exact(g, p, pat);
  double tot = 0.0;
  for (const auto& [k, v] : dist) {
    REQUIRE(k.size() == 3);
    CHECK(v >= -1e-15);
    tot += v;
  }
  CHECK(std::abs(tot - 1.0) < 1e-12);

  // partial patterns cover the measured subset only
  auto partial = born_exact(g, p, {{step(0, 0.4, 0.0), step(2, 1.0, 0.2)}});
  double ptot = 0.0;
  for (const auto& [k, v] : partial) {
    REQUIRE(k.size() == 2);
    ptot += v;
  }
  CHECK(std::abs(ptot - 1.0) < 1e-12);

  CHECK_THROWS_AS(born_exact(g, p, pat, 2), std::invalid_argument);
}

TEST_CASE("forced adaptive flag equals a flipped azimuth") {
  Graph g = make_chain(2);
  ModelParams p{1.0, 0.4};
  // empty xor with negate: the flip always fires
  auto flipped = born_exact(g, p, {{astep(0, 1.1, 0.7, {}, true), step(1, 0.8, -0.2)}});
  auto direct = born_exact(g, p, {{step(0, 1.1, -0.7), step(1, 0.8, -0.2)}});
  REQUIRE(flipped.size() == direct.size());
  for (const auto& [k, v] : direct) CHECK(flipped[k] == doctest::Approx(v).epsilon(1e-12));
}

TEST_CASE("sampled outcomes follow the exact distribution") {
  struct Case {
    Graph g;
    MeasurementPattern pat;
  };
  std::vector<Case> cases;
  cases.push_back({make_chain(3),
                   {{step(0, kPi / 2.0, 0.0), astep(1, 0.9, 0.5, {0}), astep(2, 1.3, -0.8, {0, 1}, true)}}});
  cases.push_back({make_square(2, 2, Boundary::open),
                   {{step(0, kPi / 2.0, 0.3), step(1, 0.8, -0.4), astep(2, 1.9, 1.0, {0}),
                     astep(3, kPi / 2.0, 0.6, {1, 2}, true)}}});
  for (const auto& c : cases) {
    SamplerModel m = build_sampler(c.g, ModelParams{1.0, 0.3});
    auto exact = born_exact(c.g, ModelParams{1.0, 0.3}, c.pat);
    auto recs = run_pattern(m, c.pat, 50000, 2024);
    CHECK(tvd(exact, empirical(recs)) < 0.03);
  }
}

TEST_CASE("serial and parallel shot streams are identical") {
  Graph g = make_chain(4);
  SamplerModel m = build_sampler(g, ModelParams{1.5, 0.2});
  MeasurementPattern pat{{step(2, 0.6, 0.1), astep(0, 1.2, -0.3, {0}), step(3, kPi / 2.0, 0.0)}};
  auto a = run_pattern(m, pat, 200, 77, 24, Exec::serial);
  auto b = run_pattern(m, pat, 200, 77, 24, Exec::parallel);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].outcomes == b[i].outcomes);
    CHECK(a[i].failed == b[i].failed);
    CHECK(a[i].cost == b[i].cost);
    CHECK(a[i].cluster_sizes == b[i].cluster_sizes);
  }
}

TEST_CASE("statevector cap fails oversized clusters") {
  Graph g = make_chain(5);
  SamplerModel m = build_bernoulli_sampler(g, 1.0);
  MeasurementPattern pat{{step(0, kPi / 2.0, 0.0), step(1, kPi / 2.0, 0.0)}};
  auto recs = run_pattern(m, pat, 20, 3, 3);
  for (const auto& r : recs) {
    CHECK(r.failed);
    CHECK(r.overflow_size == 5);
    CHECK(r.cost == doctest::Approx(5.0 * 1024.0));  // n * 2^(2*5)
  }

  // a cap at the system size never fails
  auto ok = run_pattern(m, pat, 20, 3, 5);
  for (const auto& r : ok) CHECK(!r.failed);
}

TEST_CASE("pure stabilizer chain fixes the X parity") {
  // every bond entangled on a 5-chain: the stabilizer product over sites 0, 2, 4
  // is X0 X2 X4, so the x outcomes on those sites have even parity
  Graph g = make_chain(5);
  SamplerModel m = build_bernoulli_sampler(g, 1.0);
  MeasurementPattern pat{{step(0, kPi / 2.0, 0.0), step(1, kPi / 2.0, 0.0),
                          step(2, kPi / 2.0, 0.0), step(3, kPi / 2.0, 0.0),
                          step(4, kPi / 2.0, 0.0)}};
  auto recs = run_pattern(m, pat, 200, 11, 24, Exec::serial);
  for (const auto& r : recs) {
    REQUIRE(r.outcomes.size() == 5);
    CHECK(((r.outcomes[0] ^ r.outcomes[2] ^ r.outcomes[4]) & 1) == 0);
  }
}
