#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "thermocluster/lattice.hpp"
#include "thermocluster/linalg.hpp"
#include "thermocluster/thermal.hpp"

namespace thermo {

// Local filter at one site: M0 = diag(sqrt(1-g^2), 0), M1 = diag(g, 1) in the
// computational basis with g = tan(phi), cos(2phi) = tanh(beta/2) sin(theta).
// Outcome 1 keeps the site (its marginal sharpens to t_prime); outcome 0
// projects it to |0>.
struct FilterOutcome {
  double cos2phi;
  double p1;
  double beta_prime;
  double p0;
  double t_prime;  // tanh(beta_prime / 2)
  double g;        // tan(phi)
};

FilterOutcome filter_map(ModelParams params);

struct DephasingP {
  double p;
  bool beyond_range;  // p >= 1/2 exceeds the channel's validity range
};

DephasingP dephasing_p(ModelParams params);

// temperature below which a dephasing rate p_c is tolerable
double tc_dephasing(double p_c);

// closed-form critical temperature at theta = 0
double tcrit_zero_field(LatticeKind kind);

// bisection on kT of the entangled-bond weight against the bond percolation
// threshold; returns 0 when no temperature percolates (theta at or near pi/2)
double tcrit_general(double theta, LatticeKind kind);

struct RegionConfig {
  double p_c = 2.9e-2;                  // dephasing tolerance
  std::optional<double> p_c_site = {};  // override for the site threshold
};

enum class Region { C, Q, Qprime, undetermined };

const char* region_name(Region r);

struct RegionVerdict {
  double kt = 0.0, theta = 0.0;
  Region label = Region::undetermined;
  bool cond_c = false, cond_q = false, cond_qprime = false;
  // evidence
  double p_e = 0.0;
  double p_dephasing = 0.0;
  bool dephasing_beyond_range = false;
  double t_prime = 0.0;  // temperature kT' = 1 / beta_prime
  double p1 = 0.0;
};

RegionVerdict classify(double kt, double theta, LatticeKind kind, const RegionConfig& cfg = {});

// one measurement pattern of the exact filter, all sites measured
struct FilterPatternRecord {
  std::vector<uint8_t> kept;   // 1 = outcome '1'
  double prob;
  double dist_reference;       // trace distance to the kept-subgraph reference
  double max_stabilizer_dev;   // max over kept sites of |<K_i^sub> - t_prime|
};

struct FilterOracleRecord {
  FilterOutcome map;
  std::vector<FilterPatternRecord> patterns;  // all 2^N outcome patterns
  double t_filtered;                          // p1 * t_prime
  double dist_construction;  // trace distance of the flip-and-Z average to the
                             // theta=0 thermal state at t_filtered
  std::vector<double> freq0;  // sampled per-site '0' frequency (shots > 0)
  int shots = 0;
};

FilterOracleRecord apply_filter_oracle(const Graph& g, ModelParams params, uint64_t seed,
                                       int shots = 0, int cap_oracle = 10);

// flip each '0' site with probability 1/2 together with a Z on its neighbours,
// averaged over the coin
Mat flip_and_z_average(const Graph& g, const Mat& rho, const std::vector<uint8_t>& kept);

}  // namespace thermo
