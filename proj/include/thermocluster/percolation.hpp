#pragma once
#include <cstdint>
#include <vector>

#include "thermocluster/sampler.hpp"

namespace thermo {

enum class Exec { serial, parallel };

struct UnionFind {
  std::vector<int> parent, size;
  explicit UnionFind(int n);
  int find(int x);
  void unite(int a, int b);
};

struct ClusterPartition {
  std::vector<int> comp;    // component id per site, contiguous from 0
  std::vector<int> sizes;   // per component
  int largest = 0;
};

ClusterPartition entangled_clusters(const SamplerModel& m, const std::vector<int>& config);

// configured percolation thresholds
double threshold_bond(LatticeKind kind);
double threshold_site(LatticeKind kind);
bool is_simulable(double pe, LatticeKind kind);

struct ShotClusterRecord {
  int largest = 0;
  int n_clusters = 0;
  double chi = 0.0;        // sum of size^2 / N for this shot
  double cost_bound = 0.0; // N * 2^(2 * largest)
};

struct ClusterStats {
  double mean_cluster_size = 0.0;  // chi averaged over shots
  double se_mean_cluster_size = 0.0;
  double mean_largest = 0.0;
  int shots = 0;
  std::vector<ShotClusterRecord> records;
};

ClusterStats gather_stats(const SamplerModel& m, int shots, uint64_t seed,
                          Exec exec = Exec::parallel);

struct ScalingFit {
  double slope = 0.0, intercept = 0.0;
  double resid_log = 0.0, resid_linear = 0.0;
  bool log_preferred = false;
  std::vector<double> mean_largest;  // per input size
};

// regress mean largest cluster against log2(N) and against N at bond density pe
ScalingFit log_scaling_check(LatticeKind kind, double pe, const std::vector<int>& sizes,
                             int shots, uint64_t seed, Exec exec = Exec::parallel);

}  // namespace thermo
