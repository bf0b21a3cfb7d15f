#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thermocluster/percolation.hpp"

namespace thermo {

// feed-forward: xor of earlier outcomes (optionally negated); when true the
// azimuthal angle flips sign
struct AdaptiveRule {
  std::vector<int> xor_of;
  bool negate = false;
};

struct MeasureStep {
  int site = 0;
  double polar = 0.0;
  double azimuthal = 0.0;
  std::optional<AdaptiveRule> adapt;
};

struct MeasurementPattern {
  std::vector<MeasureStep> steps;
};

void validate_pattern(const MeasurementPattern& p, const Graph& g);

// projective measurement along (sin p cos a, sin p sin a, cos p); bit 0 is the
// +n outcome; the measured qubit is removed from the state
int measure_site(Vec& state, int local_index, double polar, double azimuthal, Rng& rng);

struct ShotRecord {
  std::vector<uint8_t> outcomes;
  std::vector<int> cluster_sizes;
  double cost = 0.0;  // N * 2^(2 * max cluster size)
  bool failed = false;
  int overflow_size = 0;
};

std::vector<ShotRecord> run_pattern(const SamplerModel& m, const MeasurementPattern& p, int shots,
                                    uint64_t seed, int cap_statevector = 24,
                                    Exec exec = Exec::parallel);

// exact adaptive outcome distribution, keyed by outcome bits in step order
std::map<std::string, double> born_exact(const Graph& g, ModelParams params,
                                         const MeasurementPattern& p, int cap_oracle = 12);

}  // namespace thermo
