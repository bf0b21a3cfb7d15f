#pragma once
#include <array>
#include <map>
#include <string>
#include <vector>

#include "thermocluster/decomposition.hpp"
#include "thermocluster/rng.hpp"

namespace thermo {

// graph plus one decomposed bond ensemble per bond (shared per degree pair);
// bonds are visited in lexicographic (min site, max site) order everywhere
struct SamplerModel {
  Graph g;
  ModelParams params;
  std::vector<int> ens_of_bond;
  std::vector<BondEnsemble> ensembles;
  const BondEnsemble& bond_ens(int b) const { return ensembles[ens_of_bond[b]]; }
};

SamplerModel build_sampler(const Graph& g, ModelParams p);
// every bond entangled independently with probability pe, for percolation studies
SamplerModel build_bernoulli_sampler(const Graph& g, double pe);

// per-thread workspace so shot loops stay allocation-free
struct SamplerScratch {
  std::vector<std::array<std::array<double, 2>, 2>> slot;  // [bond][end][bit]
  std::vector<uint8_t> assigned;
  std::vector<double> lik;
  void reset(const SamplerModel& m);
};

// draw one member index per bond from the exact posterior chain
void sample_configuration(const SamplerModel& m, Rng& rng, SamplerScratch& ws,
                          std::vector<int>& config);

// full joint distribution over member configurations (small systems only)
std::map<std::vector<int>, double> exact_configuration_dist(const SamplerModel& m);

// statevector of the realized pure state for one configuration (index = physical bits)
Vec realize_amplitudes(const SamplerModel& m, const std::vector<int>& config);

// enumeration-weighted mixture of realized states
Mat reconstruct_mixture(const SamplerModel& m);

std::string bond_mask(const SamplerModel& m, const std::vector<int>& config);

}  // namespace thermo
