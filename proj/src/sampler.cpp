#include "thermocluster/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace thermo {

SamplerModel build_sampler(const Graph& g, ModelParams p) {
  SamplerModel m;
  m.g = g;
  m.params = p;
  std::map<std::pair<int, int>, int> seen;
  for (auto [i, j] : g.bonds) {
    std::pair<int, int> key{g.deg[i], g.deg[j]};
    auto it = seen.find(key);
    if (it == seen.end()) {
      it = seen.emplace(key, static_cast<int>(m.ensembles.size())).first;
      m.ensembles.push_back(build_bond_ensemble(p.beta, p.theta, key.first, key.second));
    }
    m.ens_of_bond.push_back(it->second);
  }
  return m;
}

SamplerModel build_bernoulli_sampler(const Graph& g, double pe) {
  SamplerModel m;
  m.g = g;
  m.params = {0.0, 0.0};
  m.ensembles.push_back(bernoulli_bond_ensemble(pe));
  m.ens_of_bond.assign(g.bonds.size(), 0);
  return m;
}

void SamplerScratch::reset(const SamplerModel& m) {
  slot.resize(m.g.bonds.size());
  assigned.assign(m.g.bonds.size(), 0);
  size_t maxmem = 1;
  for (const auto& e : m.ensembles) maxmem = std::max(maxmem, e.members.size());
  lik.resize(maxmem);
}

namespace {

// product of diagonal context factors at `site`, excluding bond `self`
inline void context_product(const SamplerModel& m, const SamplerScratch& ws, int site, int self,
                            double out[2]) {
  out[0] = out[1] = 1.0;
  for (auto [b, end] : m.g.site_bonds[site]) {
    if (b == self) continue;
    if (ws.assigned[b]) {
      out[0] *= ws.slot[b][end][0];
      out[1] *= ws.slot[b][end][1];
    } else {
      const BondEnsemble& e = m.bond_ens(b);
      const auto& r0 = end == 0 ? e.rho0_low : e.rho0_high;
      out[0] *= r0[0];
      out[1] *= r0[1];
    }
  }
}

inline void assign_member(SamplerScratch& ws, int b, const BondMember& mem) {
  ws.slot[b][0][0] = mem.row[0];
  ws.slot[b][0][1] = mem.row[1];
  ws.slot[b][1][0] = mem.col[0];
  ws.slot[b][1][1] = mem.col[1];
  ws.assigned[b] = 1;
}

}  // namespace

void sample_configuration(const SamplerModel& m, Rng& rng, SamplerScratch& ws,
                          std::vector<int>& config) {
  int nb = static_cast<int>(m.g.bonds.size());
  config.resize(nb);
  std::fill(ws.assigned.begin(), ws.assigned.end(), 0);
  for (int b = 0; b < nb; ++b) {
    auto [i, j] = m.g.bonds[b];
    double pi[2], pj[2];
    context_product(m, ws, i, b, pi);
    context_product(m, ws, j, b, pj);
    const BondEnsemble& e = m.bond_ens(b);
    int nm = static_cast<int>(e.members.size());
    for (int k = 0; k < nm; ++k) {
      const auto& d = e.members[k].diag;
      ws.lik[k] = e.members[k].prior *
                  (d[0][0] * pi[0] * pj[0] + d[0][1] * pi[0] * pj[1] +
                   d[1][0] * pi[1] * pj[0] + d[1][1] * pi[1] * pj[1]);
    }
    int mu = rng.choose(ws.lik.data(), nm);
    config[b] = mu;
    assign_member(ws, b, e.members[mu]);
  }
}

std::map<std::vector<int>, double> exact_configuration_dist(const SamplerModel& m) {
  int nb = static_cast<int>(m.g.bonds.size());
  if (m.g.n > 24) throw std::invalid_argument("exact_configuration_dist: too many sites");
  double total = 1.0;
  for (int b = 0; b < nb; ++b) {
    total *= static_cast<double>(m.bond_ens(b).members.size());
    if (total > 1e6) throw std::invalid_argument("exact_configuration_dist: too many configurations");
  }
  std::map<std::vector<int>, double> out;
  std::vector<int> config(nb, 0);
  double z = 0.0;
  while (true) {
    double prior = 1.0;
    for (int b = 0; b < nb; ++b) prior *= m.bond_ens(b).members[config[b]].prior;
    double s = 0.0;
    for (long long zb = 0; zb < (1ll << m.g.n); ++zb) {
      double t = 1.0;
      for (int b = 0; b < nb && t != 0.0; ++b) {
        auto [i, j] = m.g.bonds[b];
        t *= m.bond_ens(b).members[config[b]].diag[(zb >> i) & 1][(zb >> j) & 1];
      }
      s += t;
    }
    double p = prior * s;
    if (p > 0.0) out[config] = p;
    z += p;
    int b = 0;
    while (b < nb) {
      if (++config[b] < static_cast<int>(m.bond_ens(b).members.size())) break;
      config[b] = 0;
      ++b;
    }
    if (b == nb) break;
  }
  for (auto& [c, p] : out) p /= z;
  return out;
}

Vec realize_amplitudes(const SamplerModel& m, const std::vector<int>& config) {
  if (m.g.n > 24) throw std::invalid_argument("realize_amplitudes: too many sites");
  long long dim = 1ll << m.g.n;
  Vec amp = Vec::Ones(dim);
  for (size_t b = 0; b < m.g.bonds.size(); ++b) {
    auto [i, j] = m.g.bonds[b];
    const BondMember& mem = m.bond_ens(static_cast<int>(b)).members[config[b]];
    for (long long z = 0; z < dim; ++z) {
      int zi = (z >> i) & 1, zj = (z >> j) & 1;
      amp[z] *= mem.entangled ? mem.psi[zi + 2 * zj] : mem.a[zi] * mem.b[zj];
    }
  }
  double nrm = amp.norm();
  if (nrm <= 0.0) throw std::runtime_error("realize_amplitudes: zero norm");
  return amp / nrm;
}

Mat reconstruct_mixture(const SamplerModel& m) {
  long long dim = 1ll << m.g.n;
  Mat rho = Mat::Zero(dim, dim);
  for (const auto& [config, p] : exact_configuration_dist(m)) {
    Vec v = realize_amplitudes(m, config);
    rho += p * (v * v.adjoint());
  }
  return rho;
}

std::string bond_mask(const SamplerModel& m, const std::vector<int>& config) {
  std::string s(m.g.bonds.size(), '0');
  for (size_t b = 0; b < m.g.bonds.size(); ++b)
    if (m.bond_ens(static_cast<int>(b)).members[config[b]].entangled) s[b] = '1';
  return s;
}

}  // namespace thermo
