#include "thermocluster/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <omp.h>
#include <stdexcept>

namespace thermo {

UnionFind::UnionFind(int n) : parent(n), size(n, 1) {
  std::iota(parent.begin(), parent.end(), 0);
}

int UnionFind::find(int x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return;
  if (size[a] < size[b]) std::swap(a, b);
  parent[b] = a;
  size[a] += size[b];
}

ClusterPartition entangled_clusters(const SamplerModel& m, const std::vector<int>& config) {
  UnionFind uf(m.g.n);
  for (size_t b = 0; b < m.g.bonds.size(); ++b)
    if (m.bond_ens(static_cast<int>(b)).members[config[b]].entangled)
      uf.unite(m.g.bonds[b].first, m.g.bonds[b].second);
  ClusterPartition cp;
  cp.comp.assign(m.g.n, -1);
  for (int s = 0; s < m.g.n; ++s) {
    int r = uf.find(s);
    if (cp.comp[r] < 0) {
      cp.comp[r] = static_cast<int>(cp.sizes.size());
      cp.sizes.push_back(uf.size[r]);
    }
    cp.comp[s] = cp.comp[r];
  }
  for (int s : cp.sizes) cp.largest = std::max(cp.largest, s);
  return cp;
}

double threshold_bond(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::square: return 0.5;
    case LatticeKind::honeycomb: return 1.0 - 2.0 * std::sin(M_PI / 18.0);
    case LatticeKind::triangular: return 2.0 * std::sin(M_PI / 18.0);
    case LatticeKind::cubic: return 0.2488;
    case LatticeKind::bcc: return 0.1803;
    case LatticeKind::chain: break;
  }
  throw std::invalid_argument("no configured bond percolation threshold for this lattice");
}

double threshold_site(LatticeKind kind) {
  switch (kind) {
    case LatticeKind::square: return 0.592746;
    case LatticeKind::honeycomb: return 0.6962;
    case LatticeKind::triangular: return 0.5;
    case LatticeKind::cubic: return 0.3116;
    case LatticeKind::bcc: return 0.246;
    case LatticeKind::chain: break;
  }
  throw std::invalid_argument("no configured site percolation threshold for this lattice");
}

bool is_simulable(double pe, LatticeKind kind) {
  if (pe < 0.0 || pe > 1.0) throw std::invalid_argument("is_simulable: pe outside [0,1]");
  return pe < threshold_bond(kind);
}

namespace {

ShotClusterRecord shot_record(const SamplerModel& m, const std::vector<int>& config) {
  ClusterPartition cp = entangled_clusters(m, config);
  ShotClusterRecord r;
  r.largest = cp.largest;
  r.n_clusters = static_cast<int>(cp.sizes.size());
  double s2 = 0.0;
  for (int s : cp.sizes) s2 += static_cast<double>(s) * s;
  r.chi = s2 / m.g.n;
  r.cost_bound = m.g.n * std::pow(2.0, 2.0 * cp.largest);
  return r;
}

int thread_budget() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("THERMOCLUSTER_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

}  // namespace

ClusterStats gather_stats(const SamplerModel& m, int shots, uint64_t seed, Exec exec) {
  if (shots < 1) throw std::invalid_argument("gather_stats: shots must be >= 1");
  ClusterStats st;
  st.shots = shots;
  st.records.resize(shots);
  if (exec == Exec::parallel) {
#pragma omp parallel num_threads(thread_budget())
    {
      SamplerScratch ws;
      ws.reset(m);
      std::vector<int> config;
#pragma omp for schedule(static)
      for (int k = 0; k < shots; ++k) {
        Rng rng(shot_seed(seed, k));
        sample_configuration(m, rng, ws, config);
        st.records[k] = shot_record(m, config);
      }
    }
  } else {
    SamplerScratch ws;
    ws.reset(m);
    std::vector<int> config;
    for (int k = 0; k < shots; ++k) {
      Rng rng(shot_seed(seed, k));
      sample_configuration(m, rng, ws, config);
      st.records[k] = shot_record(m, config);
    }
  }
  double sum = 0.0, sum2 = 0.0, suml = 0.0;
  for (const auto& r : st.records) {
    sum += r.chi;
    sum2 += r.chi * r.chi;
    suml += r.largest;
  }
  st.mean_cluster_size = sum / shots;
  st.mean_largest = suml / shots;
  double var = shots > 1 ? (sum2 - sum * sum / shots) / (shots - 1) : 0.0;
  st.se_mean_cluster_size = std::sqrt(std::max(var, 0.0) / shots);
  return st;
}

ScalingFit log_scaling_check(LatticeKind kind, double pe, const std::vector<int>& sizes,
                             int shots, uint64_t seed, Exec exec) {
  if (sizes.size() < 3) throw std::invalid_argument("log_scaling_check: need at least 3 sizes");
  if (pe >= threshold_bond(kind)) throw std::invalid_argument("log_scaling_check: pe above threshold");
  ScalingFit fit;
  std::vector<double> xs_log, xs_lin;
  for (size_t i = 0; i < sizes.size(); ++i) {
    int n = sizes[i];
    int l = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    Graph g;
    switch (kind) {
      case LatticeKind::square: g = make_square(l, l, Boundary::periodic); break;
      case LatticeKind::triangular: g = make_triangular(l, l, Boundary::periodic); break;
      case LatticeKind::honeycomb: g = make_honeycomb(l, l / 2 > 0 ? l / 2 : 1, Boundary::periodic); break;
      default: throw std::invalid_argument("log_scaling_check: unsupported lattice kind");
    }
    SamplerModel m = build_bernoulli_sampler(g, pe);
    ClusterStats st = gather_stats(m, shots, seed + i, exec);
    fit.mean_largest.push_back(st.mean_largest);
    xs_log.push_back(std::log2(static_cast<double>(g.n)));
    xs_lin.push_back(static_cast<double>(g.n));
  }
  auto least_squares = [&](const std::vector<double>& x, double& slope, double& icept) {
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      sx += x[i];
      sy += fit.mean_largest[i];
      sxx += x[i] * x[i];
      sxy += x[i] * fit.mean_largest[i];
    }
    slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    icept = (sy - slope * sx) / n;
    double ss = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      double r = fit.mean_largest[i] - (slope * x[i] + icept);
      ss += r * r;
    }
    return ss;
  };
  double sl, ic;
  fit.resid_log = least_squares(xs_log, fit.slope, fit.intercept);
  fit.resid_linear = least_squares(xs_lin, sl, ic);
  fit.log_preferred = fit.resid_log < fit.resid_linear;
  return fit;
}

}  // namespace thermo
