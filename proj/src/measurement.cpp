#include "thermocluster/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <omp.h>
#include <stdexcept>

namespace thermo {

void validate_pattern(const MeasurementPattern& p, const Graph& g) {
  std::vector<uint8_t> seen(g.n, 0);
  for (size_t s = 0; s < p.steps.size(); ++s) {
    const auto& st = p.steps[s];
    if (st.site < 0 || st.site >= g.n) throw std::invalid_argument("pattern: site out of range");
    if (seen[st.site]) throw std::invalid_argument("pattern: site measured twice");
    seen[st.site] = 1;
    if (st.adapt)
      for (int r : st.adapt->xor_of)
        if (r < 0 || r >= static_cast<int>(s))
          throw std::invalid_argument("pattern: adaptive rule references a non-earlier step");
  }
}

namespace {

inline long long insert_bit(long long r, int q, int bit) {
  long long low = r & ((1ll << q) - 1);
  long long high = r >> q;
  return low | (static_cast<long long>(bit) << q) | (high << (q + 1));
}

inline void basis_vectors(double polar, double azimuthal, Vec2& v0, Vec2& v1) {
  double c = std::cos(polar / 2.0), s = std::sin(polar / 2.0);
  cd ph = std::polar(1.0, azimuthal);
  v0 << c, s * ph;
  v1 << -s, c * ph;
}

bool adaptive_flag(const AdaptiveRule& rule, const std::vector<uint8_t>& outcomes) {
  bool f = rule.negate;
  for (int r : rule.xor_of) f ^= (outcomes[r] != 0);
  return f;
}

}  // namespace

int measure_site(Vec& state, int local_index, double polar, double azimuthal, Rng& rng) {
  int k = 0;
  while ((1ll << k) < state.size()) ++k;
  if (local_index < 0 || local_index >= k)
    throw std::invalid_argument("measure_site: qubit out of range");
  Vec2 v0, v1;
  basis_vectors(polar, azimuthal, v0, v1);
  long long half = 1ll << (k - 1);
  Vec b(half);
  for (long long r = 0; r < half; ++r)
    b[r] = std::conj(v0[0]) * state[insert_bit(r, local_index, 0)] +
           std::conj(v0[1]) * state[insert_bit(r, local_index, 1)];
  double p0 = b.squaredNorm();
  int bit = rng.uniform() < p0 ? 0 : 1;
  if (bit == 1) {
    for (long long r = 0; r < half; ++r)
      b[r] = std::conj(v1[0]) * state[insert_bit(r, local_index, 0)] +
             std::conj(v1[1]) * state[insert_bit(r, local_index, 1)];
  }
  double nrm = b.norm();
  if (nrm <= 0.0) {
    // measured an exactly impossible branch; keep the other one
    bit = 1 - bit;
    for (long long r = 0; r < half; ++r) {
      const Vec2& v = bit == 0 ? v0 : v1;
      b[r] = std::conj(v[0]) * state[insert_bit(r, local_index, 0)] +
             std::conj(v[1]) * state[insert_bit(r, local_index, 1)];
    }
    nrm = b.norm();
  }
  state = b / nrm;
  return bit;
}

namespace {

struct ClusterInstance {
  std::vector<int> live;  // global site ids, ascending; position = local qubit index
  Vec state;
};

// realized pure state of one cluster for a sampled configuration
ClusterInstance realize_cluster(const SamplerModel& m, const std::vector<int>& config,
                                const ClusterPartition& cp, int comp) {
  ClusterInstance ci;
  for (int s = 0; s < m.g.n; ++s)
    if (cp.comp[s] == comp) ci.live.push_back(s);
  int k = static_cast<int>(ci.live.size());
  auto local = [&](int site) {
    return static_cast<int>(std::lower_bound(ci.live.begin(), ci.live.end(), site) -
                            ci.live.begin());
  };
  long long dim = 1ll << k;
  ci.state = Vec::Ones(dim);
  for (size_t b = 0; b < m.g.bonds.size(); ++b) {
    auto [i, j] = m.g.bonds[b];
    bool ini = cp.comp[i] == comp, inj = cp.comp[j] == comp;
    if (!ini && !inj) continue;
    const BondMember& mem = m.bond_ens(static_cast<int>(b)).members[config[b]];
    if (mem.entangled) {
      int li = local(i), lj = local(j);
      for (long long z = 0; z < dim; ++z)
        ci.state[z] *= mem.psi[((z >> li) & 1) + 2 * ((z >> lj) & 1)];
    } else {
      if (ini) {
        int li = local(i);
        for (long long z = 0; z < dim; ++z) ci.state[z] *= mem.a[(z >> li) & 1];
      }
      if (inj) {
        int lj = local(j);
        for (long long z = 0; z < dim; ++z) ci.state[z] *= mem.b[(z >> lj) & 1];
      }
    }
  }
  double nrm = ci.state.norm();
  if (nrm <= 0.0) throw std::runtime_error("realize_cluster: zero norm");
  ci.state /= nrm;
  return ci;
}

ShotRecord run_one_shot(const SamplerModel& m, const MeasurementPattern& p, uint64_t seed,
                        int cap_statevector, SamplerScratch& ws, std::vector<int>& config) {
  Rng rng(seed);
  sample_configuration(m, rng, ws, config);
  ClusterPartition cp = entangled_clusters(m, config);
  ShotRecord rec;
  rec.cluster_sizes = cp.sizes;
  rec.cost = m.g.n * std::pow(2.0, 2.0 * cp.largest);
  for (const auto& st : p.steps) {
    if (cp.sizes[cp.comp[st.site]] > cap_statevector) {
      rec.failed = true;
      rec.overflow_size = std::max(rec.overflow_size, cp.sizes[cp.comp[st.site]]);
    }
  }
  if (rec.failed) return rec;
  std::map<int, ClusterInstance> instances;
  rec.outcomes.reserve(p.steps.size());
  for (const auto& st : p.steps) {
    int comp = cp.comp[st.site];
    auto it = instances.find(comp);
    if (it == instances.end())
      it = instances.emplace(comp, realize_cluster(m, config, cp, comp)).first;
    ClusterInstance& ci = it->second;
    auto pos = std::find(ci.live.begin(), ci.live.end(), st.site);
    int local = static_cast<int>(pos - ci.live.begin());
    double az = st.azimuthal;
    if (st.adapt && adaptive_flag(*st.adapt, rec.outcomes)) az = -az;
    int bit = measure_site(ci.state, local, st.polar, az, rng);
    rec.outcomes.push_back(static_cast<uint8_t>(bit));
    ci.live.erase(pos);
  }
  return rec;
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

std::vector<ShotRecord> run_pattern(const SamplerModel& m, const MeasurementPattern& p, int shots,
                                    uint64_t seed, int cap_statevector, Exec exec) {
  if (shots < 1) throw std::invalid_argument("run_pattern: shots must be >= 1");
  validate_pattern(p, m.g);
  std::vector<ShotRecord> out(shots);
  if (exec == Exec::parallel) {
#pragma omp parallel num_threads(thread_budget())
    {
      SamplerScratch ws;
      ws.reset(m);
      std::vector<int> config;
#pragma omp for schedule(static)
      for (int k = 0; k < shots; ++k)
        out[k] = run_one_shot(m, p, shot_seed(seed, k), cap_statevector, ws, config);
    }
  } else {
    SamplerScratch ws;
    ws.reset(m);
    std::vector<int> config;
    for (int k = 0; k < shots; ++k)
      out[k] = run_one_shot(m, p, shot_seed(seed, k), cap_statevector, ws, config);
  }
  return out;
}

namespace {

// contract <v| on qubit q of rho, shrinking the register by one
Mat project_out(const Mat& rho, int q, const Vec2& v) {
  long long half = rho.rows() / 2;
  Mat out(half, half);
  for (long long r = 0; r < half; ++r)
    for (long long c = 0; c < half; ++c) {
      cd acc = 0.0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          acc += std::conj(v[x]) * v[y] * rho(insert_bit(r, q, x), insert_bit(c, q, y));
      out(r, c) = acc;
    }
  return out;
}

void born_rec(const Mat& rho, double p_acc, const MeasurementPattern& p, size_t step,
              std::vector<uint8_t>& prefix, std::vector<int>& live,
              std::map<std::string, double>& out) {
  if (step == p.steps.size()) {
    std::string key(prefix.begin(), prefix.end());
    for (auto& ch : key) ch += '0';
    out[key] += p_acc;
    return;
  }
  const auto& st = p.steps[step];
  auto pos = std::find(live.begin(), live.end(), st.site);
  int q = static_cast<int>(pos - live.begin());
  double az = st.azimuthal;
  if (st.adapt && adaptive_flag(*st.adapt, prefix)) az = -az;
  Vec2 v0, v1;
  basis_vectors(st.polar, az, v0, v1);
  int removed = *pos;
  live.erase(pos);
  for (int bit = 0; bit < 2; ++bit) {
    Mat sub = project_out(rho, q, bit == 0 ? v0 : v1);
    double pr = sub.trace().real();
    if (pr > 1e-15) {
      prefix.push_back(static_cast<uint8_t>(bit));
      born_rec(sub / pr, p_acc * pr, p, step + 1, prefix, live, out);
      prefix.pop_back();
    }
  }
  live.insert(std::find_if(live.begin(), live.end(), [&](int s) { return s > removed; }), removed);
}

}  // namespace

std::map<std::string, double> born_exact(const Graph& g, ModelParams params,
                                         const MeasurementPattern& p, int cap_oracle) {
  if (g.n > cap_oracle) throw std::invalid_argument("born_exact: graph exceeds oracle cap");
  validate_pattern(p, g);
  Mat rho = exact_thermal_state(g, params);
  std::map<std::string, double> out;
  std::vector<uint8_t> prefix;
  std::vector<int> live(g.n);
  for (int s = 0; s < g.n; ++s) live[s] = s;
  born_rec(rho, 1.0, p, 0, prefix, live, out);
  return out;
}

}  // namespace thermo
