#include "thermocluster/regions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "thermocluster/decomposition.hpp"
#include "thermocluster/percolation.hpp"
#include "thermocluster/rng.hpp"

namespace thermo {

FilterOutcome filter_map(ModelParams params) {
  if (params.theta < 0.0 || params.theta > M_PI / 2 + 1e-12)
    throw std::invalid_argument("filter_map: theta outside [0, pi/2]");
  double t = params.t();
  double ts = t * std::sin(params.theta);
  FilterOutcome fo;
  fo.cos2phi = ts;
  fo.p1 = 1.0 - ts;
  fo.p0 = ts;
  fo.g = std::sqrt((1.0 - ts) / (1.0 + ts));
  double denom = std::sqrt(1.0 - ts * ts);
  fo.t_prime = denom > 0.0 ? t * std::cos(params.theta) / denom : 0.0;
  fo.beta_prime = 2.0 * std::atanh(fo.t_prime);
  return fo;
}

DephasingP dephasing_p(ModelParams params) {
  double p = params.t() * std::sin(params.theta);
  return {p, p >= 0.5};
}

double tc_dephasing(double p_c) {
  if (!(p_c > 0.0 && p_c < 0.5)) throw std::invalid_argument("tc_dephasing: p_c outside (0, 1/2)");
  return 1.0 / std::log(1.0 / p_c - 1.0);
}

double tcrit_zero_field(LatticeKind kind) {
  int d = coordination(kind);
  double p_crit = threshold_bond(kind);
  double w_crit = -1.0 + std::sqrt(2.0 + 2.0 * p_crit);
  return 1.0 / (2.0 * std::atanh(std::pow(w_crit, d)));
}

namespace {

double pe_uniform(double beta, double theta, int d) {
  EndParams e = site_params(beta, theta, d);
  Mat4 bond = bond_operator(e, e);
  Vec4 psi = t0_bond_state(theta, d, d);
  return max_pe(bond, psi);
}

}  // namespace

double tcrit_general(double theta, LatticeKind kind) {
  if (theta < 0.0 || theta > M_PI / 2 + 1e-12)
    throw std::invalid_argument("tcrit_general: theta outside [0, pi/2]");
  if (theta >= M_PI / 2 - 1e-12) return 0.0;
  int d = coordination(kind);
  double thr = threshold_bond(kind);
  auto pe = [&](double kt) { return pe_uniform(1.0 / kt, theta, d); };
  double lo = 1e-3;
  if (pe(lo) <= thr) return 0.0;
  double hi = 1.0;
  while (pe(hi) > thr) {
    hi *= 2.0;
    if (hi > 260.0)
      throw std::runtime_error("tcrit_general: no crossing below kT=260 (p_e(lo)=" +
                               std::to_string(pe(lo)) + ", p_e(hi)=" + std::to_string(pe(hi)) +
                               ")");
  }
  while (hi - lo > 1e-4) {
    double mid = 0.5 * (lo + hi);
    (pe(mid) > thr ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

const char* region_name(Region r) {
  switch (r) {
    case Region::C: return "C";
    case Region::Q: return "Q";
    case Region::Qprime: return "Qprime";
    default: return "undetermined";
  }
}

RegionVerdict classify(double kt, double theta, LatticeKind kind, const RegionConfig& cfg) {
  if (kt < 0.0) throw std::invalid_argument("classify: kT must be >= 0");
  RegionVerdict v;
  v.kt = kt;
  v.theta = theta;
  double beta = kt > 0.0 ? 1.0 / kt : std::numeric_limits<double>::infinity();
  ModelParams mp{beta, theta};
  FilterOutcome fo = filter_map(mp);
  DephasingP dp = dephasing_p(mp);
  v.p_dephasing = dp.p;
  v.dephasing_beyond_range = dp.beyond_range;
  v.p1 = fo.p1;
  v.t_prime = fo.beta_prime > 0.0 ? 1.0 / fo.beta_prime : std::numeric_limits<double>::infinity();
  v.p_e = theta >= M_PI / 2 - 1e-12 ? 0.0 : pe_uniform(beta, theta, coordination(kind));
  double thr_site = cfg.p_c_site ? *cfg.p_c_site : threshold_site(kind);
  double tc = tc_dephasing(cfg.p_c);
  v.cond_c = v.p_e < threshold_bond(kind);
  v.cond_q = !dp.beyond_range && dp.p < cfg.p_c && v.t_prime < tc;
  v.cond_qprime = fo.p1 > thr_site && v.t_prime < tc;
  if (v.cond_q)
    v.label = Region::Q;
  else if (v.cond_qprime)
    v.label = Region::Qprime;
  else if (v.cond_c)
    v.label = Region::C;
  else
    v.label = Region::undetermined;
  return v;
}

namespace {

inline int bit(long long z, int i) { return static_cast<int>((z >> i) & 1); }

// sign of Z on all neighbours of site i, as a function of the basis index
inline double neighbour_sign(const Graph& g, int i, long long z) {
  double s = 1.0;
  for (int j : g.adj[i])
    if (bit(z, j)) s = -s;
  return s;
}

Mat reference_state(const Graph& g, const std::vector<uint8_t>& kept, double t_kept) {
  Mat2 m_kept = single_site_thermal(t_kept, 0.0);
  Mat2 zero = Mat2::Zero();
  zero(0, 0) = 1.0;
  std::vector<Mat2> facs(g.n);
  for (int i = 0; i < g.n; ++i) facs[i] = kept[i] ? m_kept : zero;
  Mat ref = nkron(facs);
  long long dim = ref.rows();
  Eigen::VectorXd sign = Eigen::VectorXd::Ones(dim);
  for (auto [i, j] : g.bonds)
    if (kept[i] && kept[j])
      for (long long z = 0; z < dim; ++z)
        if (bit(z, i) && bit(z, j)) sign[z] = -sign[z];
  for (long long r = 0; r < dim; ++r)
    for (long long c = 0; c < dim; ++c) ref(r, c) *= sign[r] * sign[c];
  return ref;
}

double stabilizer_expectation(const Graph& g, const Mat& rho, int i,
                              const std::vector<uint8_t>& kept) {
  long long dim = rho.rows();
  cd acc = 0.0;
  for (long long z = 0; z < dim; ++z) {
    double s = 1.0;
    for (int j : g.adj[i])
      if (kept[j] && bit(z, j)) s = -s;
    acc += s * rho(z, z ^ (1ll << i));
  }
  return acc.real();
}

}  // namespace

Mat flip_and_z_average(const Graph& g, const Mat& rho, const std::vector<uint8_t>& kept) {
  Mat out = rho;
  long long dim = rho.rows();
  for (int i = 0; i < g.n; ++i) {
    if (kept[i]) continue;
    Mat next(dim, dim);
    for (long long r = 0; r < dim; ++r) {
      double sr = neighbour_sign(g, i, r);
      for (long long c = 0; c < dim; ++c) {
        double sc = neighbour_sign(g, i, c);
        next(r, c) = 0.5 * (out(r, c) + sr * sc * out(r ^ (1ll << i), c ^ (1ll << i)));
      }
    }
    out = std::move(next);
  }
  return out;
}

FilterOracleRecord apply_filter_oracle(const Graph& g, ModelParams params, uint64_t seed,
                                       int shots, int cap_oracle) {
  if (g.n > cap_oracle) throw std::invalid_argument("apply_filter_oracle: graph exceeds cap");
  FilterOracleRecord rec;
  rec.map = filter_map(params);
  rec.t_filtered = rec.map.p1 * rec.map.t_prime;
  Mat rho = exact_thermal_state(g, params);
  long long dim = rho.rows();
  double m0v[2] = {std::sqrt(1.0 - rec.map.g * rec.map.g), 0.0};
  double m1v[2] = {rec.map.g, 1.0};
  Mat acc = Mat::Zero(dim, dim);
  long long npat = 1ll << g.n;
  rec.patterns.resize(npat);
  for (long long y = 0; y < npat; ++y) {
    FilterPatternRecord& pr = rec.patterns[y];
    pr.kept.resize(g.n);
    for (int i = 0; i < g.n; ++i) pr.kept[i] = static_cast<uint8_t>(bit(y, i));
    Eigen::VectorXd d(dim);
    for (long long z = 0; z < dim; ++z) {
      double v = 1.0;
      for (int i = 0; i < g.n; ++i) v *= (pr.kept[i] ? m1v : m0v)[bit(z, i)];
      d[z] = v;
    }
    Mat rho_y(dim, dim);
    for (long long r = 0; r < dim; ++r)
      for (long long c = 0; c < dim; ++c) rho_y(r, c) = d[r] * d[c] * rho(r, c);
    pr.prob = rho_y.trace().real();
    if (pr.prob <= 1e-14) {
      pr.prob = std::max(pr.prob, 0.0);
      pr.dist_reference = 0.0;
      pr.max_stabilizer_dev = 0.0;
      continue;
    }
    rho_y /= pr.prob;
    pr.dist_reference = trace_distance(rho_y, reference_state(g, pr.kept, rec.map.t_prime));
    pr.max_stabilizer_dev = 0.0;
    for (int i = 0; i < g.n; ++i)
      if (pr.kept[i])
        pr.max_stabilizer_dev =
            std::max(pr.max_stabilizer_dev,
                     std::abs(stabilizer_expectation(g, rho_y, i, pr.kept) - rec.map.t_prime));
    acc += pr.prob * flip_and_z_average(g, rho_y, pr.kept);
  }
  std::vector<uint8_t> all_kept(g.n, 1);
  rec.dist_construction = trace_distance(acc, reference_state(g, all_kept, rec.t_filtered));
  if (shots > 0) {
    rec.shots = shots;
    rec.freq0.assign(g.n, 0.0);
    Rng rng(seed);
    Eigen::VectorXd base(dim);
    for (long long z = 0; z < dim; ++z) base[z] = rho(z, z).real();
    Eigen::VectorXd w(dim);
    for (int s = 0; s < shots; ++s) {
      w = base;
      for (int i = 0; i < g.n; ++i) {
        double tot = 0.0, w0 = 0.0;
        for (long long z = 0; z < dim; ++z) {
          double m0 = m0v[bit(z, i)], m1 = m1v[bit(z, i)];
          w0 += w[z] * m0 * m0;
          tot += w[z] * (m0 * m0 + m1 * m1);
        }
        int out = rng.uniform() * tot < w0 ? 0 : 1;
        if (out == 0) rec.freq0[i] += 1.0;
        for (long long z = 0; z < dim; ++z) {
          double m = (out == 0 ? m0v : m1v)[bit(z, i)];
          w[z] *= m * m;
        }
      }
    }
    for (int i = 0; i < g.n; ++i) rec.freq0[i] /= shots;
  }
  return rec;
}

}  // namespace thermo
