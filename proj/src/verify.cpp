#include "thermocluster/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "thermocluster/decomposition.hpp"
#include "thermocluster/measurement.hpp"
#include "thermocluster/regions.hpp"
#include "thermocluster/sampler.hpp"

namespace thermo {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string devstr(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << std::scientific << "worst deviation " << v;
  return ss.str();
}

CheckResult run_check(const std::string& name,
                      const std::function<std::pair<bool, std::string>()>& fn) {
  try {
    auto [ok, msg] = fn();
    return {name, ok, msg};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

double gauss(Rng& rng) {
  double u1 = rng.uniform(), u2 = rng.uniform();
  u1 = std::max(u1, 1e-300);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Mat random_density(int qubits, Rng& rng) {
  long long dim = 1ll << qubits;
  Mat g(dim, dim);
  for (long long r = 0; r < dim; ++r)
    for (long long c = 0; c < dim; ++c) g(r, c) = cd(gauss(rng), gauss(rng));
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

// site projection onto the physical qubit: keeps the all-equal virtual indices
Mat site_projection(int d) {
  Mat a = Mat::Zero(2, 1ll << d);
  a(0, 0) = 1.0;
  a(1, (1ll << d) - 1) = 1.0;
  return a;
}

Mat2 ptrace_low(const Mat4& m) {
  Mat2 out;
  for (int h = 0; h < 2; ++h)
    for (int hp = 0; hp < 2; ++hp) out(h, hp) = m(0 + 2 * h, 0 + 2 * hp) + m(1 + 2 * h, 1 + 2 * hp);
  return out;
}

Mat2 ptrace_high(const Mat4& m) {
  Mat2 out;
  for (int l = 0; l < 2; ++l)
    for (int lp = 0; lp < 2; ++lp) out(l, lp) = m(l, lp) + m(l + 2, lp + 2);
  return out;
}

double factorization_two_site(Rng& rng) {
  double beta = 0.2 + 4.8 * rng.uniform();
  double theta = 1.4 * rng.uniform();
  int di = 1 + static_cast<int>(rng.uniform() * 4);
  int dj = 1 + static_cast<int>(rng.uniform() * 4);
  Mat4 bond = bond_operator(site_params(beta, theta, di), site_params(beta, theta, dj));
  Mat ctx_i = random_density(di - 1, rng);
  Mat ctx_j = random_density(dj - 1, rng);
  Mat rho_in = kron_he(ctx_j, kron_he(Mat(bond), ctx_i));
  Mat a_tot = kron_he(site_projection(dj), site_projection(di));
  double p_joint = (a_tot * rho_in * a_tot.adjoint()).trace().real();
  Mat2 r0i = ptrace_high(bond), r0j = ptrace_low(bond);
  Mat ai = site_projection(di), aj = site_projection(dj);
  double pi = (ai * kron_he(Mat(r0i), ctx_i) * ai.adjoint()).trace().real();
  double pj = (aj * kron_he(ctx_j, Mat(r0j)) * aj.adjoint()).trace().real();
  return std::abs(p_joint - pi * pj);
}

double factorization_three_site(Rng& rng) {
  double beta = 0.2 + 4.8 * rng.uniform();
  double theta = 1.4 * rng.uniform();
  int di = 1 + static_cast<int>(rng.uniform() * 3);
  int dj = 2 + static_cast<int>(rng.uniform() * 2);
  int dk = 1 + static_cast<int>(rng.uniform() * 3);
  EndParams ei = site_params(beta, theta, di);
  EndParams ej = site_params(beta, theta, dj);
  EndParams ek = site_params(beta, theta, dk);
  Mat4 bond_ij = bond_operator(ei, ej);
  Mat4 bond_jk = bond_operator(ej, ek);
  Mat ctx_i = random_density(di - 1, rng);
  Mat ctx_j = random_density(dj - 2, rng);
  Mat ctx_k = random_density(dk - 1, rng);
  // register, low to high: ctx_i, i.j, j.i, ctx_j, j.k, k.j, ctx_k
  Mat rho_in = kron_he(Mat(bond_ij), ctx_i);
  rho_in = kron_he(ctx_j, rho_in);
  rho_in = kron_he(Mat(bond_jk), rho_in);
  rho_in = kron_he(ctx_k, rho_in);
  Mat a_tot = kron_he(site_projection(dk), kron_he(site_projection(dj), site_projection(di)));
  double p_joint = (a_tot * rho_in * a_tot.adjoint()).trace().real();
  Mat ai = site_projection(di), aj = site_projection(dj), ak = site_projection(dk);
  double pi =
      (ai * kron_he(Mat(ptrace_high(bond_ij)), ctx_i) * ai.adjoint()).trace().real();
  Mat rho_j = kron_he(Mat(ptrace_high(bond_jk)), kron_he(ctx_j, Mat(ptrace_low(bond_ij))));
  double pj = (aj * rho_j * aj.adjoint()).trace().real();
  double pk = (ak * kron_he(ctx_k, Mat(ptrace_low(bond_jk))) * ak.adjoint()).trace().real();
  return std::abs(p_joint - pi * pj * pk);
}

// conditional-chain distribution over member configurations, rebuilt from the
// stored member data (independent of the sampler's incremental bookkeeping)
std::map<std::vector<int>, double> chain_dist(const SamplerModel& m,
                                              const std::vector<int>& order) {
  size_t nb = m.g.bonds.size();
  std::map<std::vector<int>, double> out;
  std::vector<int> config(nb, -1);
  std::function<void(size_t, double)> rec = [&](size_t pos, double prob) {
    if (pos == order.size()) {
      out[config] += prob;
      return;
    }
    int b = order[pos];
    auto [si, sj] = m.g.bonds[b];
    auto ctx = [&](int site, int bit) {
      double v = 1.0;
      for (auto [b2, end] : m.g.site_bonds[site]) {
        if (b2 == b) continue;
        const BondEnsemble& e2 = m.bond_ens(b2);
        if (config[b2] >= 0) {
          const BondMember& mem = e2.members[config[b2]];
          v *= end == 0 ? mem.row[bit] : mem.col[bit];
        } else {
          v *= end == 0 ? e2.rho0_low[bit] : e2.rho0_high[bit];
        }
      }
      return v;
    };
    const BondEnsemble& e = m.bond_ens(b);
    std::vector<double> lik(e.members.size());
    double tot = 0.0;
    for (size_t k = 0; k < e.members.size(); ++k) {
      double acc = 0.0;
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) acc += e.members[k].diag[x][y] * ctx(si, x) * ctx(sj, y);
      lik[k] = e.members[k].prior * acc;
      tot += lik[k];
    }
    for (size_t k = 0; k < e.members.size(); ++k) {
      if (lik[k] <= 0.0) continue;
      config[b] = static_cast<int>(k);
      rec(pos + 1, prob * lik[k] / tot);
      config[b] = -1;
    }
  };
  rec(0, 1.0);
  return out;
}

double dist_diff(const std::map<std::vector<int>, double>& a,
                 const std::map<std::vector<int>, double>& b) {
  double d = 0.0;
  for (const auto& [k, v] : a) {
    auto it = b.find(k);
    d += std::abs(v - (it == b.end() ? 0.0 : it->second));
  }
  for (const auto& [k, v] : b)
    if (!a.count(k)) d += v;
  return d;
}

}  // namespace

std::vector<CheckResult> run_verification(int max_sites) {
  std::vector<CheckResult> out;

  out.push_back(run_check("critical-temperatures", []() {
    struct Row {
      LatticeKind k;
      double ref, rtol;
    };
    const Row rows[] = {{LatticeKind::honeycomb, 0.813, 1e-3},
                        {LatticeKind::square, 1.6921, 1e-3},
                        {LatticeKind::triangular, 7.1617, 1e-3},
                        {LatticeKind::cubic, 13.1, 1e-2}};
    double worst = 0.0;
    bool ok = true;
    for (const Row& r : rows) {
      double rel = std::abs(tcrit_zero_field(r.k) - r.ref) / r.ref;
      worst = std::max(worst, rel / r.rtol);
      ok = ok && rel < r.rtol;
    }
    return std::make_pair(ok, "worst relative deviation " + std::to_string(worst) +
                                  " of its tolerance");
  }));

  out.push_back(run_check("dephasing-temperature-window", []() {
    double v = tc_dephasing(0.029);
    return std::make_pair(v >= 0.28 && v <= 0.29, "kT_c = " + std::to_string(v));
  }));

  out.push_back(run_check("network-reconstruction", [max_sites]() {
    std::vector<Graph> graphs{make_chain(3, Boundary::open)};
    if (max_sites >= 4) {
      graphs.push_back(make_chain(4, Boundary::open));
      graphs.push_back(make_square(2, 2, Boundary::open));
      graphs.push_back(make_star(3));
    }
    if (max_sites >= 5) graphs.push_back(make_star(4));
    double worst = 0.0;
    for (const Graph& g : graphs)
      for (double beta : {0.5, 2.0, 10.0})
        for (double theta : {0.0, 0.3, 1.0}) {
          ModelParams p{beta, theta};
          worst = std::max(worst, trace_distance(project_peps(g, p), exact_thermal_state(g, p)));
        }
    return std::make_pair(worst < 1e-9, devstr(worst));
  }));

  out.push_back(run_check("bond-ensemble-reconstruction", []() {
    double worst = 0.0;
    bool ok = true;
    for (double beta : {0.3, 1.0, 3.0, kInf})
      for (double theta : {0.0, 0.3, 0.7, 1.2})
        for (auto [di, dj] : std::vector<std::pair<int, int>>{{1, 1}, {2, 2}, {2, 3}, {3, 4}}) {
          BondEnsemble e = build_bond_ensemble(beta, theta, di, dj);
          worst = std::max(worst, (reconstruct_ensemble(e) - e.bond).cwiseAbs().maxCoeff());
          double wsum = 0.0;
          for (const auto& mem : e.members) {
            wsum += mem.prior;
            ok = ok && mem.prior > -1e-15;
          }
          ok = ok && std::abs(wsum - 1.0) < 1e-12 && e.members.size() <= 5;
        }
    return std::make_pair(ok && worst < 1e-9, devstr(worst));
  }));

  out.push_back(run_check("entangled-weight-closed-form", []() {
    double worst = 0.0;
    Vec4 psi = t0_bond_state(0.0, 1, 1);
    for (double w : {0.35, 0.45, 0.6, 0.75, 0.9, 1.0}) {
      EndParams e{w, 0.0};
      double pe = max_pe(bond_operator(e, e), psi);
      double ref = std::max(0.0, (w * w + 2.0 * w - 1.0) / 2.0);
      worst = std::max(worst, std::abs(pe - ref));
    }
    return std::make_pair(worst < 1e-6, devstr(worst));
  }));

  out.push_back(run_check("posterior-order-invariance", []() {
    std::vector<Graph> graphs{make_chain(3, Boundary::open),
                              make_graph(3, {{0, 1}, {1, 2}, {0, 2}})};
    double worst = 0.0;
    for (const Graph& g : graphs)
      for (double theta : {0.0, 0.3}) {
        SamplerModel m = build_sampler(g, ModelParams{1.0, theta});
        auto joint = exact_configuration_dist(m);
        std::vector<int> fwd(g.bonds.size()), rev;
        for (size_t b = 0; b < g.bonds.size(); ++b) fwd[b] = static_cast<int>(b);
        rev.assign(fwd.rbegin(), fwd.rend());
        worst = std::max(worst, dist_diff(joint, chain_dist(m, fwd)));
        worst = std::max(worst, dist_diff(joint, chain_dist(m, rev)));
      }
    return std::make_pair(worst < 1e-10, devstr(worst));
  }));

  out.push_back(run_check("mixture-reconstruction", [max_sites]() {
    std::vector<Graph> graphs{make_chain(3, Boundary::open)};
    if (max_sites >= 4) graphs.push_back(make_square(2, 2, Boundary::open));
    double worst = 0.0;
    for (const Graph& g : graphs)
      for (double theta : {0.0, 0.3}) {
        SamplerModel m = build_sampler(g, ModelParams{1.0, theta});
        worst = std::max(worst,
                         trace_distance(reconstruct_mixture(m), exact_thermal_state(g, m.params)));
      }
    return std::make_pair(worst < 1e-9, devstr(worst));
  }));

  out.push_back(run_check("success-probability-factorization", []() {
    Rng rng(0x5eedu);
    double worst = 0.0;
    for (int it = 0; it < 20; ++it) worst = std::max(worst, factorization_two_site(rng));
    for (int it = 0; it < 20; ++it) worst = std::max(worst, factorization_three_site(rng));
    return std::make_pair(worst < 1e-12, devstr(worst));
  }));

  out.push_back(run_check("filter-identities", [max_sites]() {
    double worst = 0.0;
    for (double beta : {0.7, 2.0, kInf})
      for (double theta : {0.0, 0.4, 1.0}) {
        ModelParams p{beta, theta};
        FilterOutcome fo = filter_map(p);
        double t = p.t(), ts = t * std::sin(theta);
        worst = std::max(worst, std::abs(fo.p0 + fo.p1 - 1.0));
        worst = std::max(worst, std::abs(fo.cos2phi - ts));
        worst = std::max(worst,
                         std::abs(std::tanh(fo.beta_prime / 2.0) * std::sqrt(1.0 - ts * ts) -
                                  t * std::cos(theta)));
        if (std::isinf(beta)) worst = std::max(worst, std::abs(fo.p0 - std::sin(theta)));
      }
    bool ok = worst < 1e-12;
    if (max_sites >= 4) {
      Graph g = make_chain(4, Boundary::open);
      double worst_state = 0.0;
      FilterOracleRecord rec = apply_filter_oracle(g, ModelParams{2.0, 0.4}, 1);
      for (const auto& pr : rec.patterns) worst_state = std::max(worst_state, pr.dist_reference);
      worst_state = std::max(worst_state, rec.dist_construction);
      FilterOracleRecord rec0 = apply_filter_oracle(g, ModelParams{kInf, 0.4}, 1);
      for (const auto& pr : rec0.patterns)
        if (pr.prob > 1e-12) worst_state = std::max(worst_state, pr.max_stabilizer_dev);
      worst_state = std::max(worst_state, rec0.dist_construction);
      ok = ok && worst_state < 1e-9;
      worst = std::max(worst, worst_state);
    }
    return std::make_pair(ok, devstr(worst));
  }));

  out.push_back(run_check("filter-outcome-frequency", []() {
    Graph g = make_chain(3, Boundary::open);
    int shots = 20000;
    FilterOracleRecord rec =
        apply_filter_oracle(g, ModelParams{kInf, 0.4}, 0x0f11u, shots);
    double p0 = std::sin(0.4);
    double sigma = std::sqrt(p0 * (1.0 - p0) / shots);
    double worst = 0.0;
    for (double f : rec.freq0) worst = std::max(worst, std::abs(f - p0));
    return std::make_pair(worst < 4.0 * sigma, devstr(worst) + " vs 4 sigma = " +
                                                   std::to_string(4.0 * sigma));
  }));

  out.push_back(run_check("exact-outcome-distribution", []() {
    Graph g1 = make_chain(1, Boundary::open);
    MeasurementPattern p1;
    p1.steps.push_back({0, 0.0, 0.0, {}});
    ModelParams mp{0.8, 0.5};
    auto dist1 = born_exact(g1, mp, p1);
    double ref = 0.5 * (1.0 + mp.t() * std::sin(mp.theta));
    double worst = std::abs(dist1.at("0") - ref);
    Graph g3 = make_chain(3, Boundary::open);
    MeasurementPattern p3;
    p3.steps.push_back({1, M_PI / 2, 0.3, {}});
    p3.steps.push_back({0, 1.1, -0.7, AdaptiveRule{{0}, false}});
    p3.steps.push_back({2, 0.4, 2.0, AdaptiveRule{{0, 1}, true}});
    double tot = 0.0;
    for (const auto& [key, pr] : born_exact(g3, mp, p3)) tot += pr;
    worst = std::max(worst, std::abs(tot - 1.0));
    return std::make_pair(worst < 1e-12, devstr(worst));
  }));

  out.push_back(run_check("pure-cluster-stabilizers", [max_sites]() {
    double worst = 0.0;
    if (max_sites >= 4) {
      Graph g = make_chain(4, Boundary::open);
      Mat rho = exact_thermal_state(g, ModelParams{kInf, 0.0});
      for (int i = 0; i < g.n; ++i)
        worst = std::max(worst, std::abs((rho * stabilizer(g, i)).trace().real() - 1.0));
    }
    bool parity_ok = true;
    if (max_sites >= 5) {
      Graph g = make_chain(5, Boundary::open);
      SamplerModel m = build_bernoulli_sampler(g, 1.0);
      MeasurementPattern p;
      for (int s = 0; s < 5; ++s) p.steps.push_back({s, M_PI / 2, 0.0, {}});
      for (const ShotRecord& r : run_pattern(m, p, 200, 7, 24, Exec::serial)) {
        int par = r.outcomes[0] ^ r.outcomes[2] ^ r.outcomes[4];
        parity_ok = parity_ok && !r.failed && par == 0;
      }
    }
    return std::make_pair(worst < 1e-9 && parity_ok, devstr(worst));
  }));

  out.push_back(run_check("simulability-verdicts", []() {
    bool ok = is_simulable(0.49, LatticeKind::square) && !is_simulable(0.5, LatticeKind::square) &&
              !is_simulable(0.51, LatticeKind::square);
    bool threw = false;
    try {
      threshold_bond(LatticeKind::chain);
    } catch (const std::exception&) {
      threw = true;
    }
    return std::make_pair(ok && threw, std::string(ok && threw ? "strict comparisons hold"
                                                               : "verdict logic broken"));
  }));

  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace thermo
