#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "thermocluster/io.hpp"
#include "thermocluster/measurement.hpp"
#include "thermocluster/regions.hpp"
#include "thermocluster/sampler.hpp"
#include "thermocluster/verify.hpp"

using nlohmann::json;
using namespace thermo;

namespace {

struct Options {
  std::string lattice;
  std::string dims;
  std::string boundary = "open";
  double beta = 0.0;
  double kt = 0.0;
  bool has_beta = false, has_kt = false;
  double theta = 0.0;
  double pe = -1.0;
  long long shots = 1000;
  uint64_t seed = 12345;
  std::string pattern;
  std::string out;
  bool json_out = false;
  bool exact = false;
  bool serial = false;
  double pc = 2.9e-2;
  double pc_site = -1.0;
  int cap_oracle = 12;
  int cap_statevector = 24;
  int max_sites = 6;
  double delta = 1.0;
  double theta_min = 0.0, theta_max = M_PI / 2, kt_min = 0.05, kt_max = 2.0;
  int theta_steps = 32, kt_steps = 0;
};

double resolved_beta(const Options& o) {
  if (o.has_beta == o.has_kt)
    throw UsageError("exactly one of --beta / --kt is required");
  if (o.has_beta) return o.beta;
  if (o.kt <= 0.0) throw UsageError("--kt must be positive");
  return 1.0 / o.kt;
}

void require_shots(const Options& o) {
  if (o.shots < 1) throw UsageError("--shots must be at least 1");
  if (o.shots > (1ll << 31)) throw UsageError("--shots too large");
}

RegionConfig region_config(const Options& o) {
  RegionConfig cfg;
  cfg.p_c = o.pc;
  if (o.pc_site > 0.0) cfg.p_c_site = o.pc_site;
  return cfg;
}

// run `fn` against --out if given, stdout otherwise
template <typename Fn>
void with_output(const Options& o, Fn fn) {
  if (o.out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw UsageError("cannot open output file '" + o.out + "'");
  fn(f);
}

std::string size_histogram(const std::vector<int>& sizes) {
  std::map<int, int> h;
  for (int s : sizes) ++h[s];
  std::string out;
  for (auto [size, count] : h) {
    if (!out.empty()) out += ';';
    out += std::to_string(size) + ':' + std::to_string(count);
  }
  return out;
}

json json_header(const std::string& command) {
  return json{{"schema_version", kSchemaVersion}, {"command", command}};
}

int cmd_critical_temp(const Options& o) {
  if (o.lattice.empty()) throw UsageError("--lattice is required");
  LatticeKind kind = kind_from_name(o.lattice);
  double v = o.theta == 0.0 ? tcrit_zero_field(kind) : tcrit_general(o.theta, kind);
  if (o.json_out) {
    json j = json_header("critical-temp");
    j["lattice"] = kind_name(kind);
    j["theta"] = o.theta;
    j["tcrit"] = v;
    j["tcrit_display"] = v * o.delta;
    j["delta"] = o.delta;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << fmtg(v * o.delta, 5) << "\n";
  }
  return 0;
}

int cmd_sample(const Options& o) {
  require_shots(o);
  Graph g = resolve_lattice(o.lattice, o.dims, o.boundary);
  SamplerModel m = o.pe >= 0.0 ? build_bernoulli_sampler(g, o.pe)
                               : build_sampler(g, ModelParams{resolved_beta(o), o.theta});
  int shots = static_cast<int>(o.shots);
  std::vector<std::string> masks(shots);
  std::vector<std::string> hists(shots);
  {
    SamplerScratch ws;
    ws.reset(m);
    std::vector<int> config;
    for (int k = 0; k < shots; ++k) {
      Rng rng(shot_seed(o.seed, k));
      sample_configuration(m, rng, ws, config);
      masks[k] = bond_mask(m, config);
      hists[k] = size_histogram(entangled_clusters(m, config).sizes);
    }
  }
  if (o.json_out) {
    json j = json_header("sample");
    j["shots"] = shots;
    j["seed"] = o.seed;
    json recs = json::array();
    for (int k = 0; k < shots; ++k)
      recs.push_back({{"shot", k}, {"bond_mask", masks[k]}, {"hist", hists[k]}});
    j["records"] = std::move(recs);
    with_output(o, [&](std::ostream& os) { os << j.dump() << "\n"; });
  } else {
    with_output(o, [&](std::ostream& os) {
      os << "shot,bond_mask,hist\n";
      for (int k = 0; k < shots; ++k) os << k << ',' << masks[k] << ',' << hists[k] << "\n";
    });
  }
  return 0;
}

int cmd_percolation(const Options& o) {
  require_shots(o);
  Graph g = resolve_lattice(o.lattice, o.dims, o.boundary);
  SamplerModel m = o.pe >= 0.0 ? build_bernoulli_sampler(g, o.pe)
                               : build_sampler(g, ModelParams{resolved_beta(o), o.theta});
  ClusterStats st = gather_stats(m, static_cast<int>(o.shots), o.seed,
                                 o.serial ? Exec::serial : Exec::parallel);
  if (o.json_out) {
    json j = json_header("percolation");
    j["shots"] = st.shots;
    j["seed"] = o.seed;
    j["mean_cluster_size"] = st.mean_cluster_size;
    j["se_mean_cluster_size"] = st.se_mean_cluster_size;
    j["mean_largest"] = st.mean_largest;
    json recs = json::array();
    for (size_t k = 0; k < st.records.size(); ++k) {
      const auto& r = st.records[k];
      recs.push_back({{"shot", k},
                      {"largest", r.largest},
                      {"n_clusters", r.n_clusters},
                      {"cost_bound", r.cost_bound}});
    }
    j["records"] = std::move(recs);
    with_output(o, [&](std::ostream& os) { os << j.dump() << "\n"; });
  } else {
    with_output(o, [&](std::ostream& os) {
      os << "shot,largest,n_clusters,cost_bound\n";
      for (size_t k = 0; k < st.records.size(); ++k) {
        const auto& r = st.records[k];
        os << k << ',' << r.largest << ',' << r.n_clusters << ',' << fmt17(r.cost_bound) << "\n";
      }
    });
  }
  return 0;
}

int cmd_simulate(const Options& o) {
  Graph g = resolve_lattice(o.lattice, o.dims, o.boundary);
  if (o.pattern.empty()) throw UsageError("--pattern is required");
  MeasurementPattern pat = pattern_from_file(o.pattern);
  try {
    validate_pattern(pat, g);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.exact) {
    auto dist = born_exact(g, ModelParams{resolved_beta(o), o.theta}, pat, o.cap_oracle);
    if (o.json_out) {
      json j = json_header("simulate");
      j["exact"] = true;
      json d = json::object();
      for (const auto& [key, p] : dist) d[key] = p;
      j["distribution"] = std::move(d);
      with_output(o, [&](std::ostream& os) { os << j.dump() << "\n"; });
    } else {
      with_output(o, [&](std::ostream& os) {
        os << "outcomes,probability\n";
        for (const auto& [key, p] : dist) os << key << ',' << fmt17(p) << "\n";
      });
    }
    return 0;
  }
  require_shots(o);
  SamplerModel m = o.pe >= 0.0 ? build_bernoulli_sampler(g, o.pe)
                               : build_sampler(g, ModelParams{resolved_beta(o), o.theta});
  auto records = run_pattern(m, pat, static_cast<int>(o.shots), o.seed, o.cap_statevector,
                             o.serial ? Exec::serial : Exec::parallel);
  std::map<std::string, long long> hist;
  long long failed = 0;
  for (const auto& r : records) {
    if (r.failed)
      ++failed;
    else
      ++hist[outcomes_string(r.outcomes)];
  }
  json hj = json_header("simulate");
  hj["shots"] = records.size();
  hj["failed"] = failed;
  {
    json h = json::object();
    for (const auto& [key, count] : hist) h[key] = count;
    hj["histogram"] = std::move(h);
  }
  if (o.json_out) {
    json recs = json::array();
    for (size_t k = 0; k < records.size(); ++k) {
      const auto& r = records[k];
      recs.push_back({{"shot", k},
                      {"outcomes", outcomes_string(r.outcomes)},
                      {"failed", r.failed},
                      {"overflow_size", r.overflow_size},
                      {"cost", r.cost},
                      {"hist", size_histogram(r.cluster_sizes)}});
    }
    hj["records"] = std::move(recs);
    with_output(o, [&](std::ostream& os) { os << hj.dump() << "\n"; });
  } else {
    with_output(o, [&](std::ostream& os) {
      os << "shot,outcomes,failed,overflow_size,cost,hist\n";
      for (size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        os << k << ',' << (r.failed ? "-" : outcomes_string(r.outcomes)) << ','
           << (r.failed ? 1 : 0) << ',' << r.overflow_size << ',' << fmt17(r.cost) << ','
           << size_histogram(r.cluster_sizes) << "\n";
      }
    });
    // aggregated histogram goes to stdout; with --out it is the only stdout line
    std::cout << hj.dump() << "\n";
  }
  return 0;
}

json term_json(const BondMember& m) {
  json j;
  j["prior"] = m.prior;
  if (m.entangled) {
    j["type"] = "entangled";
    json amps = json::array();
    for (int k = 0; k < 4; ++k) amps.push_back({m.psi[k].real(), m.psi[k].imag()});
    j["amplitudes"] = std::move(amps);
  } else {
    j["type"] = "product";
    json a = json::array(), b = json::array();
    for (int k = 0; k < 2; ++k) {
      a.push_back({m.a[k].real(), m.a[k].imag()});
      b.push_back({m.b[k].real(), m.b[k].imag()});
    }
    j["low"] = std::move(a);
    j["high"] = std::move(b);
  }
  return j;
}

int cmd_decompose_bond(const Options& o) {
  std::vector<int> deg = parse_dims(o.dims);
  if (deg.empty() && !o.lattice.empty()) deg = {coordination(kind_from_name(o.lattice))};
  if (deg.empty()) throw UsageError("degrees required: --dims \"di,dj\" or a --lattice name");
  if (deg.size() == 1) deg.push_back(deg[0]);
  double beta = resolved_beta(o);
  BondEnsemble e = build_bond_ensemble(beta, o.theta, deg[0], deg[1]);
  EndParams pi = site_params(beta, o.theta, deg[0]);
  EndParams pj = site_params(beta, o.theta, deg[1]);
  json j = json_header("decompose-bond");
  j["beta"] = beta;
  j["theta"] = o.theta;
  j["deg"] = {deg[0], deg[1]};
  j["alpha"] = {pi.alpha, pj.alpha};
  j["gamma"] = {pi.gamma, pj.gamma};
  j["p_e"] = e.pe;
  json members = json::array();
  for (const auto& m : e.members) members.push_back(term_json(m));
  j["members"] = std::move(members);
  with_output(o, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  return 0;
}

// kT at which the filtered temperature crosses the dephasing tolerance
double kt_filter_bound(double theta, double pc) {
  double tc = tc_dephasing(pc);
  auto t_prime_temp = [&](double kt) {
    FilterOutcome fo = filter_map(ModelParams{1.0 / kt, theta});
    return fo.beta_prime > 0.0 ? 1.0 / fo.beta_prime : std::numeric_limits<double>::infinity();
  };
  double lo = 1e-9, hi = 2.0 * std::max(tc, 1.0);
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (t_prime_temp(mid) < tc ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

int cmd_phase_diagram(const Options& o) {
  if (o.lattice.empty()) throw UsageError("--lattice is required");
  LatticeKind kind = kind_from_name(o.lattice);
  RegionConfig cfg = region_config(o);
  double thr_site = cfg.p_c_site ? *cfg.p_c_site : threshold_site(kind);
  if (o.theta_steps < 2) throw UsageError("--theta-steps must be at least 2");
  std::vector<double> thetas(o.theta_steps);
  for (int i = 0; i < o.theta_steps; ++i)
    thetas[i] = o.theta_min + (o.theta_max - o.theta_min) * i / (o.theta_steps - 1);
  if (o.kt_steps > 0) {
    // region labels on a (kT, theta) grid
    if (o.kt_steps < 2) throw UsageError("--kt-steps must be at least 2");
    std::vector<double> kts(o.kt_steps);
    for (int i = 0; i < o.kt_steps; ++i)
      kts[i] = o.kt_min + (o.kt_max - o.kt_min) * i / (o.kt_steps - 1);
    std::vector<RegionVerdict> verdicts(thetas.size() * kts.size());
#pragma omp parallel for schedule(dynamic)
    for (size_t idx = 0; idx < verdicts.size(); ++idx) {
      size_t ti = idx / kts.size(), ki = idx % kts.size();
      verdicts[idx] = classify(kts[ki], thetas[ti], kind, cfg);
    }
    if (o.json_out) {
      json j = json_header("phase-diagram");
      j["lattice"] = kind_name(kind);
      json rows = json::array();
      for (const auto& v : verdicts)
        rows.push_back({{"theta", v.theta},
                        {"kt", v.kt},
                        {"p_e", v.p_e},
                        {"p_dephasing", v.p_dephasing},
                        {"t_prime", v.t_prime},
                        {"p1", v.p1},
                        {"cond_c", v.cond_c},
                        {"cond_q", v.cond_q},
                        {"cond_qprime", v.cond_qprime},
                        {"label", region_name(v.label)}});
      j["grid"] = std::move(rows);
      with_output(o, [&](std::ostream& os) { os << j.dump() << "\n"; });
    } else {
      with_output(o, [&](std::ostream& os) {
        os << "theta,kt,p_e,p_dephasing,t_prime,p1,cond_c,cond_q,cond_qprime,label\n";
        for (const auto& v : verdicts)
          os << fmt17(v.theta) << ',' << fmt17(v.kt) << ',' << fmt17(v.p_e) << ','
             << fmt17(v.p_dephasing) << ',' << fmt17(v.t_prime) << ',' << fmt17(v.p1) << ','
             << v.cond_c << ',' << v.cond_q << ',' << v.cond_qprime << ','
             << region_name(v.label) << "\n";
      });
    }
    return 0;
  }
  // boundary curves per theta
  struct Row {
    double theta, tcrit_c, tc_q, qprime_t_bound;
  };
  std::vector<Row> rows(thetas.size());
#pragma omp parallel for schedule(dynamic)
  for (size_t i = 0; i < thetas.size(); ++i) {
    double theta = thetas[i];
    Row r{theta, tcrit_general(theta, kind), 0.0, 0.0};
    double kt_t = kt_filter_bound(theta, cfg.p_c);
    double s = std::sin(theta);
    double kt_p = 0.0;
    if (s > cfg.p_c) kt_p = 1.0 / (2.0 * std::atanh(cfg.p_c / s));
    if (kt_p < kt_t) r.tc_q = kt_t;
    double kt_s = 0.0;
    bool qprime_possible = true;
    if (s > 1.0 - thr_site) {
      double tstar = (1.0 - thr_site) / s;
      if (tstar < 1.0)
        kt_s = 1.0 / (2.0 * std::atanh(tstar));
      else
        qprime_possible = false;
    }
    if (qprime_possible && kt_s < kt_t) r.qprime_t_bound = kt_t;
    rows[i] = r;
  }
  if (o.json_out) {
    json j = json_header("phase-diagram");
    j["lattice"] = kind_name(kind);
    json jr = json::array();
    for (const auto& r : rows)
      jr.push_back({{"theta", r.theta},
                    {"tcrit_c", r.tcrit_c},
                    {"tc_q", r.tc_q},
                    {"qprime_t_bound", r.qprime_t_bound}});
    j["curves"] = std::move(jr);
    with_output(o, [&](std::ostream& os) { os << j.dump() << "\n"; });
  } else {
    with_output(o, [&](std::ostream& os) {
      os << "theta,tcrit_c,tc_q,qprime_t_bound\n";
      for (const auto& r : rows)
        os << fmt17(r.theta) << ',' << fmt17(r.tcrit_c) << ',' << fmt17(r.tc_q) << ','
           << fmt17(r.qprime_t_bound) << "\n";
    });
  }
  return 0;
}

int cmd_verify(const Options& o) {
  if (o.max_sites < 3) throw UsageError("--max-sites must be at least 3");
  auto results = run_verification(o.max_sites);
  if (o.json_out) {
    json j = json_header("verify");
    json checks = json::array();
    for (const auto& r : results)
      checks.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    j["checks"] = std::move(checks);
    j["all_passed"] = all_passed(results);
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& r : results)
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
  }
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermal cluster-state phase diagram toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_lattice = [&](CLI::App* c) {
    c->add_option("--lattice", o.lattice, "lattice name, inline JSON, or graph file");
    c->add_option("--dims", o.dims, "lattice dimensions, comma separated");
    c->add_option("--boundary", o.boundary, "open or periodic (default open)");
  };
  auto add_model = [&](CLI::App* c) {
    c->add_option("--beta", o.beta, "inverse temperature")->each([&](const std::string&) {
      o.has_beta = true;
    });
    c->add_option("--kt", o.kt, "temperature in Delta units")->each([&](const std::string&) {
      o.has_kt = true;
    });
    c->add_option("--theta", o.theta, "field angle in [0, pi/2]");
  };
  auto add_run = [&](CLI::App* c) {
    c->add_option("--shots", o.shots, "number of shots");
    c->add_option("--seed", o.seed, "master seed");
    c->add_flag("--serial", o.serial, "disable shot parallelism");
  };
  auto add_out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "write output to a file instead of stdout");
    c->add_flag("--json", o.json_out, "machine-readable JSON output");
  };

  CLI::App* ct = app.add_subcommand("critical-temp", "critical temperature of a lattice");
  add_lattice(ct);
  ct->add_option("--theta", o.theta, "field angle in [0, pi/2]");
  ct->add_option("--delta", o.delta, "energy scale for display only");
  ct->add_flag("--json", o.json_out, "machine-readable JSON output");

  CLI::App* sa = app.add_subcommand("sample", "draw bond configurations from the posterior");
  add_lattice(sa);
  add_model(sa);
  add_run(sa);
  add_out(sa);
  sa->add_option("--pe", o.pe, "fixed entangled-bond probability instead of a thermal model");

  CLI::App* pc = app.add_subcommand("percolation", "cluster statistics over sampled shots");
  add_lattice(pc);
  add_model(pc);
  add_run(pc);
  add_out(pc);
  pc->add_option("--pe", o.pe, "fixed entangled-bond probability instead of a thermal model");

  CLI::App* si = app.add_subcommand("simulate", "run a measurement pattern");
  add_lattice(si);
  add_model(si);
  add_run(si);
  add_out(si);
  si->add_option("--pe", o.pe, "fixed entangled-bond probability instead of a thermal model");
  si->add_option("--pattern", o.pattern, "JSON measurement pattern file");
  si->add_flag("--exact", o.exact, "exact outcome distribution instead of sampling");
  si->add_option("--cap-oracle", o.cap_oracle, "max sites for the exact distribution");
  si->add_option("--cap-statevector", o.cap_statevector, "max realized cluster size");

  CLI::App* de = app.add_subcommand("decompose-bond", "bond ensemble decomposition as JSON");
  de->add_option("--lattice", o.lattice, "lattice name fixing the site degree");
  de->add_option("--dims", o.dims, "site degrees \"di,dj\"");
  add_model(de);
  de->add_option("--out", o.out, "write output to a file instead of stdout");
  de->add_flag("--json", o.json_out, "machine-readable JSON output (always on here)");

  CLI::App* pd = app.add_subcommand("phase-diagram", "region boundary curves or grid labels");
  pd->add_option("--lattice", o.lattice, "lattice name");
  pd->add_option("--theta-min", o.theta_min, "grid start");
  pd->add_option("--theta-max", o.theta_max, "grid end");
  pd->add_option("--theta-steps", o.theta_steps, "grid points");
  pd->add_option("--kt-min", o.kt_min, "temperature grid start");
  pd->add_option("--kt-max", o.kt_max, "temperature grid end");
  pd->add_option("--kt-steps", o.kt_steps, "temperature grid points; enables grid mode");
  pd->add_option("--pc", o.pc, "dephasing tolerance");
  pd->add_option("--pc-site", o.pc_site, "site percolation threshold override");
  add_out(pd);

  CLI::App* ve = app.add_subcommand("verify", "run the oracle self-checks");
  ve->add_option("--max-sites", o.max_sites, "largest graph used by the checks");
  ve->add_flag("--json", o.json_out, "machine-readable JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (ct->parsed()) return cmd_critical_temp(o);
    if (sa->parsed()) return cmd_sample(o);
    if (pc->parsed()) return cmd_percolation(o);
    if (si->parsed()) return cmd_simulate(o);
    if (de->parsed()) return cmd_decompose_bond(o);
    if (pd->parsed()) return cmd_phase_diagram(o);
    if (ve->parsed()) return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
