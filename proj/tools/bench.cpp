#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "thermocluster/measurement.hpp"
#include "thermocluster/percolation.hpp"

using namespace thermo;

namespace {

double seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename Fn>
double timed(Fn fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  return seconds(t0, std::chrono::steady_clock::now());
}

bool same_stats(const ClusterStats& a, const ClusterStats& b) {
  if (a.records.size() != b.records.size()) return false;
  for (size_t k = 0; k < a.records.size(); ++k)
    if (a.records[k].largest != b.records[k].largest ||
        a.records[k].n_clusters != b.records[k].n_clusters ||
        a.records[k].chi != b.records[k].chi)
      return false;
  return true;
}

bool same_records(const std::vector<ShotRecord>& a, const std::vector<ShotRecord>& b) {
  if (a.size() != b.size()) return false;
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k].failed != b[k].failed || a[k].outcomes != b[k].outcomes) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int shots = argc > 1 ? std::atoi(argv[1]) : 2000;
  if (shots < 1) shots = 2000;
  uint64_t seed = 99;

  {
    Graph g = make_square(32, 32, Boundary::periodic);
    SamplerModel m = build_bernoulli_sampler(g, 0.45);
    ClusterStats serial, parallel;
    double ts = timed([&] { serial = gather_stats(m, shots, seed, Exec::serial); });
    double tp = timed([&] { parallel = gather_stats(m, shots, seed, Exec::parallel); });
    std::printf("cluster statistics, square 32x32, %d shots\n", shots);
    std::printf("  serial    %8.3f s\n", ts);
    std::printf("  parallel  %8.3f s   speedup %.2fx   results %s\n", tp, ts / tp,
                same_stats(serial, parallel) ? "identical" : "DIFFER");
    if (!same_stats(serial, parallel)) return 1;
  }

  {
    Graph g = make_square(4, 4, Boundary::open);
    SamplerModel m = build_sampler(g, ModelParams{2.0, 0.2});
    MeasurementPattern p;
    for (int s = 0; s < 8; ++s)
      p.steps.push_back({s, M_PI / 2, 0.3, s > 0 ? std::optional<AdaptiveRule>(AdaptiveRule{
                                                       {s - 1}, false})
                                                 : std::nullopt});
    std::vector<ShotRecord> serial, parallel;
    double ts = timed([&] { serial = run_pattern(m, p, shots, seed, 24, Exec::serial); });
    double tp = timed([&] { parallel = run_pattern(m, p, shots, seed, 24, Exec::parallel); });
    std::printf("measurement pattern, square 4x4, 8 sites, %d shots\n", shots);
    std::printf("  serial    %8.3f s\n", ts);
    std::printf("  parallel  %8.3f s   speedup %.2fx   results %s\n", tp, ts / tp,
                same_records(serial, parallel) ? "identical" : "DIFFER");
    if (!same_records(serial, parallel)) return 1;
  }
  return 0;
}
