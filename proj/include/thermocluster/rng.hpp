#pragma once
#include <cstdint>
#include <vector>

namespace thermo {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// splitmix64 stream
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next_u64() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  // [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  // index into unnormalized nonnegative weights
  int choose(const double* w, int n) {
    double tot = 0.0;
    for (int i = 0; i < n; ++i) tot += w[i];
    double u = uniform() * tot;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += w[i];
      if (u < acc) return i;
    }
    return n - 1;
  }
  int choose(const std::vector<double>& w) { return choose(w.data(), static_cast<int>(w.size())); }
};

// independent per-shot stream derived from a master seed
inline uint64_t shot_seed(uint64_t master, uint64_t shot) {
  return mix64(master ^ mix64(shot ^ 0xd1b54a32d192ed03ull));
}

}  // namespace thermo
