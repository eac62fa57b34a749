#pragma once

#include <cstdint>
#include <random>

namespace shmc {

// splitmix64 step; used only to derive well-separated engine seeds.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d2b83f27afd969ULL;
  return z ^ (z >> 31);
}

// One deterministic random stream per chain (or per sweep replica).
//
// Stream layout: an RngStream is identified by (seed, stream_id); chains of a
// run use stream_id = chain index, replica sweeps use stream_id = replica
// index, so concurrently executed chains draw from disjoint streams and the
// results do not depend on scheduling. Within a stream every consumer draws
// in a fixed documented order (see samplers/): particle pick, momentum
// refresh, per-step batch indices, accept uniform. Full-batch draws consume
// nothing, which is what makes an s = max run bit-identical to its
// deterministic counterpart.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0) {
    std::uint64_t s = seed;
    (void)splitmix64_next(s);
    s ^= 0x6a09e667f3bcc909ULL + stream_id * 0x9e3779b97f4a7c15ULL;
    const std::uint64_t a = splitmix64_next(s);
    const std::uint64_t b = splitmix64_next(s);
    const std::uint64_t c = splitmix64_next(s);
    const std::uint64_t d = splitmix64_next(s);
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32),
                      static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(d >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() { return gauss_(engine_); }

  double normal(double stddev) { return stddev * gauss_(engine_); }

  // Uniform index in [0, n). Multiply-shift map; the O(n/2^64) bias is far
  // below anything observable here.
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }

  // Uniform over {0, ..., n-1} \ {excluded}; consumes exactly one engine call.
  std::uint32_t below_excluding(std::uint32_t n, std::uint32_t excluded) {
    std::uint32_t j = below(n - 1);
    return j + (j >= excluded ? 1u : 0u);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> gauss_{0.0, 1.0};
};

}  // namespace shmc
