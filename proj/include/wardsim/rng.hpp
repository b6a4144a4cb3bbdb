#pragma once

// Deterministic random streams.  Every agent owns an independent substream
// derived from the master seed and the agent's id, so adding or removing
// one agent never perturbs the draws any other agent sees.

#include <cstdint>
#include <string_view>

namespace wardsim {

// splitmix64 (Steele et al.); tiny, fast, and good enough for Bernoulli
// gates and tie-free shuffles.  Not for cryptography.
class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Always consumes exactly one draw, whatever p is.
  bool bernoulli(double p) { return next_unit() < p; }

  // Uniform integer in [0, n); n must be positive.  Modulo bias is
  // irrelevant at the n values used here (tiny versus 2^64).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_ = 0;
};

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

// Substream for one agent: mix the id hash into the master seed, then step
// once so that even seed 0 starts from a scrambled state.
inline RandomStream agent_stream(std::uint64_t master_seed, std::string_view agent_id) {
  RandomStream warmup(master_seed ^ fnv1a64(agent_id));
  return RandomStream(warmup.next_u64());
}

}  // namespace wardsim
