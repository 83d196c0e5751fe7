#pragma once

#include <cstdint>
#include <vector>

namespace casim {

// Deterministic, portable random stream: xoshiro256** (Blackman/Vigna),
// seeded through splitmix64. Chosen over <random> engines because the
// standard distributions are implementation-defined and would break
// byte-identical result tables across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

  void reseed(std::uint64_t seed);

  std::uint64_t next_u64();

  // [0, 1)
  double uniform();

  // [lo, hi)
  double uniform(double lo, double hi);

  // unbiased integer in [0, n); n == 0 returns 0
  std::uint64_t below(std::uint64_t n);

  // degrees in [0, 360)
  double heading() { return uniform(0.0, 360.0); }

  bool chance(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(v.size()))];
  }

 private:
  std::uint64_t s_[4];
};

// splitmix64 step; also used on its own to derive sub-stream keys.
std::uint64_t splitmix64(std::uint64_t& state);

// Stateless mix of several values into one 64-bit key.
std::uint64_t mix_u64(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0);

}  // namespace casim
