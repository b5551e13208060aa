#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace fdstat {

/// Engine used by every stochastic routine in the library.
using Engine = std::mt19937_64;

/// Derives independent engines from a user seed. Stream `index` under the
/// same seed always yields the same engine, so work split by index is
/// reproducible under any thread schedule. `domain` separates unrelated
/// consumers that share a seed (e.g. data draws vs. permutations).
class StreamFactory {
 public:
  explicit StreamFactory(std::uint64_t seed, std::uint64_t domain = 0) : seed_(seed), domain_(domain) {}

  Engine stream(std::uint64_t index) const;
  StreamFactory subdomain(std::uint64_t domain) const;
  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t domain_;
};

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

/// Standard normal by the polar method (one value per call; the
/// second variate of each accepted pair is discarded to keep the engine
/// state a pure function of the call count).
double standard_normal(Engine& eng);

std::vector<double> standard_normal_vector(Engine& eng, std::size_t n);

}  // namespace fdstat
