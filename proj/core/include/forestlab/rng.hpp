#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace forestlab {

/// Mixes a master seed and a stream index into an independent seed
/// (splitmix64 finalizer applied twice). Used for per-replicate streams so
/// results do not depend on how replicates are scheduled.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Seeded random stream. All draws are computed from raw 64-bit engine output
/// so a seed reproduces the same sequence on every standard library.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0,1).
  double uniform01();

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform01() < p; }

  /// Independent child stream; advances this stream by one draw.
  Rng split() { return Rng(derive_seed(engine_(), 0x5eed)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace forestlab
