#pragma once

#include <cstdint>
#include <random>

namespace qrl {

// Deterministic random source addressed by (seed, stream). The engine is
// std::mt19937_64 (bit-exact across platforms); uniform/normal mappings are
// implemented here because the std distributions are not reproducible.
// Identical (seed, stream) always yields the identical draw sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);

  // Uniform integer in [0, n), n >= 1.
  int uniform_int(int n);

  // Standard normal via Box-Muller (second value cached).
  double normal();
  double normal(double mean, double stddev);

  // Child stream derived from identity only, independent of draws consumed.
  Rng derive(std::uint64_t substream) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace qrl
