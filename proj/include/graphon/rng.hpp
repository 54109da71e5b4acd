#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace graphon {

std::uint64_t splitmix64(std::uint64_t& state);

// Mixes a base seed with a sequence of coordinates (grid indices, replicate
// index, raw bit patterns of doubles) into an independent stream seed.
std::uint64_t derive_seed(std::uint64_t base, std::span<const std::uint64_t> coordinates);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coordinates);

std::uint64_t double_bits(double value);

// mt19937_64 seeded through SplitMix64. All draws avoid implementation-defined
// distributions except the normal sampler, which is libstdc++'s.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng split(std::uint64_t stream) const;
  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }
  double uniform();
  bool bernoulli(double p) { return uniform() < p; }
  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  double normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace graphon
