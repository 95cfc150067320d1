// splitmix64, the one generator behind every stochastic step, so that a seed
// reproduces a run exactly.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace sportscaster {

class Prng {
 public:
  explicit Prng(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t next();
  // Top 53 bits scaled into [0, 1).
  double uniform();
  // Uniform integer in [0, n); n > 0.
  std::size_t below(std::size_t n);
  // Index drawn proportionally to non-negative weights; throws when they sum to 0.
  std::size_t weighted(std::span<const double> weights);

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

// The splitmix64 output function applied to a single value.
std::uint64_t mix64(std::uint64_t x);

}  // namespace sportscaster
