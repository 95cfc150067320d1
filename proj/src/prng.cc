#include "sportscaster/prng.h"

#include <stdexcept>

namespace sportscaster {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t Prng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  return mix64(state_);
}

double Prng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::size_t Prng::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Prng::below(0)");
  auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

std::size_t Prng::weighted(std::span<const double> weights) {
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0)) throw std::invalid_argument("negative or NaN weight");
    total += w;
  }
  if (!(total > 0)) throw std::invalid_argument("weights sum to zero");
  double r = uniform() * total;
  double acc = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    acc += weights[i];
    last = i;
    if (r < acc) return i;
  }
  return last;
}

}  // namespace sportscaster
