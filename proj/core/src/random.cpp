#include "amis/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace amis {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // SplitMix64 finalizer over master advanced by the golden-ratio stride.
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double RandomStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal(double mean, double sigma) {
  // Box-Muller; u1 in (0, 1] keeps the log finite.
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  return mean + sigma * radius * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RandomStream::categorical(std::span<const double> weights) {
  if (weights.empty()) {
    throw std::invalid_argument("categorical: empty weight vector");
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    throw std::invalid_argument("categorical: weights sum to zero");
  }
  const double u = uniform01() * total;
  double cumulative = 0.0;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    cumulative += weights[k];
    if (u < cumulative) return k;
  }
  return weights.size() - 1;
}

}  // namespace amis
