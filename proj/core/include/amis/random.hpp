#ifndef AMIS_RANDOM_HPP
#define AMIS_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>

namespace amis {

/// Derives a decorrelated child seed from a master seed and an index
/// (SplitMix64 finalizer). Used to give every run its own stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic random stream.
///
/// The engine is std::mt19937_64 (fully specified by the standard); the
/// uniform, normal and categorical transforms are implemented here instead
/// of going through std::*_distribution, whose output is
/// implementation-defined. Two streams built from the same seed therefore
/// produce identical draws on every platform and standard library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform01();

  /// Normal draw via the Box-Muller transform; consumes exactly two
  /// engine outputs per call (no cached second variate).
  double normal(double mean, double sigma);

  /// Index draw proportional to the given nonnegative weights.
  std::size_t categorical(std::span<const double> weights);

  /// Child stream seeded from this stream's next output.
  RandomStream spawn() { return RandomStream(next_u64()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace amis

#endif
