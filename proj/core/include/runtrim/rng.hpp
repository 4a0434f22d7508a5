#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace runtrim {

/// Seeded random source. Built only on the raw mt19937_64 stream so results
/// are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform();

  /// Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

  /// Standard normal (Box-Muller).
  double normal();

  template <class T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Mixes a base seed with a stream id (splitmix64) to get independent seeds
/// for repetitions, folds and job types.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace runtrim
