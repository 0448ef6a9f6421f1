#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace edgewise {

/// One round of splitmix64; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Deterministic seed for a sub-stream (fold, repeat, epoch, parameter, ...).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Seeded generator with explicit bit-to-double mapping so that results are
/// identical across platforms and standard library implementations. The
/// distribution helpers of <random> are deliberately avoided.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform index in [0, n). n must be > 0.
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % n);
  }

  /// Fisher-Yates shuffle with this engine (std::shuffle is not portable).
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace edgewise
