#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace hilbert {

/// Seedable generator with a platform-independent output sequence.
///
/// Algorithm "mt64-v1": raw bits come from std::mt19937_64, whose output is
/// fixed by the C++ standard. The standard library distributions are not
/// portable, so every derived draw below is defined here:
///   uniform01   53 high bits scaled by 2^-53, in [0, 1)
///   below(k)    rejection sampling on the top of the 64-bit range
///   gaussian    Marsaglia polar method, spare value cached
class Rng {
public:
  static constexpr const char* kAlgorithm = "mt64-v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double uniform01();
  /// Uniform in (0, 1); never returns 0.
  double uniform_open01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [0, k). k must be > 0.
  std::uint64_t below(std::uint64_t k);
  double gaussian();

  template <class T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for stream `index` under `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace hilbert
