#ifndef COMBFORGE_RNG_HPP
#define COMBFORGE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

#include "combforge/matrix.hpp"

namespace combforge {

// Counter-based generator: draw i of stream k is a fixed mix of (k, i), so
// streams are order-independent and trials can run concurrently.  Campaigns
// use stream = seed ^ trial_index.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  static CounterRng for_trial(std::uint64_t seed, std::uint64_t trial) {
    return CounterRng(seed ^ trial);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller (no library distribution: those are
  // implementation-defined and would break cross-platform determinism).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Independent standard normals in the real and imaginary parts.
  Complex cgaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return {re, im};
  }

  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace combforge

#endif
