#pragma once

#include <cstdint>
#include <random>

namespace sv {

// Seeded random stream. mt19937_64 output is pinned by the standard, and the
// uniform/normal transforms below avoid the implementation-defined
// std::*_distribution adaptors, so a given seed yields the same draw sequence
// on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * kInv53;
  }

  // Standard normal (Marsaglia polar, second variate cached).
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang squeeze; shape < 1 handled by the
  // usual U^{1/shape} boost.
  double gamma(double shape);

 private:
  static constexpr double kInv53 = 1.0 / 9007199254740992.0;  // 2^-53

  std::uint64_t seed_;
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sv
