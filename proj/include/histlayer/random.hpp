#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace histlayer {

/// Seeded source of uniform and normal variates.
///
/// Engine is std::mt19937_64, whose output sequence is fixed by the standard.
/// Uniforms use the top 53 bits of each draw, so results do not depend on the
/// standard library's distribution implementations. Normals use Box-Muller,
/// consuming two uniforms per pair and caching the second value.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64/53-bit uniform/box-muller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double standard_normal();

  double normal(double mean, double stddev) { return mean + stddev * standard_normal(); }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace histlayer
