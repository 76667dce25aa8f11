#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>

#include "histlayer/core_types.hpp"

namespace histlayer {

struct NormalDist {
  double mean = 0.0;
  double stddev = 1.0;
};

struct UniformDist {
  double lo = -1.0;
  double hi = 1.0;
};

/// Component 1 with probability `mix`, else component 2.
struct BimodalDist {
  double mean1 = -0.5;
  double stddev1 = 0.15;
  double mean2 = 0.4;
  double stddev2 = 0.2;
  double mix = 0.5;
};

using Distribution = std::variant<NormalDist, UniformDist, BimodalDist>;

std::string_view distribution_name(const Distribution& d);

/// Deterministic for a given seed (see Rng). Rejects invalid parameters.
SampleBatch synth(const Distribution& dist, std::size_t n, std::uint64_t seed);

}  // namespace histlayer
