#include "histlayer/synth.hpp"

#include <cmath>
#include <type_traits>

#include "histlayer/random.hpp"

namespace histlayer {

std::string_view distribution_name(const Distribution& d) {
  switch (d.index()) {
    case 0: return "normal";
    case 1: return "uniform";
    default: return "bimodal";
  }
}

namespace {

void check_scale(double mean, double stddev) {
  if (!std::isfinite(mean) || !std::isfinite(stddev) || !(stddev > 0.0))
    throw ValidationError("normal component needs a finite mean and positive stddev");
}

}  // namespace

SampleBatch synth(const Distribution& dist, std::size_t n, std::uint64_t seed) {
  std::visit(
      [](const auto& d) {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, NormalDist>) {
          check_scale(d.mean, d.stddev);
        } else if constexpr (std::is_same_v<D, UniformDist>) {
          if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi))
            throw ValidationError("uniform distribution needs finite lo < hi");
        } else {
          check_scale(d.mean1, d.stddev1);
          check_scale(d.mean2, d.stddev2);
          if (!(d.mix >= 0.0 && d.mix <= 1.0))
            throw ValidationError("bimodal mix must lie in [0, 1]");
        }
      },
      dist);

  Rng rng(seed);
  SampleBatch batch{{}, Provenance::synthetic, seed};
  batch.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::visit(
        [&rng](const auto& d) -> double {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, NormalDist>) {
            return rng.normal(d.mean, d.stddev);
          } else if constexpr (std::is_same_v<D, UniformDist>) {
            return rng.uniform(d.lo, d.hi);
          } else {
            return rng.uniform01() < d.mix ? rng.normal(d.mean1, d.stddev1)
                                           : rng.normal(d.mean2, d.stddev2);
          }
        },
        dist);
    batch.values.push_back(x);
  }
  return batch;
}

}  // namespace histlayer
