#pragma once

#include <string_view>

#include "histlayer/core_types.hpp"

namespace histlayer {

/// Membership convention for the hard-binning reference.
///   open_interval:    mu_k - omega_k < x < mu_k + omega_k
///   right_open_edges: e_k <= x < e_{k+1}, last bin also takes x == e_{K+1}
/// right_open_edges is the numpy.histogram convention and the default.
enum class BoundaryMode { open_interval, right_open_edges };

std::string_view to_string(BoundaryMode m);
BoundaryMode parse_boundary_mode(std::string_view s);

/// Conventional, non-differentiable histogram. Returns counts.
HistogramVector hard_histogram(const SampleBatch& samples, const BinSpec& bins,
                               BoundaryMode mode = BoundaryMode::right_open_edges);

/// counts -> probability divides by N (N == 0 gives zeros); probability -> counts multiplies back.
HistogramVector normalize(const HistogramVector& h, Normalization target);

}  // namespace histlayer
