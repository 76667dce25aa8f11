#include "histlayer/oracle.hpp"

#include <algorithm>
#include <string>

namespace histlayer {

std::string_view to_string(BoundaryMode m) {
  return m == BoundaryMode::open_interval ? "open" : "right_open";
}

BoundaryMode parse_boundary_mode(std::string_view s) {
  if (s == "open" || s == "open_interval") return BoundaryMode::open_interval;
  if (s == "right_open" || s == "right_open_edges") return BoundaryMode::right_open_edges;
  throw ValidationError("unknown boundary mode '" + std::string(s) + "'");
}

namespace {

// Bins may be non-contiguous or overlapping when assembled by hand, so every
// bin is tested; K is small enough that this costs nothing next to I/O.
bool in_bin(double x, const BinSpec& bins, std::size_t k, BoundaryMode mode) {
  const double lo = bins.lower_edge(k);
  const double hi = bins.upper_edge(k);
  if (mode == BoundaryMode::open_interval) return lo < x && x < hi;
  if (k + 1 == bins.size()) return lo <= x && x <= hi;
  return lo <= x && x < hi;
}

}  // namespace

HistogramVector hard_histogram(const SampleBatch& samples, const BinSpec& bins,
                               BoundaryMode mode) {
  HistogramVector h;
  h.values.assign(bins.size(), 0.0);
  h.normalization = Normalization::counts;
  h.n_samples = samples.size();
  for (const double x : samples.values) {
    for (std::size_t k = 0; k < bins.size(); ++k) {
      if (in_bin(x, bins, k, mode)) h.values[k] += 1.0;
    }
  }
  return h;
}

HistogramVector normalize(const HistogramVector& h, Normalization target) {
  if (h.normalization == target) return h;
  HistogramVector out = h;
  out.normalization = target;
  const auto n = static_cast<double>(h.n_samples);
  if (target == Normalization::probability) {
    if (h.n_samples == 0) {
      std::fill(out.values.begin(), out.values.end(), 0.0);
    } else {
      for (double& v : out.values) v /= n;
    }
  } else {
    for (double& v : out.values) v *= n;
  }
  return out;
}

}  // namespace histlayer
