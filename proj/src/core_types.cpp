#include "histlayer/core_types.hpp"

#include <cmath>
#include <numeric>

namespace histlayer {

BinSpec::BinSpec(std::vector<double> centers, std::vector<double> half_widths)
    : centers_(std::move(centers)), half_widths_(std::move(half_widths)) {
  if (centers_.empty()) throw ValidationError("bin spec needs at least one bin");
  if (centers_.size() != half_widths_.size())
    throw ValidationError("bin spec: centers and half-widths differ in length");
  for (std::size_t k = 0; k < centers_.size(); ++k) {
    if (!std::isfinite(centers_[k]) || !std::isfinite(half_widths_[k]))
      throw ValidationError("bin spec: non-finite value at bin " + std::to_string(k));
    if (!(half_widths_[k] > 0.0))
      throw ValidationError("bin spec: half-width must be positive at bin " + std::to_string(k));
    if (k > 0 && !(centers_[k] > centers_[k - 1]))
      throw ValidationError("bin spec: centers must be strictly increasing at bin " +
                            std::to_string(k));
  }
}

std::vector<double> BinSpec::edges() const {
  std::vector<double> e;
  e.reserve(size() + 1);
  for (std::size_t k = 0; k < size(); ++k) e.push_back(lower_edge(k));
  e.push_back(upper_edge(size() - 1));
  return e;
}

bool BinSpec::is_uniform(double tol) const {
  const double w = half_widths_.front();
  for (std::size_t k = 0; k < size(); ++k) {
    if (std::abs(half_widths_[k] - w) > tol) return false;
    if (k > 0 && std::abs(centers_[k] - centers_[k - 1] - 2.0 * w) > tol) return false;
  }
  return true;
}

std::string_view to_string(Normalization n) {
  return n == Normalization::counts ? "counts" : "probability";
}

Normalization parse_normalization(std::string_view s) {
  if (s == "counts") return Normalization::counts;
  if (s == "probability") return Normalization::probability;
  throw ValidationError("unknown normalization '" + std::string(s) + "'");
}

double HistogramVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

BinSpec make_uniform_bins(double lo, double hi, std::size_t k) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("bin range must be finite");
  if (!(lo < hi)) throw ValidationError("bin range requires lo < hi");
  if (k == 0) throw ValidationError("bin count must be at least 1");

  const double width = (hi - lo) / static_cast<double>(k);
  std::vector<double> centers(k);
  std::vector<double> half_widths(k, width / 2.0);
  for (std::size_t i = 0; i < k; ++i) centers[i] = lo + (static_cast<double>(i) + 0.5) * width;
  return BinSpec(std::move(centers), std::move(half_widths));
}

SampleBatch validate_samples(std::vector<double> raw, Provenance provenance,
                             std::optional<std::uint64_t> seed) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!std::isfinite(raw[i]))
      throw ValidationError("non-finite sample at index " + std::to_string(i));
  }
  return SampleBatch{std::move(raw), provenance, seed};
}

}  // namespace histlayer
