#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace histlayer {

/// Raised for any rejected input: bad bin geometry, non-finite samples,
/// mismatched histogram shapes, malformed files.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// K bins described by centers and half-widths; bin k is (mu_k - omega_k, mu_k + omega_k).
class BinSpec {
 public:
  /// Validates K >= 1, finite values, omega_k > 0 and strictly increasing centers.
  BinSpec(std::vector<double> centers, std::vector<double> half_widths);

  std::size_t size() const { return centers_.size(); }
  std::span<const double> centers() const { return centers_; }
  std::span<const double> half_widths() const { return half_widths_; }
  double center(std::size_t k) const { return centers_[k]; }
  double half_width(std::size_t k) const { return half_widths_[k]; }

  double lower_edge(std::size_t k) const { return centers_[k] - half_widths_[k]; }
  double upper_edge(std::size_t k) const { return centers_[k] + half_widths_[k]; }

  /// Edges e_1..e_{K+1}; only meaningful for contiguous bins.
  std::vector<double> edges() const;

  /// True when every half-width is equal and spacing is exactly 2*omega up to `tol`.
  bool is_uniform(double tol = 1e-12) const;

  friend bool operator==(const BinSpec&, const BinSpec&) = default;

 private:
  std::vector<double> centers_;
  std::vector<double> half_widths_;
};

enum class Normalization { counts, probability };

std::string_view to_string(Normalization n);
Normalization parse_normalization(std::string_view s);

struct HistogramVector {
  std::vector<double> values;
  Normalization normalization = Normalization::counts;
  std::size_t n_samples = 0;

  std::size_t size() const { return values.size(); }
  double sum() const;

  friend bool operator==(const HistogramVector&, const HistogramVector&) = default;
};

enum class Provenance { file, synthetic };

struct SampleBatch {
  std::vector<double> values;
  Provenance provenance = Provenance::file;
  std::optional<std::uint64_t> seed;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
};

/// K equal bins of width (hi - lo) / K covering [lo, hi].
BinSpec make_uniform_bins(double lo, double hi, std::size_t k);

/// Rejects the first non-finite value, naming its index.
SampleBatch validate_samples(std::vector<double> raw,
                             Provenance provenance = Provenance::file,
                             std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace histlayer
