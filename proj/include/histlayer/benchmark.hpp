#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "histlayer/core_types.hpp"
#include "histlayer/kernels.hpp"
#include "histlayer/oracle.hpp"

namespace histlayer {

enum class ErrorMetric { sum_abs, mean_abs };

std::string_view to_string(ErrorMetric m);
ErrorMetric parse_error_metric(std::string_view s);

/// sum_k |soft_k - hard_k|, or that divided by K. Shapes and normalizations must match.
double absolute_error(const HistogramVector& soft, const HistogramVector& hard,
                      ErrorMetric metric = ErrorMetric::sum_abs);

struct ErrorRow {
  Kernel kernel;
  /// Error in the report's normalization and metric.
  double absolute_error = 0.0;
  /// Same metric on raw counts; the scale the LBF table entry lives on.
  double counts_error = 0.0;
  /// |h_k - c_k| in the report's normalization.
  std::vector<double> per_bin;
  HistogramVector histogram;
};

/// Over-count bound for HistLayer against the open-interval oracle:
/// sum_abs <= (b^omega_max - 1) * N_in (counts) or * N_in / N (probability).
struct HistLayerBound {
  double base = 0.0;
  std::size_t n_in_range = 0;
  double limit = 0.0;
  double error = 0.0;
  bool holds = true;
};

struct ComparisonOptions {
  BoundaryMode boundary = BoundaryMode::right_open_edges;
  Normalization normalization = Normalization::probability;
  ErrorMetric metric = ErrorMetric::sum_abs;
};

struct ErrorReport {
  ComparisonOptions options;
  std::size_t n_samples = 0;
  BinSpec bins;
  HistogramVector oracle;
  /// Sorted by descending absolute_error.
  std::vector<ErrorRow> rows;
  std::optional<HistLayerBound> histlayer_bound;

  const ErrorRow* find(KernelKind kind) const;
};

/// Per-bin sandwich check c_k <= h_k <= c_k * b^omega_k in counts against
/// the open-interval oracle. Returns the first offending bin, if any.
std::optional<std::size_t> sandwich_violation(const SampleBatch& samples, const BinSpec& bins,
                                              double base);

HistLayerBound histlayer_error_bound(const SampleBatch& samples, const BinSpec& bins, double base,
                                     Normalization normalization);

ErrorReport run_comparison(const SampleBatch& samples, const BinSpec& bins,
                           const std::vector<Kernel>& kernels, const ComparisonOptions& options = {});

/// All four kernels with their geometry defaults, in table order.
std::vector<Kernel> default_kernels(const BinSpec& bins);

}  // namespace histlayer
