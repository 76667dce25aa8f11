#include "histlayer/benchmark.hpp"

#include <algorithm>
#include <cmath>

namespace histlayer {

std::string_view to_string(ErrorMetric m) {
  return m == ErrorMetric::sum_abs ? "sum_abs" : "mean_abs";
}

ErrorMetric parse_error_metric(std::string_view s) {
  if (s == "sum_abs") return ErrorMetric::sum_abs;
  if (s == "mean_abs") return ErrorMetric::mean_abs;
  throw ValidationError("unknown metric '" + std::string(s) + "'");
}

double absolute_error(const HistogramVector& soft, const HistogramVector& hard, ErrorMetric metric) {
  if (soft.size() != hard.size())
    throw ValidationError("absolute_error: histograms differ in length");
  if (soft.normalization != hard.normalization)
    throw ValidationError("absolute_error: histograms differ in normalization");
  double sum = 0.0;
  for (std::size_t k = 0; k < soft.size(); ++k) sum += std::abs(soft.values[k] - hard.values[k]);
  if (metric == ErrorMetric::mean_abs && soft.size() > 0) sum /= static_cast<double>(soft.size());
  return sum;
}

const ErrorRow* ErrorReport::find(KernelKind kind) const {
  for (const auto& row : rows)
    if (row.kernel.kind() == kind) return &row;
  return nullptr;
}

std::optional<std::size_t> sandwich_violation(const SampleBatch& samples, const BinSpec& bins,
                                              double base) {
  const HistogramVector hard = hard_histogram(samples, bins, BoundaryMode::open_interval);
  const HistogramVector soft = soft_histogram(samples, bins, Kernel(HistLayerParams{base}));
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const double c = hard.values[k];
    const double h = soft.values[k];
    if (!(c <= h && h <= c * std::pow(base, bins.half_width(k)))) return k;
  }
  return std::nullopt;
}

HistLayerBound histlayer_error_bound(const SampleBatch& samples, const BinSpec& bins, double base,
                                     Normalization normalization) {
  const HistogramVector hard =
      normalize(hard_histogram(samples, bins, BoundaryMode::open_interval), normalization);
  const HistogramVector soft =
      soft_histogram(samples, bins, Kernel(HistLayerParams{base}), normalization);
  const HistogramVector counts = hard_histogram(samples, bins, BoundaryMode::open_interval);

  HistLayerBound b;
  b.base = base;
  b.n_in_range = static_cast<std::size_t>(counts.sum());
  const double omega_max = *std::max_element(bins.half_widths().begin(), bins.half_widths().end());
  b.limit = (std::pow(base, omega_max) - 1.0) * static_cast<double>(b.n_in_range);
  if (normalization == Normalization::probability && !samples.empty())
    b.limit /= static_cast<double>(samples.size());
  b.error = absolute_error(soft, hard, ErrorMetric::sum_abs);
  b.holds = b.error <= b.limit;
  return b;
}

ErrorReport run_comparison(const SampleBatch& samples, const BinSpec& bins,
                           const std::vector<Kernel>& kernels, const ComparisonOptions& options) {
  if (kernels.empty()) throw ValidationError("run_comparison needs at least one kernel");

  const HistogramVector oracle_counts = hard_histogram(samples, bins, options.boundary);
  ErrorReport report{options, samples.size(), bins,
                     normalize(oracle_counts, options.normalization), {}, std::nullopt};

  for (const Kernel& kernel : kernels) {
    const HistogramVector counts = soft_histogram(samples, bins, kernel, Normalization::counts);
    ErrorRow row{kernel, 0.0, 0.0, {}, normalize(counts, options.normalization)};
    row.absolute_error = absolute_error(row.histogram, report.oracle, options.metric);
    row.counts_error = absolute_error(counts, oracle_counts, options.metric);
    row.per_bin.resize(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k)
      row.per_bin[k] = std::abs(row.histogram.values[k] - report.oracle.values[k]);
    report.rows.push_back(std::move(row));

    if (const auto* hp = std::get_if<HistLayerParams>(&kernel.params()); hp && !report.histlayer_bound)
      report.histlayer_bound = histlayer_error_bound(samples, bins, hp->base, options.normalization);
  }

  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ErrorRow& a, const ErrorRow& b) { return a.absolute_error > b.absolute_error; });
  return report;
}

std::vector<Kernel> default_kernels(const BinSpec& bins) {
  return {default_kernel(KernelKind::lbf, bins), default_kernel(KernelKind::rbf, bins),
          default_kernel(KernelKind::kde, bins), default_kernel(KernelKind::histlayer, bins)};
}

}  // namespace histlayer
