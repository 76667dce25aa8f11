#include "histlayer/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "histlayer/kernels.hpp"

namespace histlayer {

std::string_view to_string(StageKind k) {
  switch (k) {
    case StageKind::center_shift: return "center_shift";
    case StageKind::absolute: return "absolute";
    case StageKind::negate_plus_width: return "negate_plus_width";
    case StageKind::exponentiate_base_b: return "exponentiate_base_b";
    case StageKind::threshold_at_one: return "threshold_at_one";
    case StageKind::pool: return "pool";
  }
  return "?";
}

Pipeline build_pipeline(const BinSpec& bins, double base, PoolMode pool) {
  // Validates the base through the kernel's own checks.
  (void)Kernel(HistLayerParams{base});
  const std::size_t nb = bins.size();

  PipelineStage shift{StageKind::center_shift, std::vector<double>(nb, 1.0), {}, 0.0, pool};
  shift.biases.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) shift.biases[k] = -bins.center(k);

  PipelineStage width{StageKind::negate_plus_width, std::vector<double>(nb, -1.0), {}, 0.0, pool};
  width.biases.assign(bins.half_widths().begin(), bins.half_widths().end());

  return {
      shift,
      PipelineStage{StageKind::absolute, {}, {}, 0.0, pool},
      width,
      PipelineStage{StageKind::exponentiate_base_b, {}, {}, base, pool},
      PipelineStage{StageKind::threshold_at_one, {}, {}, 0.0, pool},
      PipelineStage{StageKind::pool, {}, {}, 0.0, pool},
  };
}

namespace {

// Elementwise stages on one channel vector.
void apply_pointwise(const PipelineStage& stage, std::vector<double>& channels) {
  switch (stage.kind) {
    case StageKind::center_shift:
    case StageKind::negate_plus_width:
      for (std::size_t k = 0; k < channels.size(); ++k)
        channels[k] = stage.weights[k] * channels[k] + stage.biases[k];
      break;
    case StageKind::absolute:
      for (double& c : channels) c = std::abs(c);
      break;
    case StageKind::exponentiate_base_b:
      for (double& c : channels) c = std::pow(stage.base, c);
      break;
    case StageKind::threshold_at_one:
      for (double& c : channels) c = threshold_phi(c);
      break;
    case StageKind::pool:
      break;
  }
}

void check_shape(const Pipeline& pipeline) {
  if (pipeline.size() != 6 || pipeline.back().kind != StageKind::pool)
    throw ValidationError("pipeline must have six stages ending in pool");
}

}  // namespace

HistogramVector run_pipeline(const Pipeline& pipeline, const SampleBatch& samples) {
  check_shape(pipeline);
  const std::size_t nb = pipeline.front().biases.size();
  const PoolMode pool = pipeline.back().pool;

  HistogramVector out;
  out.values.assign(nb, 0.0);
  out.n_samples = samples.size();
  out.normalization = pool == PoolMode::sum ? Normalization::counts : Normalization::probability;

  std::vector<double> channels(nb);
  for (const double x : samples.values) {
    std::fill(channels.begin(), channels.end(), x);
    for (std::size_t s = 0; s + 1 < pipeline.size(); ++s) apply_pointwise(pipeline[s], channels);
    for (std::size_t k = 0; k < nb; ++k) out.values[k] += channels[k];
  }
  if (pool == PoolMode::average && !samples.empty()) {
    const auto n = static_cast<double>(samples.size());
    for (double& v : out.values) v /= n;
  }
  return out;
}

std::vector<std::vector<double>> trace_sample(const Pipeline& pipeline, double x) {
  check_shape(pipeline);
  const std::size_t nb = pipeline.front().biases.size();
  std::vector<std::vector<double>> trace;
  std::vector<double> channels(nb, x);
  for (std::size_t s = 0; s + 1 < pipeline.size(); ++s) {
    apply_pointwise(pipeline[s], channels);
    trace.push_back(channels);
  }
  // Pooling over a single sample is the identity under either mode.
  trace.push_back(channels);
  return trace;
}

EquivalenceReport pipeline_equivalence_check(const SampleBatch& samples, const BinSpec& bins,
                                             double base) {
  const HistogramVector staged = run_pipeline(build_pipeline(bins, base, PoolMode::sum), samples);
  const HistogramVector direct =
      soft_histogram(samples, bins, Kernel(HistLayerParams{base}), Normalization::counts);

  EquivalenceReport r;
  r.n_samples = samples.size();
  r.contract = 1e-12 * std::max<double>(1.0, static_cast<double>(samples.size()));
  r.bitwise_equal = staged.values == direct.values;
  for (std::size_t k = 0; k < bins.size(); ++k)
    r.max_abs_discrepancy =
        std::max(r.max_abs_discrepancy, std::abs(staged.values[k] - direct.values[k]));
  return r;
}

}  // namespace histlayer
