#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "histlayer/core_types.hpp"

namespace histlayer {

// HistLayer rebuilt from elementary layer operations. Each sample is
// broadcast to K channels (one per bin) and flows through:
//
//   center_shift        1x1 conv, weight 1, bias -mu_k       x - mu_k
//   absolute                                                 |.|
//   negate_plus_width   1x1 conv, weight -1, bias omega_k    omega_k - |.|
//   exponentiate_base_b                                      b^(.)
//   threshold_at_one    relu at 1                            Phi(., 1, 0)
//   pool                sum (or average) over samples

enum class StageKind {
  center_shift,
  absolute,
  negate_plus_width,
  exponentiate_base_b,
  threshold_at_one,
  pool
};

std::string_view to_string(StageKind k);

enum class PoolMode { sum, average };

struct PipelineStage {
  StageKind kind;
  // Per-bin affine parameters, used by the two convolution stages only.
  std::vector<double> weights;
  std::vector<double> biases;
  double base = 0.0;
  PoolMode pool = PoolMode::sum;
};

using Pipeline = std::vector<PipelineStage>;

Pipeline build_pipeline(const BinSpec& bins, double base, PoolMode pool = PoolMode::sum);

/// Pooled output, counts for sum pooling and probability for average pooling.
HistogramVector run_pipeline(const Pipeline& pipeline, const SampleBatch& samples);

/// Per-stage outputs for one sample: result[stage][bin], six stages.
std::vector<std::vector<double>> trace_sample(const Pipeline& pipeline, double x);

struct EquivalenceReport {
  std::size_t n_samples = 0;
  double max_abs_discrepancy = 0.0;
  /// 1e-12 * max(1, N)
  double contract = 0.0;
  bool bitwise_equal = false;
};

/// Pipeline (sum pooling) against the direct histlayer soft histogram in counts.
EquivalenceReport pipeline_equivalence_check(const SampleBatch& samples, const BinSpec& bins,
                                             double base);

}  // namespace histlayer
