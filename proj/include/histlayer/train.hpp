#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "histlayer/core_types.hpp"
#include "histlayer/kernels.hpp"

namespace histlayer {

/// Raised when a loss or a parameter stops being finite.
class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GeneratorKind { affine, mlp };

std::string_view to_string(GeneratorKind k);
GeneratorKind parse_generator_kind(std::string_view s);

/// Scalar noise-to-sample map.
///
/// Parameter layout:
///   affine  [a, b]                      y = a z + b
///   mlp     [W1(H), b1(H), W2(H), b2]   y = sum_j W2_j tanh(W1_j z + b1_j) + b2
class Generator {
 public:
  static Generator affine(double scale, double offset);
  static Generator mlp(std::vector<double> w1, std::vector<double> b1, std::vector<double> w2,
                       double b2);
  /// W1 ~ N(0, 1), b1 ~ N(0, 0.5^2), W2 ~ N(0, 1/H), b2 = 0.
  static Generator mlp_random(std::size_t hidden, std::uint64_t seed);

  GeneratorKind kind() const { return kind_; }
  std::size_t hidden() const { return hidden_; }
  std::span<const double> params() const { return params_; }
  std::size_t n_params() const { return params_.size(); }

  /// Replaces the parameter vector; length must match and values be finite.
  void set_params(std::span<const double> p);

  /// y, writing dy/dtheta into `dy_dparams` (length n_params()).
  double forward(double z, std::span<double> dy_dparams) const;
  double operator()(double z) const;

 private:
  Generator(GeneratorKind kind, std::size_t hidden, std::vector<double> params);

  GeneratorKind kind_;
  std::size_t hidden_;
  std::vector<double> params_;
};

struct GeneratorOutput {
  double y = 0.0;
  std::vector<double> dy_dparams;
};

GeneratorOutput generator_forward(const Generator& g, double z);

enum class LossKind { l1, l2 };

std::string_view to_string(LossKind k);
LossKind parse_loss_kind(std::string_view s);

struct LossResult {
  double loss = 0.0;
  std::vector<double> d_dh;
};

/// l2: sum (h - t)^2; l1: sum |h - t| with sign(0) = 0.
LossResult histogram_loss(const HistogramVector& h, const HistogramVector& target, LossKind kind);

enum class NoiseDistribution { uniform, normal };

std::string_view to_string(NoiseDistribution d);
NoiseDistribution parse_noise_distribution(std::string_view s);

/// uniform on (-1, 1) or standard normal.
struct NoiseSpec {
  NoiseDistribution distribution = NoiseDistribution::uniform;
  std::size_t n = 1000;
  std::uint64_t seed = 7;
};

std::vector<double> draw_noise(const NoiseSpec& spec);

enum class OptimizerKind { sgd, adam };

std::string_view to_string(OptimizerKind k);
OptimizerKind parse_optimizer_kind(std::string_view s);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double learning_rate = 0.02;
  std::size_t steps = 2000;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction; the step counter starts at 1 on the first update.
class Adam {
 public:
  Adam(std::size_t n, const OptimizerConfig& config);
  void step(std::span<double> params, std::span<const double> grads);

 private:
  OptimizerConfig config_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::size_t t_ = 0;
};

struct TrainConfig {
  HistogramVector target;
  NoiseSpec noise;
  Kernel kernel;
  LossKind loss = LossKind::l2;
  OptimizerConfig optimizer;
  BinSpec bins;
};

struct Objective {
  double loss = 0.0;
  std::vector<double> gradient;
  /// Loss-kernel histogram of the generator outputs, probability-normalized.
  HistogramVector histogram;
};

/// Loss and dL/dtheta for a fixed noise batch:
/// dL/dtheta = sum_k dL/dh_k * (1/N) sum_i dv_k/dx(y_i) * dy_i/dtheta.
Objective evaluate_objective(const TrainConfig& config, const Generator& g,
                             std::span<const double> noise);

struct TrainRecord {
  std::size_t step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
};

struct TrainTrace {
  /// steps + 1 entries; entry s is evaluated before the s-th update.
  std::vector<TrainRecord> records;
  Generator initial;
  Generator final;
  /// Generator outputs binned with the histlayer kernel (b = 1.01), probability.
  HistogramVector initial_histogram;
  HistogramVector final_histogram;
};

/// Full-batch descent: one noise batch is drawn and reused at every step.
TrainTrace train(const TrainConfig& config, const Generator& g0);

/// Probability histogram of the generator applied to a seeded noise batch,
/// binned by the hard oracle (right-open edges).
HistogramVector target_from_generator(const Generator& g, const NoiseSpec& noise,
                                      const BinSpec& bins);

/// Probability histogram of raw samples under the hard oracle.
HistogramVector target_from_samples(const SampleBatch& samples, const BinSpec& bins);

}  // namespace histlayer
