#include "histlayer/train.hpp"

#include <cmath>
#include <string>

#include "histlayer/oracle.hpp"
#include "histlayer/random.hpp"

namespace histlayer {

std::string_view to_string(GeneratorKind k) { return k == GeneratorKind::affine ? "affine" : "mlp"; }

GeneratorKind parse_generator_kind(std::string_view s) {
  if (s == "affine") return GeneratorKind::affine;
  if (s == "mlp") return GeneratorKind::mlp;
  throw ValidationError("unknown generator '" + std::string(s) + "'");
}

std::string_view to_string(LossKind k) { return k == LossKind::l1 ? "l1" : "l2"; }

LossKind parse_loss_kind(std::string_view s) {
  if (s == "l1") return LossKind::l1;
  if (s == "l2") return LossKind::l2;
  throw ValidationError("unknown loss '" + std::string(s) + "'");
}

std::string_view to_string(NoiseDistribution d) {
  return d == NoiseDistribution::uniform ? "uniform" : "normal";
}

NoiseDistribution parse_noise_distribution(std::string_view s) {
  if (s == "uniform") return NoiseDistribution::uniform;
  if (s == "normal") return NoiseDistribution::normal;
  throw ValidationError("unknown noise distribution '" + std::string(s) + "'");
}

std::string_view to_string(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer_kind(std::string_view s) {
  if (s == "sgd") return OptimizerKind::sgd;
  if (s == "adam") return OptimizerKind::adam;
  throw ValidationError("unknown optimizer '" + std::string(s) + "'");
}

// Generator

Generator::Generator(GeneratorKind kind, std::size_t hidden, std::vector<double> params)
    : kind_(kind), hidden_(hidden), params_(std::move(params)) {
  for (double p : params_)
    if (!std::isfinite(p)) throw ValidationError("generator parameters must be finite");
}

Generator Generator::affine(double scale, double offset) {
  return Generator(GeneratorKind::affine, 0, {scale, offset});
}

Generator Generator::mlp(std::vector<double> w1, std::vector<double> b1, std::vector<double> w2,
                         double b2) {
  const std::size_t h = w1.size();
  if (h == 0) throw ValidationError("mlp generator needs at least one hidden unit");
  if (b1.size() != h || w2.size() != h)
    throw ValidationError("mlp generator: W1, b1 and W2 must have equal length");
  std::vector<double> p;
  p.reserve(3 * h + 1);
  p.insert(p.end(), w1.begin(), w1.end());
  p.insert(p.end(), b1.begin(), b1.end());
  p.insert(p.end(), w2.begin(), w2.end());
  p.push_back(b2);
  return Generator(GeneratorKind::mlp, h, std::move(p));
}

Generator Generator::mlp_random(std::size_t hidden, std::uint64_t seed) {
  if (hidden == 0) throw ValidationError("mlp generator needs at least one hidden unit");
  Rng rng(seed);
  std::vector<double> w1(hidden), b1(hidden), w2(hidden);
  const double out_scale = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (std::size_t j = 0; j < hidden; ++j) {
    w1[j] = rng.standard_normal();
    b1[j] = 0.5 * rng.standard_normal();
    w2[j] = out_scale * rng.standard_normal();
  }
  return mlp(std::move(w1), std::move(b1), std::move(w2), 0.0);
}

void Generator::set_params(std::span<const double> p) {
  if (p.size() != params_.size()) throw ValidationError("generator parameter count mismatch");
  for (double v : p)
    if (!std::isfinite(v)) throw ValidationError("generator parameters must be finite");
  params_.assign(p.begin(), p.end());
}

double Generator::forward(double z, std::span<double> dy_dparams) const {
  if (kind_ == GeneratorKind::affine) {
    dy_dparams[0] = z;
    dy_dparams[1] = 1.0;
    return params_[0] * z + params_[1];
  }
  const std::size_t h = hidden_;
  const double* w1 = params_.data();
  const double* b1 = w1 + h;
  const double* w2 = b1 + h;
  double y = params_[3 * h];
  for (std::size_t j = 0; j < h; ++j) {
    const double a = std::tanh(w1[j] * z + b1[j]);
    const double da = 1.0 - a * a;
    y += w2[j] * a;
    dy_dparams[j] = w2[j] * da * z;
    dy_dparams[h + j] = w2[j] * da;
    dy_dparams[2 * h + j] = a;
  }
  dy_dparams[3 * h] = 1.0;
  return y;
}

double Generator::operator()(double z) const {
  std::vector<double> scratch(params_.size());
  return forward(z, scratch);
}

GeneratorOutput generator_forward(const Generator& g, double z) {
  GeneratorOutput out;
  out.dy_dparams.resize(g.n_params());
  out.y = g.forward(z, out.dy_dparams);
  return out;
}

LossResult histogram_loss(const HistogramVector& h, const HistogramVector& target, LossKind kind) {
  if (h.size() != target.size()) throw ValidationError("histogram_loss: length mismatch");
  if (h.normalization != target.normalization)
    throw ValidationError("histogram_loss: normalization mismatch");
  LossResult r;
  r.d_dh.resize(h.size());
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double diff = h.values[k] - target.values[k];
    if (kind == LossKind::l2) {
      r.loss += diff * diff;
      r.d_dh[k] = 2.0 * diff;
    } else {
      r.loss += std::abs(diff);
      r.d_dh[k] = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
    }
  }
  return r;
}

std::vector<double> draw_noise(const NoiseSpec& spec) {
  Rng rng(spec.seed);
  std::vector<double> z(spec.n);
  for (double& v : z)
    v = spec.distribution == NoiseDistribution::uniform ? rng.uniform(-1.0, 1.0)
                                                        : rng.standard_normal();
  return z;
}

Adam::Adam(std::size_t n, const OptimizerConfig& config)
    : config_(config), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = config_.beta1 * m_[i] + (1.0 - config_.beta1) * grads[i];
    v_[i] = config_.beta2 * v_[i] + (1.0 - config_.beta2) * grads[i] * grads[i];
    params[i] -= config_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + config_.epsilon);
  }
}

Objective evaluate_objective(const TrainConfig& config, const Generator& g,
                             std::span<const double> noise) {
  const std::size_t n = noise.size();
  const std::size_t np = g.n_params();

  SampleBatch outputs;
  outputs.provenance = Provenance::synthetic;
  outputs.values.resize(n);
  std::vector<double> dy(n * np);
  for (std::size_t i = 0; i < n; ++i)
    outputs.values[i] = g.forward(noise[i], std::span<double>(dy).subspan(i * np, np));

  const SoftHistogramResult soft = soft_histogram_with_gradients(
      outputs, config.bins, config.kernel, Normalization::probability);
  const LossResult loss = histogram_loss(soft.histogram, config.target, config.loss);

  Objective obj{loss.loss, std::vector<double>(np, 0.0), soft.histogram};
  // d_dx already carries the 1/N of probability normalization.
  for (std::size_t i = 0; i < n; ++i) {
    double dl_dy = 0.0;
    for (std::size_t k = 0; k < config.bins.size(); ++k) dl_dy += loss.d_dh[k] * soft.gradients.dx(i, k);
    for (std::size_t p = 0; p < np; ++p) obj.gradient[p] += dl_dy * dy[i * np + p];
  }
  return obj;
}

namespace {

HistogramVector histlayer_view(const Generator& g, std::span<const double> noise,
                               const BinSpec& bins) {
  SampleBatch out;
  out.provenance = Provenance::synthetic;
  out.values.reserve(noise.size());
  for (double z : noise) out.values.push_back(g(z));
  return soft_histogram(out, bins, Kernel(HistLayerParams{1.01}), Normalization::probability);
}

void require_finite(const Objective& obj, std::size_t step) {
  if (!std::isfinite(obj.loss))
    throw TrainingError("non-finite loss at step " + std::to_string(step));
  for (double g : obj.gradient)
    if (!std::isfinite(g)) throw TrainingError("non-finite gradient at step " + std::to_string(step));
}

}  // namespace

TrainTrace train(const TrainConfig& config, const Generator& g0) {
  if (config.target.normalization != Normalization::probability)
    throw ValidationError("training target must be probability-normalized");
  if (config.target.size() != config.bins.size())
    throw ValidationError("training target length does not match the bins");
  if (config.target.sum() > 1.0 + 1e-9) throw ValidationError("training target sums above 1");
  if (!(config.optimizer.learning_rate >= 0.0) || !std::isfinite(config.optimizer.learning_rate))
    throw ValidationError("learning rate must be finite and non-negative");
  config.kernel.check_bins(config.bins);

  const std::vector<double> noise = draw_noise(config.noise);
  Generator g = g0;
  std::vector<double> params(g.params().begin(), g.params().end());
  Adam adam(params.size(), config.optimizer);

  TrainTrace trace{{}, g0, g0, histlayer_view(g0, noise, config.bins), {}};
  trace.records.reserve(config.optimizer.steps + 1);

  for (std::size_t step = 0;; ++step) {
    const Objective obj = evaluate_objective(config, g, noise);
    require_finite(obj, step);
    double norm2 = 0.0;
    for (double d : obj.gradient) norm2 += d * d;
    trace.records.push_back({step, obj.loss, std::sqrt(norm2)});
    if (step == config.optimizer.steps) break;

    if (config.optimizer.kind == OptimizerKind::adam) {
      adam.step(params, obj.gradient);
    } else {
      for (std::size_t p = 0; p < params.size(); ++p)
        params[p] -= config.optimizer.learning_rate * obj.gradient[p];
    }
    for (double p : params)
      if (!std::isfinite(p))
        throw TrainingError("non-finite parameter after step " + std::to_string(step));
    g.set_params(params);
  }

  trace.final = g;
  trace.final_histogram = histlayer_view(g, noise, config.bins);
  return trace;
}

HistogramVector target_from_generator(const Generator& g, const NoiseSpec& noise,
                                      const BinSpec& bins) {
  SampleBatch out;
  out.provenance = Provenance::synthetic;
  out.seed = noise.seed;
  for (double z : draw_noise(noise)) out.values.push_back(g(z));
  return target_from_samples(out, bins);
}

HistogramVector target_from_samples(const SampleBatch& samples, const BinSpec& bins) {
  return normalize(hard_histogram(samples, bins, BoundaryMode::right_open_edges),
                   Normalization::probability);
}

}  // namespace histlayer
