#include "histlayer/kernels.hpp"

#include <cmath>
#include <string>
#include <type_traits>

namespace histlayer {

std::string_view to_string(KernelKind k) {
  switch (k) {
    case KernelKind::histlayer: return "histlayer";
    case KernelKind::lbf: return "lbf";
    case KernelKind::rbf: return "rbf";
    case KernelKind::kde: return "kde";
  }
  return "?";
}

KernelKind parse_kernel_kind(std::string_view s) {
  if (s == "histlayer") return KernelKind::histlayer;
  if (s == "lbf") return KernelKind::lbf;
  if (s == "rbf") return KernelKind::rbf;
  if (s == "kde") return KernelKind::kde;
  throw ValidationError("unknown kernel '" + std::string(s) + "'");
}

namespace {

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0))
    throw ValidationError(std::string(what) + " must be finite and positive");
}

void require_per_bin(const std::vector<double>& v, const BinSpec& bins, const char* what) {
  if (v.size() != bins.size())
    throw ValidationError(std::string(what) + ": expected " + std::to_string(bins.size()) +
                          " values, got " + std::to_string(v.size()));
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double sigmoid_prime(double t) {
  const double e = std::exp(-std::abs(t));
  return e / ((1.0 + e) * (1.0 + e));
}

}  // namespace

Kernel::Kernel(KernelParams params) : params_(std::move(params)) {
  std::visit(
      [](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HistLayerParams>) {
          if (!std::isfinite(p.base) || !(p.base > 1.0))
            throw ValidationError("histlayer base must be finite and > 1");
        } else if constexpr (std::is_same_v<P, LbfParams>) {
          for (double w : p.slopes) require_positive(w, "lbf slope");
        } else if constexpr (std::is_same_v<P, RbfParams>) {
          for (double g : p.gammas) require_positive(g, "rbf gamma");
        } else {
          require_positive(p.bandwidth, "kde bandwidth");
        }
      },
      params_);
}

double Kernel::param_for_bin(std::size_t k) const {
  return std::visit(
      [k](const auto& p) -> double {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, HistLayerParams>) return p.base;
        else if constexpr (std::is_same_v<P, LbfParams>) return p.slopes.at(k);
        else if constexpr (std::is_same_v<P, RbfParams>) return p.gammas.at(k);
        else return p.bandwidth;
      },
      params_);
}

void Kernel::check_bins(const BinSpec& bins) const {
  if (const auto* p = std::get_if<LbfParams>(&params_)) require_per_bin(p->slopes, bins, "lbf slopes");
  if (const auto* p = std::get_if<RbfParams>(&params_)) require_per_bin(p->gammas, bins, "rbf gammas");
}

double threshold_phi(double z) { return z > 1.0 ? z : 0.0; }

VoteGradient histlayer_vote(double x, double mu, double omega, double base) {
  const double offset = x - mu;
  const double margin = omega - std::abs(offset);
  VoteGradient g;
  g.value = threshold_phi(std::pow(base, margin));
  if (g.value == 0.0) return g;
  const double log_base = std::log(base);
  g.d_dx = -sign(offset) * log_base * g.value;
  g.d_dmu = -g.d_dx;
  g.d_domega = log_base * g.value;
  g.d_dparam = g.value * margin / base;
  return g;
}

VoteGradient lbf_vote(double x, double mu, double slope) {
  const double offset = x - mu;
  VoteGradient g;
  const double v = 1.0 - slope * std::abs(offset);
  if (!(v > 0.0)) return g;
  g.value = v;
  g.d_dx = -slope * sign(offset);
  g.d_dmu = -g.d_dx;
  g.d_dparam = -std::abs(offset);
  return g;
}

VoteGradient rbf_vote(double x, double mu, double gamma) {
  const double offset = x - mu;
  VoteGradient g;
  g.value = std::exp(-gamma * gamma * offset * offset);
  g.d_dx = -2.0 * gamma * gamma * offset * g.value;
  g.d_dmu = -g.d_dx;
  g.d_dparam = -2.0 * gamma * offset * offset * g.value;
  return g;
}

VoteGradient kde_vote(double x, double mu, double omega, double bandwidth) {
  const double offset = x - mu;
  const double upper = (offset + omega) / bandwidth;
  const double lower = (offset - omega) / bandwidth;
  VoteGradient g;
  // sigma(u) - sigma(l) == sigma(-l) - sigma(-u); the right side keeps
  // precision when both sigmoids saturate near 1.
  g.value = lower > 0.0 ? sigmoid(-lower) - sigmoid(-upper) : sigmoid(upper) - sigmoid(lower);
  const double su = sigmoid_prime(upper);
  const double sl = sigmoid_prime(lower);
  g.d_dx = (su - sl) / bandwidth;
  g.d_dmu = -g.d_dx;
  g.d_domega = (su + sl) / bandwidth;
  g.d_dparam = -((offset + omega) * su - (offset - omega) * sl) / (bandwidth * bandwidth);
  return g;
}

VoteGradient evaluate_vote(KernelKind kind, double x, double mu, double omega, double param) {
  switch (kind) {
    case KernelKind::histlayer: return histlayer_vote(x, mu, omega, param);
    case KernelKind::lbf: return lbf_vote(x, mu, param);
    case KernelKind::rbf: return rbf_vote(x, mu, param);
    case KernelKind::kde: return kde_vote(x, mu, omega, param);
  }
  return {};
}

VoteGradient vote(const Kernel& kernel, const BinSpec& bins, std::size_t k, double x) {
  return evaluate_vote(kernel.kind(), x, bins.center(k), bins.half_width(k),
                       kernel.param_for_bin(k));
}

namespace {

SoftHistogramResult accumulate(const SampleBatch& samples, const BinSpec& bins,
                               const Kernel& kernel, Normalization normalization,
                               bool want_gradients) {
  kernel.check_bins(bins);
  const std::size_t n = samples.size();
  const std::size_t nb = bins.size();

  SoftHistogramResult r;
  r.histogram.values.assign(nb, 0.0);
  r.histogram.normalization = normalization;
  r.histogram.n_samples = n;

  auto& grads = r.gradients;
  if (want_gradients) {
    grads.n_samples = n;
    grads.n_bins = nb;
    grads.d_dx.assign(n * nb, 0.0);
    grads.d_dmu.assign(nb, 0.0);
    grads.d_domega.assign(nb, 0.0);
    grads.d_dparam.assign(nb, 0.0);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double x = samples.values[i];
    for (std::size_t k = 0; k < nb; ++k) {
      const VoteGradient v = vote(kernel, bins, k, x);
      r.histogram.values[k] += v.value;
      if (want_gradients) {
        grads.d_dx[i * nb + k] = v.d_dx;
        grads.d_dmu[k] += v.d_dmu;
        grads.d_domega[k] += v.d_domega;
        grads.d_dparam[k] += v.d_dparam;
      }
    }
  }

  if (normalization == Normalization::probability && n > 0) {
    const auto nd = static_cast<double>(n);
    for (double& h : r.histogram.values) h /= nd;
    if (want_gradients) {
      for (auto* vec : {&grads.d_dx, &grads.d_dmu, &grads.d_domega, &grads.d_dparam})
        for (double& d : *vec) d /= nd;
    }
  }
  return r;
}

}  // namespace

HistogramVector soft_histogram(const SampleBatch& samples, const BinSpec& bins,
                               const Kernel& kernel, Normalization normalization) {
  return accumulate(samples, bins, kernel, normalization, false).histogram;
}

SoftHistogramResult soft_histogram_with_gradients(const SampleBatch& samples,
                                                  const BinSpec& bins, const Kernel& kernel,
                                                  Normalization normalization) {
  return accumulate(samples, bins, kernel, normalization, true);
}

Kernel default_kernel(KernelKind kind, const BinSpec& bins) {
  const std::size_t nb = bins.size();
  switch (kind) {
    case KernelKind::histlayer:
      return Kernel(HistLayerParams{1.01});
    case KernelKind::lbf: {
      LbfParams p;
      p.slopes.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) p.slopes[k] = 1.0 / bins.half_width(k);
      return Kernel(std::move(p));
    }
    case KernelKind::rbf: {
      RbfParams p;
      p.gammas.resize(nb);
      const double root_ln2 = std::sqrt(std::log(2.0));
      for (std::size_t k = 0; k < nb; ++k) p.gammas[k] = root_ln2 / bins.half_width(k);
      return Kernel(std::move(p));
    }
    case KernelKind::kde:
      if (!bins.is_uniform(1e-9))
        throw ValidationError("kde default bandwidth needs uniform bins; pass --bandwidth");
      return Kernel(KdeParams{bins.half_width(0) / 2.5});
  }
  throw ValidationError("unknown kernel kind");
}

}  // namespace histlayer
