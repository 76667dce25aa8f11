#pragma once

#include <cstddef>
#include <string_view>
#include <variant>
#include <vector>

#include "histlayer/core_types.hpp"

namespace histlayer {

enum class KernelKind { histlayer, lbf, rbf, kde };

std::string_view to_string(KernelKind k);
KernelKind parse_kernel_kind(std::string_view s);

/// Vote v = Phi(b^(omega - |x - mu|)); zero outside the open bin, in (1, b^omega] inside.
struct HistLayerParams {
  double base = 1.01;
  friend bool operator==(const HistLayerParams&, const HistLayerParams&) = default;
};

/// Triangular vote max(0, 1 - w_k |x - mu_k|); one slope per bin.
struct LbfParams {
  std::vector<double> slopes;
  friend bool operator==(const LbfParams&, const LbfParams&) = default;
};

/// Gaussian vote exp(-gamma_k^2 (x - mu_k)^2); one inverse width per bin.
struct RbfParams {
  std::vector<double> gammas;
  friend bool operator==(const RbfParams&, const RbfParams&) = default;
};

/// Sigmoid-difference vote sigma((x-mu+omega)/B) - sigma((x-mu-omega)/B); shared bandwidth.
struct KdeParams {
  double bandwidth = 0.02;
  friend bool operator==(const KdeParams&, const KdeParams&) = default;
};

using KernelParams = std::variant<HistLayerParams, LbfParams, RbfParams, KdeParams>;

/// A vote function plus its parameters. Construction validates positivity
/// (b > 1, w_k > 0, gamma_k > 0, B > 0); per-bin lengths are checked against
/// a BinSpec by `check_bins`.
class Kernel {
 public:
  explicit Kernel(KernelParams params);

  KernelKind kind() const { return static_cast<KernelKind>(params_.index()); }
  const KernelParams& params() const { return params_; }

  /// The scalar parameter seen by bin k (b, w_k, gamma_k or B).
  double param_for_bin(std::size_t k) const;

  void check_bins(const BinSpec& bins) const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  KernelParams params_;
};

/// Vote value and partials. d_dparam is with respect to the kernel's own
/// parameter for the bin (b, w_k, gamma_k or B).
struct VoteGradient {
  double value = 0.0;
  double d_dx = 0.0;
  double d_dmu = 0.0;
  double d_domega = 0.0;
  double d_dparam = 0.0;
};

/// "relu at 1": z if z > 1, else 0.
double threshold_phi(double z);

VoteGradient histlayer_vote(double x, double mu, double omega, double base);
VoteGradient lbf_vote(double x, double mu, double slope);
VoteGradient rbf_vote(double x, double mu, double gamma);
VoteGradient kde_vote(double x, double mu, double omega, double bandwidth);

/// Dispatch on kind with a scalar parameter; omega is ignored by lbf and rbf.
VoteGradient evaluate_vote(KernelKind kind, double x, double mu, double omega, double param);

VoteGradient vote(const Kernel& kernel, const BinSpec& bins, std::size_t k, double x);

/// Partials of the aggregated histogram. Scaled by 1/N under probability normalization.
struct HistogramGradients {
  std::size_t n_samples = 0;
  std::size_t n_bins = 0;
  /// dh_k/dx_i, row-major by sample: index i * n_bins + k.
  std::vector<double> d_dx;
  std::vector<double> d_dmu;
  std::vector<double> d_domega;
  std::vector<double> d_dparam;

  double dx(std::size_t i, std::size_t k) const { return d_dx[i * n_bins + k]; }
};

struct SoftHistogramResult {
  HistogramVector histogram;
  HistogramGradients gradients;
};

/// h_k = sum_i vote_k(x_i), accumulated in ascending sample order.
HistogramVector soft_histogram(const SampleBatch& samples, const BinSpec& bins,
                               const Kernel& kernel,
                               Normalization normalization = Normalization::counts);

SoftHistogramResult soft_histogram_with_gradients(const SampleBatch& samples,
                                                  const BinSpec& bins, const Kernel& kernel,
                                                  Normalization normalization);

/// Defaults tied to the bin geometry:
///   histlayer b = 1.01
///   lbf       w_k = 1 / omega_k         (hat vanishing at the bin edges)
///   rbf       gamma_k = sqrt(ln 2) / omega_k   (half maximum at the edges)
///   kde       B = omega / 2.5           (requires uniform bins)
Kernel default_kernel(KernelKind kind, const BinSpec& bins);

}  // namespace histlayer
