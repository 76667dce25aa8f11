#include "histlayer/gradcheck.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "histlayer/random.hpp"

namespace histlayer {

std::vector<double> SamplingPlan::points() const {
  if (!(lo < hi)) throw ValidationError("sampling plan requires lo < hi");
  constexpr double kInvGolden = 0.6180339887498949;
  const double span = hi - lo;
  const double jitter = 0.5 / static_cast<double>(std::max<std::size_t>(n_points, 1));
  Rng rng(seed);
  std::vector<double> xs(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    double u = std::fmod(0.5 + static_cast<double>(i) * kInvGolden, 1.0);
    u = std::clamp(u + rng.uniform(-jitter, jitter), 0.0, 1.0);
    xs[i] = lo + span * u;
  }
  return xs;
}

std::string_view to_string(GradCoordinate c) {
  switch (c) {
    case GradCoordinate::x: return "x";
    case GradCoordinate::mu: return "mu";
    case GradCoordinate::omega: return "omega";
    case GradCoordinate::param: return "param";
  }
  return "?";
}

double relative_error(double analytic, double numeric, double rounding_bound) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-12});
  return std::max(0.0, std::abs(analytic - numeric) - rounding_bound) / scale;
}

FiniteDifference central_difference_with_bound(const std::function<double(double)>& f, double t,
                                               double eps) {
  const double up = f(t + eps);
  const double down = f(t - eps);
  // A few ulps of evaluation error in each of f(t +- eps), amplified by 1/(2 eps).
  constexpr double kUlps = 4.0;
  const double bound =
      kUlps * std::numeric_limits<double>::epsilon() * (std::abs(up) + std::abs(down)) / (2.0 * eps);
  return {(up - down) / (2.0 * eps), bound};
}

bool near_nondifferentiable(KernelKind kind, double x, double mu, double omega, double param,
                            double radius) {
  const double dist = std::abs(x - mu);
  switch (kind) {
    case KernelKind::histlayer:
      return dist < radius || std::abs(dist - omega) < radius;
    case KernelKind::lbf:
      return dist < radius || std::abs(dist - 1.0 / param) < radius;
    case KernelKind::rbf:
    case KernelKind::kde:
      return false;
  }
  return false;
}

GradCheckReport check_kernel(const Kernel& kernel, const BinSpec& bins, const SamplingPlan& plan,
                             double eps, double exclusion_radius) {
  if (!(eps > 0.0)) throw ValidationError("gradcheck eps must be positive");
  if (!(exclusion_radius > eps)) throw ValidationError("gradcheck exclusion radius must exceed eps");
  kernel.check_bins(bins);

  const KernelKind kind = kernel.kind();
  GradCheckReport report;
  report.kernel = kind;
  report.epsilon = eps;
  report.exclusion_radius = exclusion_radius;

  for (const double x : plan.points()) {
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const double mu = bins.center(k);
      const double omega = bins.half_width(k);
      const double param = kernel.param_for_bin(k);
      if (near_nondifferentiable(kind, x, mu, omega, param, exclusion_radius)) {
        ++report.excluded_points;
        continue;
      }
      const VoteGradient g = evaluate_vote(kind, x, mu, omega, param);
      ++report.n_points;
      if (g.value != 0.0) ++report.n_nonzero;

      const std::array<std::pair<GradCoordinate, FiniteDifference>, 4> checks{{
          {GradCoordinate::x,
           central_difference_with_bound(
               [&](double t) { return evaluate_vote(kind, t, mu, omega, param).value; }, x, eps)},
          {GradCoordinate::mu,
           central_difference_with_bound(
               [&](double t) { return evaluate_vote(kind, x, t, omega, param).value; }, mu, eps)},
          {GradCoordinate::omega,
           central_difference_with_bound(
               [&](double t) { return evaluate_vote(kind, x, mu, t, param).value; }, omega, eps)},
          {GradCoordinate::param,
           central_difference_with_bound(
               [&](double t) { return evaluate_vote(kind, x, mu, omega, t).value; }, param, eps)},
      }};
      for (const auto& [coord, fd] : checks) {
        const double analytic = coord == GradCoordinate::x       ? g.d_dx
                                : coord == GradCoordinate::mu    ? g.d_dmu
                                : coord == GradCoordinate::omega ? g.d_domega
                                                                 : g.d_dparam;
        report.max_raw_rel_error =
            std::max(report.max_raw_rel_error, relative_error(analytic, fd.value));
        const double err = relative_error(analytic, fd.value, fd.rounding_bound);
        if (err >= report.max_rel_error) {
          report.max_rel_error = err;
          report.worst_point = {x, mu, omega, param, coord, analytic, fd.value};
        }
      }
    }
  }
  if (report.n_points == 0)
    throw ValidationError("gradcheck: every sampled point was excluded");
  return report;
}

}  // namespace histlayer
