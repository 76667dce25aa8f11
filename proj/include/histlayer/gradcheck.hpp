#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "histlayer/core_types.hpp"
#include "histlayer/kernels.hpp"

namespace histlayer {

/// (f(x + eps) - f(x - eps)) / (2 eps)
template <typename F>
double central_difference(F&& f, double x, double eps) {
  return (f(x + eps) - f(x - eps)) / (2.0 * eps);
}

/// Where the test abscissae come from: a Kronecker (golden ratio) sequence over
/// (lo, hi) jittered by seeded uniform noise of at most half a grid cell.
struct SamplingPlan {
  double lo = -1.2;
  double hi = 1.2;
  std::size_t n_points = 1000;
  std::uint64_t seed = 1;

  std::vector<double> points() const;
};

enum class GradCoordinate { x, mu, omega, param };

std::string_view to_string(GradCoordinate c);

struct GradCheckPoint {
  double x = 0.0;
  double mu = 0.0;
  double omega = 0.0;
  double param = 0.0;
  GradCoordinate coordinate = GradCoordinate::x;
  double analytic = 0.0;
  double numeric = 0.0;
};

struct GradCheckReport {
  KernelKind kernel = KernelKind::histlayer;
  /// (x, bin) pairs compared, i.e. not excluded.
  std::size_t n_points = 0;
  /// Compared pairs whose vote value is non-zero.
  std::size_t n_nonzero = 0;
  std::size_t excluded_points = 0;
  double epsilon = 0.0;
  double exclusion_radius = 0.0;
  /// Discrepancy beyond the finite difference's own rounding error, relative.
  double max_rel_error = 0.0;
  /// Plain |a - n| / max(|a|, |n|, 1e-12), for reference.
  double max_raw_rel_error = 0.0;
  GradCheckPoint worst_point;

  bool passed(double tolerance) const { return n_points > 0 && max_rel_error <= tolerance; }
};

/// max(0, |a - n| - rounding_bound) / max(|a|, |n|, 1e-12)
double relative_error(double analytic, double numeric, double rounding_bound = 0.0);

struct FiniteDifference {
  double value = 0.0;
  /// Worst-case rounding error of `value` from evaluating f at t +- eps.
  double rounding_bound = 0.0;
};

/// Central difference plus a bound on its rounding error. Near a flat top
/// (v close to 1) partials below ~1e-10 are not resolvable in double, and
/// the bound keeps them from reading as large relative errors.
FiniteDifference central_difference_with_bound(const std::function<double(double)>& f, double t,
                                               double eps);

/// Whether (x, mu, omega, param) lies within `radius` of a point where the
/// kernel is not differentiable: bin edges and the center for histlayer, the
/// center and the support edge for lbf. rbf and kde have none.
bool near_nondifferentiable(KernelKind kind, double x, double mu, double omega, double param,
                            double radius);

/// Compares every analytic partial of the vote against a central difference,
/// for every plan point against every bin.
GradCheckReport check_kernel(const Kernel& kernel, const BinSpec& bins, const SamplingPlan& plan,
                             double eps = 1e-6, double exclusion_radius = 1e-4);

}  // namespace histlayer
