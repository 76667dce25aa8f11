#include <doctest.h>

#include <cmath>
#include <random>

#include "histlayer/kernels.hpp"
#include "histlayer/oracle.hpp"
#include "histlayer/synth.hpp"

using namespace histlayer;

namespace {

// Values computed with mpmath at 40 digits.
constexpr double kBasePowHalfBin = 1.000497640324540507097362781950976844588;     // 1.01^0.05
constexpr double kBasePowQuarterBin = 1.000248789214233694039227027891599729998;  // 1.01^0.025
constexpr double kSigma5MinusSigma0 = 0.4933071490757151444406380196186748196063;

double fd(auto&& f, double x, double eps = 1e-6) { return (f(x + eps) - f(x - eps)) / (2 * eps); }

}  // namespace

TEST_CASE("threshold_phi is a relu at one") {
  CHECK(threshold_phi(1.0004) == 1.0004);
  CHECK(threshold_phi(1.0) == 0.0);
  CHECK(threshold_phi(0.97) == 0.0);
  CHECK(threshold_phi(-3.0) == 0.0);
  CHECK(threshold_phi(std::nextafter(1.0, 2.0)) == std::nextafter(1.0, 2.0));
}

TEST_CASE("histlayer_vote examples") {
  const VoteGradient center = histlayer_vote(0.3, 0.3, 0.05, 1.01);
  CHECK(center.value == doctest::Approx(kBasePowHalfBin).epsilon(1e-15));
  CHECK(center.d_dx == 0.0);
  CHECK(center.d_dmu == 0.0);

  // Exactly representable boundary: 0.5 + 0.25.
  const VoteGradient edge = histlayer_vote(0.75, 0.5, 0.25, 1.01);
  CHECK(edge.value == 0.0);
  CHECK(edge.d_dx == 0.0);
  CHECK(edge.d_domega == 0.0);

  const VoteGradient outside = histlayer_vote(0.6, 0.5, 0.05, 1.01);
  CHECK(outside.value == 0.0);
  CHECK(outside.d_dx == 0.0);
  CHECK(outside.d_dmu == 0.0);
  CHECK(outside.d_domega == 0.0);
  CHECK(outside.d_dparam == 0.0);

  const VoteGradient half = histlayer_vote(0.025, 0.0, 0.05, 1.01);
  CHECK(half.value == doctest::Approx(kBasePowQuarterBin).epsilon(1e-15));
  CHECK(half.d_dx == doctest::Approx(-std::log(1.01) * half.value).epsilon(1e-14));
  const double numeric = fd([](double x) { return histlayer_vote(x, 0.0, 0.05, 1.01).value; }, 0.025);
  CHECK(half.d_dx == doctest::Approx(numeric).epsilon(1e-7));
  CHECK(half.d_domega == doctest::Approx(std::log(1.01) * half.value).epsilon(1e-14));
  CHECK(half.d_dparam == doctest::Approx(half.value * 0.025 / 1.01).epsilon(1e-14));

  // Left of the center the x-gradient flips sign.
  const VoteGradient left = histlayer_vote(-0.025, 0.0, 0.05, 1.01);
  CHECK(left.d_dx == doctest::Approx(std::log(1.01) * left.value).epsilon(1e-14));
}

TEST_CASE("histlayer vote range over a randomized grid") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ux(-3, 3), uw(1e-3, 1.0), ub(1.0001, 2.0);
  for (int i = 0; i < 20000; ++i) {
    const double x = ux(rng), mu = ux(rng), omega = uw(rng), b = ub(rng);
    const VoteGradient v = histlayer_vote(x, mu, omega, b);
    const bool inside = std::abs(x - mu) < omega;
    if (v.value == 0.0) {
      CHECK(v.d_dx == 0.0);
      CHECK(v.d_dmu == 0.0);
      CHECK(v.d_domega == 0.0);
      CHECK(v.d_dparam == 0.0);
    } else {
      CHECK(v.value > 1.0);
      CHECK(v.value <= std::pow(b, omega));
      CHECK(inside);
    }
  }
}

TEST_CASE("lbf_vote examples") {
  CHECK(lbf_vote(0.2, 0.2, 10).value == 1.0);
  CHECK(lbf_vote(0.5, 0.25, 4).value == 0.0);  // mu + 1/w, exact
  const VoteGradient v = lbf_vote(0.05, 0.0, 10);
  CHECK(v.value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(v.d_dx == -10.0);
  CHECK(v.d_dmu == 10.0);
  CHECK(v.d_dparam == doctest::Approx(-0.05).epsilon(1e-15));
  CHECK(v.d_domega == 0.0);
  const VoteGradient far = lbf_vote(3.0, 0.0, 10);
  CHECK(far.value == 0.0);
  CHECK(far.d_dx == 0.0);
  CHECK(far.d_dparam == 0.0);
}

TEST_CASE("rbf_vote examples") {
  CHECK(rbf_vote(0.4, 0.4, 7.0).value == 1.0);
  const double omega = 0.05;
  const double gamma = std::sqrt(std::log(2.0)) / omega;
  CHECK(rbf_vote(0.3 + omega, 0.3, gamma).value == doctest::Approx(0.5).epsilon(1e-12));
  const VoteGradient far = rbf_vote(1e6, 0.0, gamma);
  CHECK(far.value == 0.0);
  CHECK(far.d_dx == 0.0);
  CHECK(far.d_dparam == 0.0);
}

TEST_CASE("kde_vote examples") {
  const double omega = 0.05, bw = 0.02;
  const VoteGradient c = kde_vote(0.1, 0.1, omega, bw);
  const double s = 1.0 / (1.0 + std::exp(-omega / bw));
  CHECK(c.value == doctest::Approx(2 * s - 1).epsilon(1e-14));
  CHECK(c.d_dx == 0.0);

  CHECK(kde_vote(0.01, 0.0, omega, 1e-6).value == doctest::Approx(1.0).epsilon(1e-15));

  const VoteGradient edge = kde_vote(0.05, 0.0, omega, bw);
  CHECK(edge.value == doctest::Approx(kSigma5MinusSigma0).epsilon(1e-14));

  // Far from the bin both sigmoids saturate; the value must stay positive and tiny.
  const VoteGradient far = kde_vote(1.0, 0.0, omega, bw);
  CHECK(far.value > 0.0);
  CHECK(far.value < 1e-19);
  CHECK(far.d_dx < 0.0);
  const double numeric = fd([&](double x) { return kde_vote(x, 0.0, omega, bw).value; }, 1.0);
  CHECK(far.d_dx == doctest::Approx(numeric).epsilon(1e-6));
}

TEST_CASE("d_dmu is the negated d_dx for every kernel") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-2, 2);
  for (int i = 0; i < 5000; ++i) {
    const double x = ux(rng), mu = ux(rng);
    for (const VoteGradient& v : {histlayer_vote(x, mu, 0.3, 1.01), lbf_vote(x, mu, 2.0),
                                  rbf_vote(x, mu, 3.0), kde_vote(x, mu, 0.3, 0.1)}) {
      CHECK(std::abs(v.d_dmu + v.d_dx) <= 1e-12);
    }
  }
}

TEST_CASE("lbf with w = 1/(2 omega) is a partition of unity between the outer centers") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const double slope = 1.0 / (2.0 * bins.half_width(0));
  for (int i = 0; i <= 10000; ++i) {
    const double x = bins.center(0) + (bins.center(19) - bins.center(0)) * i / 10000.0;
    double total = 0.0;
    for (std::size_t k = 0; k < bins.size(); ++k) total += lbf_vote(x, bins.center(k), slope).value;
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("default kernels follow the bin geometry") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const Kernel hl = default_kernel(KernelKind::histlayer, bins);
  CHECK(std::get<HistLayerParams>(hl.params()).base == 1.01);
  const Kernel lbf = default_kernel(KernelKind::lbf, bins);
  for (double w : std::get<LbfParams>(lbf.params()).slopes) CHECK(w == doctest::Approx(20.0));
  const Kernel rbf = default_kernel(KernelKind::rbf, bins);
  for (double g : std::get<RbfParams>(rbf.params()).gammas)
    CHECK(g == doctest::Approx(std::sqrt(std::log(2.0)) / 0.05));
  const Kernel kde = default_kernel(KernelKind::kde, bins);
  CHECK(std::get<KdeParams>(kde.params()).bandwidth == doctest::Approx(0.02).epsilon(1e-14));

  const BinSpec uneven({0.0, 1.0}, {0.25, 0.5});
  CHECK_THROWS_AS(default_kernel(KernelKind::kde, uneven), ValidationError);
  CHECK_NOTHROW(default_kernel(KernelKind::lbf, uneven));
}

TEST_CASE("kernel parameter validation") {
  CHECK_THROWS_AS(Kernel(HistLayerParams{1.0}), ValidationError);
  CHECK_THROWS_AS(Kernel(HistLayerParams{0.5}), ValidationError);
  CHECK_THROWS_AS(Kernel(LbfParams{{1.0, 0.0}}), ValidationError);
  CHECK_THROWS_AS(Kernel(RbfParams{{-1.0}}), ValidationError);
  CHECK_THROWS_AS(Kernel(KdeParams{0.0}), ValidationError);
  const BinSpec bins = make_uniform_bins(-1, 1, 4);
  CHECK_THROWS_AS(soft_histogram(SampleBatch{{0.1}}, bins, Kernel(LbfParams{{1.0, 2.0}})),
                  ValidationError);
}

TEST_CASE("soft_histogram basics") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  for (KernelKind kind : {KernelKind::histlayer, KernelKind::lbf, KernelKind::rbf, KernelKind::kde}) {
    const HistogramVector h = soft_histogram(SampleBatch{}, bins, default_kernel(kind, bins),
                                             Normalization::probability);
    CHECK(h.size() == 20);
    CHECK(h.sum() == 0.0);
  }

  const SampleBatch one{{bins.center(4)}};
  const HistogramVector h = soft_histogram(one, bins, default_kernel(KernelKind::histlayer, bins));
  for (std::size_t k = 0; k < 20; ++k) {
    if (k == 4) CHECK(h.values[k] == doctest::Approx(kBasePowHalfBin).epsilon(1e-14));
    else CHECK(h.values[k] == 0.0);
  }
}

TEST_CASE("histlayer probability histogram is sandwiched by the open-interval oracle") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const SampleBatch s = synth(NormalDist{}, 10000, 42);
  const HistogramVector oracle =
      normalize(hard_histogram(s, bins, BoundaryMode::open_interval), Normalization::probability);
  const HistogramVector h = soft_histogram(s, bins, default_kernel(KernelKind::histlayer, bins),
                                           Normalization::probability);
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(oracle.values[k] <= h.values[k]);
    CHECK(h.values[k] <= oracle.values[k] * kBasePowHalfBin);
  }
}

TEST_CASE("soft histograms are translation invariant") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const SampleBatch s = synth(NormalDist{}, 1000, 5);
  for (double delta : {0.25, -0.75, 1.5}) {
    std::vector<double> centers(bins.centers().begin(), bins.centers().end());
    for (double& c : centers) c += delta;
    const BinSpec shifted(centers, std::vector<double>(bins.half_widths().begin(), bins.half_widths().end()));
    SampleBatch moved = s;
    for (double& x : moved.values) x += delta;
    for (KernelKind kind : {KernelKind::histlayer, KernelKind::lbf, KernelKind::rbf, KernelKind::kde}) {
      const Kernel kernel = default_kernel(kind, bins);
      const HistogramVector a = soft_histogram(s, bins, kernel, Normalization::probability);
      const HistogramVector b = soft_histogram(moved, shifted, kernel, Normalization::probability);
      for (std::size_t k = 0; k < 20; ++k) CHECK(std::abs(a.values[k] - b.values[k]) <= 1e-12);
    }
  }
}

TEST_CASE("soft_histogram gradients aggregate vote partials") {
  const BinSpec bins = make_uniform_bins(-1, 1, 8);
  const SampleBatch s = synth(NormalDist{0.0, 0.5}, 50, 8);
  const Kernel kernel = default_kernel(KernelKind::kde, bins);
  const SoftHistogramResult r = soft_histogram_with_gradients(s, bins, kernel, Normalization::probability);
  REQUIRE(r.gradients.d_dx.size() == 50 * 8);
  for (std::size_t k = 0; k < 8; ++k) {
    double dmu = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      const VoteGradient v = vote(kernel, bins, k, s.values[i]);
      CHECK(r.gradients.dx(i, k) == doctest::Approx(v.d_dx / 50.0));
      dmu += v.d_dmu;
    }
    CHECK(r.gradients.d_dmu[k] == doctest::Approx(dmu / 50.0));
  }
  // Same histogram with or without gradient bookkeeping.
  CHECK(r.histogram.values == soft_histogram(s, bins, kernel, Normalization::probability).values);
}

TEST_CASE("histlayer gives no signal outside the binned range") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const SampleBatch s{{-1.5, 1.2, 3.0}};
  const SoftHistogramResult r = soft_histogram_with_gradients(
      s, bins, default_kernel(KernelKind::histlayer, bins), Normalization::counts);
  CHECK(r.histogram.sum() == 0.0);
  for (double d : r.gradients.d_dx) CHECK(d == 0.0);
}

TEST_CASE("soft histograms are bitwise deterministic") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  for (KernelKind kind : {KernelKind::histlayer, KernelKind::lbf, KernelKind::rbf, KernelKind::kde}) {
    const HistogramVector a = soft_histogram(synth(NormalDist{}, 3000, 77), bins,
                                             default_kernel(kind, bins), Normalization::probability);
    const HistogramVector b = soft_histogram(synth(NormalDist{}, 3000, 77), bins,
                                             default_kernel(kind, bins), Normalization::probability);
    CHECK(a.values == b.values);
  }
}
