#include <doctest.h>

#include <cmath>

#include "histlayer/kernels.hpp"
#include "histlayer/pipeline.hpp"
#include "histlayer/synth.hpp"

using namespace histlayer;

TEST_CASE("pipeline has the six stages in order") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const Pipeline p = build_pipeline(bins, 1.01);
  REQUIRE(p.size() == 6);
  const StageKind expected[] = {StageKind::center_shift, StageKind::absolute,
                                StageKind::negate_plus_width, StageKind::exponentiate_base_b,
                                StageKind::threshold_at_one, StageKind::pool};
  for (std::size_t s = 0; s < 6; ++s) CHECK(p[s].kind == expected[s]);
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(p[0].weights[k] == 1.0);
    CHECK(p[0].biases[k] == -bins.center(k));
    CHECK(p[2].weights[k] == -1.0);
    CHECK(p[2].biases[k] == bins.half_width(k));
  }
  CHECK_THROWS_AS(build_pipeline(bins, 1.0), ValidationError);
}

TEST_CASE("trace of a sample at a bin center") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const auto trace = trace_sample(build_pipeline(bins, 1.01), bins.center(2));
  REQUIRE(trace.size() == 6);
  const double w = bins.half_width(2);
  const double peak = std::pow(1.01, w);
  CHECK(trace[0][2] == 0.0);
  CHECK(trace[1][2] == 0.0);
  CHECK(trace[2][2] == w);
  CHECK(trace[3][2] == peak);
  CHECK(trace[4][2] == peak);
  CHECK(trace[5][2] == peak);
}

TEST_CASE("trace of a sample on a bin edge") {
  const BinSpec bins({0.5, 1.5}, {0.5, 0.5});
  const auto trace = trace_sample(build_pipeline(bins, 1.01), 1.0);
  CHECK(trace[3][0] == 1.0);
  CHECK(trace[4][0] == 0.0);
  CHECK(trace[3][1] == 1.0);
  CHECK(trace[4][1] == 0.0);
}

TEST_CASE("stage outputs track bin membership") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const Pipeline p = build_pipeline(bins, 1.01);
  const SampleBatch s = synth(NormalDist{}, 2000, 4);
  for (double x : s.values) {
    const auto t = trace_sample(p, x);
    for (std::size_t k = 0; k < 20; ++k) {
      const bool inside = bins.lower_edge(k) < x && x < bins.upper_edge(k);
      CHECK((t[3][k] > 1.0) == (t[2][k] > 0.0));
      CHECK((t[2][k] > 0.0) == inside);
    }
  }
}

TEST_CASE("pipeline equals the direct formula") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);

  const EquivalenceReport empty = pipeline_equivalence_check(SampleBatch{}, bins, 1.01);
  CHECK(empty.max_abs_discrepancy == 0.0);
  CHECK(run_pipeline(build_pipeline(bins, 1.01), SampleBatch{}).sum() == 0.0);

  const EquivalenceReport single = pipeline_equivalence_check(SampleBatch{{bins.center(7)}}, bins, 1.01);
  CHECK(single.max_abs_discrepancy == 0.0);
  CHECK(single.bitwise_equal);

  const SampleBatch s = synth(NormalDist{}, 10000, 42);
  const EquivalenceReport r = pipeline_equivalence_check(s, bins, 1.01);
  CHECK(r.max_abs_discrepancy <= 1e-9);
  CHECK(r.max_abs_discrepancy <= r.contract);
  CHECK(r.bitwise_equal);
}

TEST_CASE("average pooling matches probability normalization") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const SampleBatch s = synth(NormalDist{}, 5000, 12);
  const HistogramVector avg = run_pipeline(build_pipeline(bins, 1.01, PoolMode::average), s);
  const HistogramVector direct =
      soft_histogram(s, bins, Kernel(HistLayerParams{1.01}), Normalization::probability);
  CHECK(avg.normalization == Normalization::probability);
  CHECK(avg.values == direct.values);
}
