#include <doctest.h>

#include <algorithm>
#include <random>

#include "histlayer/oracle.hpp"
#include "histlayer/synth.hpp"

using namespace histlayer;

namespace {

// Brute-force per-sample loop written independently of hard_histogram.
std::vector<double> brute_force(const std::vector<double>& xs, const BinSpec& bins,
                                BoundaryMode mode) {
  const std::vector<double> edges = bins.edges();
  std::vector<double> counts(bins.size(), 0.0);
  for (double x : xs) {
    for (std::size_t k = 0; k < bins.size(); ++k) {
      bool hit = false;
      if (mode == BoundaryMode::open_interval) {
        hit = x > bins.center(k) - bins.half_width(k) && x < bins.center(k) + bins.half_width(k);
      } else {
        const bool last = k + 1 == bins.size();
        hit = x >= edges[k] && (last ? x <= edges[k + 1] : x < edges[k + 1]);
      }
      if (hit) counts[k] += 1.0;
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("hard_histogram on an empty batch is all zeros") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  for (auto mode : {BoundaryMode::open_interval, BoundaryMode::right_open_edges}) {
    const HistogramVector h = hard_histogram(SampleBatch{}, bins, mode);
    CHECK(h.size() == 20);
    CHECK(h.n_samples == 0);
    CHECK(h.sum() == 0.0);
  }
}

TEST_CASE("bin centers land one per bin") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const SampleBatch s{std::vector<double>(bins.centers().begin(), bins.centers().end())};
  const HistogramVector h = hard_histogram(s, bins, BoundaryMode::open_interval);
  for (double c : h.values) CHECK(c == 1.0);
}

TEST_CASE("hard_histogram equals brute force on seeded normal samples") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  for (std::uint64_t seed : {1u, 2u, 3u, 42u}) {
    const SampleBatch s = synth(NormalDist{}, 1000, seed);
    for (auto mode : {BoundaryMode::open_interval, BoundaryMode::right_open_edges}) {
      const HistogramVector h = hard_histogram(s, bins, mode);
      CHECK(h.values == brute_force(s.values, bins, mode));
      CHECK(h.sum() <= 1000.0);
      for (double c : h.values) CHECK(c == std::floor(c));
    }
  }
}

TEST_CASE("edge-coincident samples separate the boundary modes") {
  const BinSpec bins({0.5, 1.5}, {0.5, 0.5});  // edges 0, 1, 2
  const SampleBatch s{{0.0, 1.0, 2.0, 0.25}};
  const HistogramVector open = hard_histogram(s, bins, BoundaryMode::open_interval);
  const HistogramVector right = hard_histogram(s, bins, BoundaryMode::right_open_edges);
  CHECK(open.values == std::vector<double>{1, 0});
  // 0 and 0.25 in bin 0; 1 starts bin 1; 2 closes the last bin.
  CHECK(right.values == std::vector<double>{2, 2});
}

TEST_CASE("boundary modes agree away from edges; permutation and additivity") {
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  SampleBatch s = synth(NormalDist{}, 2000, 9);
  const HistogramVector a = hard_histogram(s, bins, BoundaryMode::open_interval);
  const HistogramVector b = hard_histogram(s, bins, BoundaryMode::right_open_edges);
  CHECK(a.values == b.values);

  std::mt19937 shuffle_rng(5);
  SampleBatch shuffled = s;
  std::shuffle(shuffled.values.begin(), shuffled.values.end(), shuffle_rng);
  CHECK(hard_histogram(shuffled, bins).values == b.values);

  SampleBatch left{std::vector<double>(s.values.begin(), s.values.begin() + 700)};
  SampleBatch right{std::vector<double>(s.values.begin() + 700, s.values.end())};
  const HistogramVector hl = hard_histogram(left, bins);
  const HistogramVector hr = hard_histogram(right, bins);
  for (std::size_t k = 0; k < bins.size(); ++k) CHECK(hl.values[k] + hr.values[k] == b.values[k]);
}

TEST_CASE("normalize") {
  HistogramVector h{{2, 2}, Normalization::counts, 4};
  CHECK(normalize(h, Normalization::probability).values == std::vector<double>{0.5, 0.5});

  HistogramVector empty{{0, 0}, Normalization::counts, 0};
  CHECK(normalize(empty, Normalization::probability).values == std::vector<double>{0, 0});

  HistogramVector c{{3, 1, 0}, Normalization::counts, 8};
  const HistogramVector p = normalize(c, Normalization::probability);
  CHECK(p.values == std::vector<double>{3.0 / 8.0, 1.0 / 8.0, 0.0});
  CHECK(p.values[0] == 0.375);
  CHECK(p.values[1] == 0.125);
  CHECK(normalize(c, Normalization::counts).values == c.values);

  // Round trip.
  const BinSpec bins = make_uniform_bins(-1, 1, 20);
  const HistogramVector counts = hard_histogram(synth(NormalDist{}, 777, 3), bins);
  const HistogramVector back = normalize(normalize(counts, Normalization::probability),
                                         Normalization::counts);
  for (std::size_t k = 0; k < 20; ++k)
    CHECK(std::abs(back.values[k] - counts.values[k]) <= 1e-12 * 777);
}
