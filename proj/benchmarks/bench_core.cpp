#include <benchmark/benchmark.h>

#include "jetseg/chanvese.hpp"
#include "jetseg/clustering.hpp"
#include "jetseg/geometry.hpp"
#include "jetseg/metrics.hpp"
#include "jetseg/preprocess.hpp"
#include "jetseg/random.hpp"
#include "jetseg/synth.hpp"
#include "jetseg/threshold.hpp"

namespace {

using namespace jetseg;

SynthResult flame(int rows, int cols, double noise) {
  FlameSpec s;
  s.rows = rows;
  s.cols = cols;
  s.mpp = 4.0 / (0.6 * rows);
  s.nozzle_row = rows - rows / 20;
  s.nozzle_col = cols / 2;
  s.liftoff_m = 0.5;
  s.height_m = 4.0;
  s.max_width_m = std::min(1.5, 0.8 * cols * s.mpp);
  s.noise_sigma = noise;
  s.seed = 1;
  return generate_flame(s);
}

// Two overlapping random blobs; Hausdorff cost depends on the point counts.
void BM_HausdorffMask(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(3);
  BinaryMask a(side, side);
  BinaryMask b(side, side);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.values()[i] = rng.uniform() < 0.3;
    b.values()[i] = rng.uniform() < 0.3;
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(hausdorff(a, b));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}
BENCHMARK(BM_HausdorffMask)->Arg(64)->Arg(256)->Arg(512);

void BM_HausdorffPoints(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  PointSet a(n);
  PointSet b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = {static_cast<int>(rng.below(1000)), static_cast<int>(rng.below(1000))};
    b[i] = {static_cast<int>(rng.below(1000)), static_cast<int>(rng.below(1000))};
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(hausdorff(a, b));
  }
}
BENCHMARK(BM_HausdorffPoints)->Arg(1000)->Arg(10000);

void BM_MedianFilter(benchmark::State& state) {
  const auto image = to_intensity(flame(480, 320, 20.0).field);
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(median_filter(image, radius));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(image.size()));
}
BENCHMARK(BM_MedianFilter)->Arg(1)->Arg(3);

void BM_ThresholdSegment(benchmark::State& state) {
  const auto image = to_intensity(flame(480, 320, 20.0).field);
  for (auto _ : state) {
    benchmark::DoNotOptimize(threshold_segment(image, ThresholdBands{}));
  }
}
BENCHMARK(BM_ThresholdSegment);

void BM_KMeans(benchmark::State& state) {
  const auto image = to_intensity(flame(480, 320, 20.0).field);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmeans_segment(image));
  }
}
BENCHMARK(BM_KMeans);

void BM_Gmm(benchmark::State& state) {
  const auto image = to_intensity(flame(480, 320, 20.0).field);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmm_segment(image));
  }
}
BENCHMARK(BM_Gmm);

void BM_ChanVese(benchmark::State& state) {
  const int rows = static_cast<int>(state.range(0));
  const auto image = to_intensity(flame(rows, rows / 2, 20.0).field);
  for (auto _ : state) {
    benchmark::DoNotOptimize(chanvese_segment(image));
  }
}
BENCHMARK(BM_ChanVese)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto synth = flame(480, 320, 0.0);
  const auto mask = flame_region(synth.truth_mask);
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_features(mask, synth.calibration));
  }
}
BENCHMARK(BM_ExtractFeatures);

void BM_EvaluatePair(benchmark::State& state) {
  const auto synth = flame(480, 320, 20.0);
  const auto pred = threshold_segment(to_intensity(synth.field), ThresholdBands{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate_pair(pred, synth.truth_mask, "f"));
  }
}
BENCHMARK(BM_EvaluatePair);

}  // namespace

BENCHMARK_MAIN();
