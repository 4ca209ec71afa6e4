// Optimized kernels against the serial reference implementations.
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "ballast/morphology.hpp"
#include "ballast/pipeline.hpp"
#include "ballast/preprocess.hpp"
#include "ballast/reference.hpp"
#include "ballast/segmentation.hpp"
#include "synthetic.hpp"

using namespace ballast;

namespace {

GrayImage noise(int side) {
  std::mt19937 rng(static_cast<std::uint32_t>(side));
  return testkit::random_image(side, side, rng);
}

GrayImage stones(int side) {
  const auto disks = testkit::scatter_disks(side, side, side / 16.0, side / 6.0, 4, 3);
  return testkit::render_disks(side, side, disks, 0.1, 0.03, 3);
}

void BM_Bilateral(benchmark::State& state) {
  const GrayImage img = noise(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(bilateral_filter(img, {6.0, 8.0}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}

void BM_BilateralReference(benchmark::State& state) {
  const GrayImage img = noise(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::bilateral(img, 6.0, 8.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}

void BM_Erode(benchmark::State& state) {
  const GrayImage img = noise(256);
  const DiskStrel se(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(erode(img, se));
}

void BM_ErodeReference(benchmark::State& state) {
  const GrayImage img = noise(256);
  const int radius = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(reference::erode(img, radius));
}

void BM_Sobel(benchmark::State& state) {
  const GrayImage img = noise(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(gradient_magnitude(img));
}

void BM_SobelReference(benchmark::State& state) {
  const GrayImage img = noise(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::sobel(img));
}

void BM_Reconstruct(benchmark::State& state) {
  const GrayImage mask = stones(static_cast<int>(state.range(0)));
  const GrayImage marker = erode(mask, DiskStrel(8));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(marker, mask));
}

void BM_ReconstructReference(benchmark::State& state) {
  const GrayImage mask = stones(static_cast<int>(state.range(0)));
  const GrayImage marker = erode(mask, DiskStrel(8));
  for (auto _ : state) benchmark::DoNotOptimize(reference::reconstruct(marker, mask));
}

void BM_StitchedPipeline(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const GrayImage gray = stones(side);
  RgbImage img(side, side);
  for (std::size_t i = 0; i < gray.size(); ++i) img[i] = Rgb{gray[i], gray[i], gray[i]};
  for (auto _ : state) benchmark::DoNotOptimize(process(img, default_config()));
}

}  // namespace

BENCHMARK(BM_Bilateral)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BilateralReference)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Erode)->Arg(3)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ErodeReference)->Arg(3)->Arg(14)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sobel)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SobelReference)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reconstruct)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReconstructReference)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StitchedPipeline)->Arg(384)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
