#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "dseqmark/attacks.hpp"
#include "dseqmark/dseq.hpp"
#include "dseqmark/features.hpp"
#include "dseqmark/metrics.hpp"
#include "dseqmark/transform.hpp"
#include "dseqmark/watermark.hpp"

using namespace dseqmark;

namespace {

const GrayImage& photo() {
  static const GrayImage img = load_image(std::filesystem::path(DSEQMARK_BENCH_DATA) / "photo_launch.pgm");
  return img;
}

const WatermarkBitmap& payload() {
  static const WatermarkBitmap wm = load_watermark(std::filesystem::path(DSEQMARK_BENCH_DATA) / "wm_lsu_12x12.pbm");
  return wm;
}

void BM_Dct8x8(benchmark::State& state) {
  std::mt19937_64 rng(1);
  RealBlock b{};
  for (auto& v : b) v = static_cast<double>(rng() & 0xFF);
  for (auto _ : state) benchmark::DoNotOptimize(dct2(b));
}
BENCHMARK(BM_Dct8x8);

void BM_TransformImage(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(transform_image(photo()));
}
BENCHMARK(BM_TransformImage)->Unit(benchmark::kMillisecond);

void BM_DSequence(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate(8069, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DSequence)->Arg(4096 * 22);

void BM_PhaseCongruency(benchmark::State& state) {
  const PhaseCongruencyParams params;
  for (auto _ : state) benchmark::DoNotOptimize(phase_congruency_moment(photo(), params));
}
BENCHMARK(BM_PhaseCongruency)->Unit(benchmark::kMillisecond);

void BM_Corners(benchmark::State& state) {
  const EdgeMap edges = detect_edges(photo());
  for (auto _ : state) benchmark::DoNotOptimize(detect_corners(photo(), edges));
}
BENCHMARK(BM_Corners)->Unit(benchmark::kMillisecond);

void BM_EmbedFull(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(embed(photo(), payload(), EmbedConfig{}));
}
BENCHMARK(BM_EmbedFull)->Unit(benchmark::kMillisecond);

void BM_EmbedWithMask(benchmark::State& state) {
  const JndMask mask = embed_detailed(photo(), payload(), EmbedConfig{}).mask;
  for (auto _ : state) benchmark::DoNotOptimize(embed_with_mask(photo(), payload(), EmbedConfig{}, mask));
}
BENCHMARK(BM_EmbedWithMask)->Unit(benchmark::kMillisecond);

void BM_Extract(benchmark::State& state) {
  const GrayImage marked = embed(photo(), payload(), EmbedConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(extract(marked, 12, 12, EmbedConfig{}));
}
BENCHMARK(BM_Extract)->Unit(benchmark::kMillisecond);

void BM_Jpeg(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(jpeg_attack(photo(), 45));
}
BENCHMARK(BM_Jpeg)->Unit(benchmark::kMillisecond);

void BM_Wpsnr(benchmark::State& state) {
  const GrayImage marked = embed(photo(), payload(), EmbedConfig{});
  for (auto _ : state) benchmark::DoNotOptimize(wpsnr(photo(), marked));
}
BENCHMARK(BM_Wpsnr)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
