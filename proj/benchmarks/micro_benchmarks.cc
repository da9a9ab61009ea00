// Copyright 2026 The newsocr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "newsocr/detection_metrics.h"
#include "newsocr/imageops.h"
#include "newsocr/psnr.h"
#include "newsocr/superres.h"
#include "newsocr/text_metrics.h"
#include "synthetic.h"

namespace newsocr {
namespace {

// Urdu-looking text of `words` words with roughly one word in five changed.
std::pair<std::string, std::string> TextPair(int words, std::uint32_t seed) {
  static const std::vector<std::string> kVocab = {"اخبار", "شہر",  "حکومت", "پالیسی",
                                                  "موسم",  "بازار", "تعلیم", "آج"};
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, kVocab.size() - 1);
  std::uniform_int_distribution<int> coin(0, 4);
  std::string ref, hyp;
  for (int i = 0; i < words; ++i) {
    const std::string w = kVocab[pick(rng)];
    ref += (i ? " " : "") + w;
    hyp += (i ? " " : "") + (coin(rng) == 0 ? kVocab[pick(rng)] : w);
  }
  return {ref, hyp};
}

void BM_WordErrorRate(benchmark::State& state) {
  const auto [ref, hyp] = TextPair(static_cast<int>(state.range(0)), 1);
  const metrics::NormalizationPolicy policy;
  for (auto _ : state) benchmark::DoNotOptimize(metrics::WordErrorRate(ref, hyp, policy));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WordErrorRate)->Arg(100)->Arg(1000);

std::vector<metrics::ImageDetections> Scenes(int images, int boxes, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> pos(0, 900), size(20, 100), jitter(-8, 8), conf(0, 1);
  std::vector<metrics::ImageDetections> out(images);
  for (auto& img : out) {
    for (int b = 0; b < boxes; ++b) {
      const double x = pos(rng), y = pos(rng), w = size(rng), h = size(rng);
      img.ground_truth.push_back({BoundingBox::Make(x, y, x + w, y + h), b % 2});
      const double dx = jitter(rng), dy = jitter(rng);
      img.detections.push_back({BoundingBox::Make(x + dx, y + dy, x + dx + w, y + dy + h),
                                b % 2, conf(rng)});
    }
  }
  return out;
}

void BM_ScoreDetections(benchmark::State& state) {
  const auto scenes = Scenes(static_cast<int>(state.range(0)), 20, 2);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::ScoreDetections(scenes));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ScoreDetections)->Arg(100)->Arg(1000);

void BM_Psnr(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const RasterImage a = testing::SyntheticPage(side, side, 3);
  const RasterImage b = testing::SyntheticPage(side, side, 4);
  for (auto _ : state) benchmark::DoNotOptimize(metrics::Psnr(a, b, metrics::PsnrMode::kLuma));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(a.pixels().size()));
}
BENCHMARK(BM_Psnr)->Arg(512)->Arg(2048);

void BM_Degrade(benchmark::State& state) {
  const RasterImage page = testing::SyntheticPage(1024, 1024, 5);
  const imageops::DegradeSpec spec;
  for (auto _ : state) benchmark::DoNotOptimize(imageops::Degrade(page, spec));
}
BENCHMARK(BM_Degrade);

void BM_BicubicUpscale(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const RasterImage crop = testing::SyntheticPage(side, side, 6);
  const superres::BicubicUpscaler backend;
  const superres::UpscalerConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(superres::Upscale(crop, backend, config));
}
BENCHMARK(BM_BicubicUpscale)->Arg(64)->Arg(256);

}  // namespace
}  // namespace newsocr

BENCHMARK_MAIN();
