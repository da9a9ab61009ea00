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
#ifndef NEWSOCR_BENCH_H_
#define NEWSOCR_BENCH_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newsocr/detect.h"
#include "newsocr/detection_metrics.h"
#include "newsocr/manifest.h"
#include "newsocr/text_metrics.h"

namespace newsocr::bench {

enum class Tier { kLow, kHigh };
std::string_view TierName(Tier tier);  // "low" / "high"
Tier ParseTier(std::string_view name);

// One transcription to score against a manifest reference.
struct Hypothesis {
  std::string sample_id;
  std::string text;
  bool refusal = false;
  bool transport_error = false;
  std::string model_name;  // may be empty
};

// Accepts recognition outcome lines ({"sample_id", "text", "refusal", ...})
// or pipeline run records; for the latter the article texts are joined,
// refusal means every column refused, and any column or article error marks
// the sample as a transport error.
std::vector<Hypothesis> LoadHypotheses(const std::filesystem::path& path);

struct OcrEvalOptions {
  metrics::NormalizationPolicy policy;
  double failure_threshold = 0.5;
  // Score refusals as empty transcripts (all deletions) instead of
  // excluding them.
  bool penalize_refusals = false;
};

enum class SampleStatus { kScored, kRefusal, kTransportError, kPenalized };
std::string_view SampleStatusName(SampleStatus status);

struct SampleOcr {
  std::string sample_id;
  SampleStatus status = SampleStatus::kScored;
  std::optional<metrics::OcrScore> score;  // kScored and kPenalized
};

struct OcrBenchResult {
  std::string model_name;
  Tier tier = Tier::kHigh;
  // Micro-averaged: total edits over total reference units of the scored
  // samples. Absent when nothing was scored.
  std::optional<double> mean_wer;
  std::optional<double> mean_cer;
  double refusal_rate = 0;
  int sample_count = 0;
  int scored_count = 0;
  int refusal_count = 0;
  int error_count = 0;
  bool failed_flag = false;  // refusal_rate > failure_threshold
  double failure_threshold = 0.5;
  bool penalized_refusals = false;
  metrics::EditCounts word_edits;
  metrics::EditCounts char_edits;
  std::int64_t reference_tokens = 0;
  std::int64_t reference_chars = 0;
  std::vector<SampleOcr> per_sample;  // manifest order
  std::vector<std::string> diagnostics;
};

// Throws ValidationError for outcomes naming unknown samples, duplicate
// outcomes, or samples without reference text.
OcrBenchResult EvalOcr(const Manifest& manifest, std::span<const Hypothesis> hypotheses,
                       const std::string& model_name, Tier tier,
                       const OcrEvalOptions& options);

struct SampleDelta {
  std::string sample_id;
  double low_wer = 0;
  double high_wer = 0;
  double delta = 0;  // high - low
};

struct TierComparison {
  std::string model_name;
  OcrBenchResult low;
  OcrBenchResult high;
  std::vector<SampleDelta> deltas;  // samples scored in both tiers
  std::optional<double> mean_delta;
  int improved = 0;
  int regressed = 0;
  int unchanged = 0;
};

// Requires the same model and sample set; the error lists the symmetric
// difference of sample ids.
TierComparison CompareTiers(const OcrBenchResult& low, const OcrBenchResult& high);

struct DetectionRow {
  detect::Task task = detect::Task::kArticle;
  metrics::DetectionScore score;
};

// Predictions are detection export records (sample_id set); only records of
// `task` are used. Ground truth comes from each sample's label file.
// Throws ValidationError listing unmatched ids in either direction.
DetectionRow EvalDetection(const Manifest& ground_truth,
                           std::span<const detect::DetectionRecord> predictions,
                           detect::Task task);

}  // namespace newsocr::bench

#endif  // NEWSOCR_BENCH_H_
