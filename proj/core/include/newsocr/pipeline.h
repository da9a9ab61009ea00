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
#ifndef NEWSOCR_PIPELINE_H_
#define NEWSOCR_PIPELINE_H_

#include <atomic>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsocr/boxes.h"
#include "newsocr/manifest.h"
#include "newsocr/pipeline_config.h"
#include "newsocr/recognize.h"

namespace newsocr::pipeline {

inline constexpr int kRunSchemaVersion = 1;

struct ColumnResult {
  int index = 0;
  Detection region;  // upscaled-article pixels
  std::optional<std::string> crop_path;  // relative to output_root
  recognize::RecognitionOutcome outcome;
};

struct ArticleResult {
  int index = 0;
  Detection region;  // page pixels
  std::optional<std::string> crop_path;
  std::optional<std::string> upscaled_path;
  std::vector<ColumnResult> columns;  // reading order
  std::string text;                   // stitched
  std::string text_path;
  std::optional<std::string> error;
};

struct StageFailure {
  std::string stage;  // load, detect_articles, upscale, detect_columns, recognize, write
  std::optional<int> article;
  std::string message;

  friend bool operator==(const StageFailure&, const StageFailure&) = default;
};

struct StageTimings {
  double detect_articles_ms = 0;
  double upscale_ms = 0;
  double detect_columns_ms = 0;
  double recognize_ms = 0;
  double total_ms = 0;
};

struct PipelineRecord {
  std::string sample_id;
  std::string image_digest;
  bool no_articles = false;
  std::vector<ArticleResult> articles;  // reading order
  std::vector<StageFailure> failures;
  // Run-dependent facts, kept out of the deterministic record.
  StageTimings timings;
  int cache_hits = 0;

  bool Failed() const { return !failures.empty(); }
  int ColumnCount() const;
};

// Deterministic form written to run.jsonl: no timings, no cache facts.
nlohmann::json RecordToJson(const PipelineRecord& record);
PipelineRecord RecordFromJson(const nlohmann::json& j, const std::string& source,
                              int line);
std::vector<PipelineRecord> LoadRunRecords(const std::filesystem::path& path);
nlohmann::json TimingsToJson(const PipelineRecord& record);

// Constructed stage backends, shared by all workers.
struct Backends {
  std::unique_ptr<detect::DetectorBackend> article_detector;
  std::unique_ptr<superres::UpscalerBackend> upscaler;
  std::unique_ptr<detect::DetectorBackend> column_detector;
  std::shared_ptr<recognize::Recognizer> recognizer;
  // Identifies the upscaler's behaviour for the crop cache.
  std::string upscaler_fingerprint;
};

// `transport` may be null, in which case live recognition uses HTTPS.
std::shared_ptr<recognize::Recognizer> MakeRecognizer(
    const PipelineConfig& config, std::shared_ptr<Transport> transport = nullptr);
Backends MakeBackends(const PipelineConfig& config,
                      std::shared_ptr<Transport> transport = nullptr);

struct RunSummary {
  std::vector<PipelineRecord> records;  // manifest order
  int failed_samples = 0;
  int recognition_requests = 0;  // Transcribe calls, one per column
  std::string config_digest;
};

// Creates output_root, processes every sample with `config.workers`
// threads, and writes run.jsonl, timings.jsonl and run.json. Throws before
// any sample is touched if the configuration or output root is unusable.
RunSummary RunPipeline(const Manifest& manifest, const PipelineConfig& config,
                       Backends& backends);
RunSummary RunPipeline(const Manifest& manifest, const PipelineConfig& config);

// Joins article texts of one record with '\n'.
std::string SampleText(const PipelineRecord& record);

}  // namespace newsocr::pipeline

#endif  // NEWSOCR_PIPELINE_H_
