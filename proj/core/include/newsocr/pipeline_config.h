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
#ifndef NEWSOCR_PIPELINE_CONFIG_H_
#define NEWSOCR_PIPELINE_CONFIG_H_

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsocr/detect.h"
#include "newsocr/providers.h"
#include "newsocr/superres.h"

namespace newsocr::pipeline {

struct DetectorStage {
  detect::DetectorConfig config;
  detect::BackendKind backend = detect::BackendKind::kNeural;
  std::filesystem::path fixture;  // REPLAY only
};

struct UpscalerStage {
  superres::UpscalerConfig config;
  superres::BackendKind backend = superres::BackendKind::kNeural;
  std::filesystem::path fixture;  // REPLAY only
  bool use_cache = true;          // reuse upscaled crops across runs
};

struct RecognizerStage {
  recognize::ProviderConfig provider;
  std::string prompt_profile = "default";
  bool use_cache = true;
  std::filesystem::path cache_dir;  // empty: <output_root>/.cache/responses
};

struct PipelineConfig {
  PipelineConfig();

  DetectorStage article_detector;
  UpscalerStage upscaler;
  DetectorStage column_detector;
  RecognizerStage recognizer;
  int workers = 1;
  std::filesystem::path output_root;
  bool keep_intermediates = true;
  // Added on every side of an article box, in page pixels, before
  // upscaling. Column crops get the same margin scaled by upscaler.scale.
  double crop_padding = 4;

  void Validate() const;
  std::filesystem::path EffectiveCacheDir() const;
};

enum class ValueKind { kString, kPath, kInt, kReal, kBool };

// One settable leaf of PipelineConfig. The same table drives config-file
// loading, command-line flags, and the effective-config dump, so a key added
// here is automatically available everywhere.
struct ConfigKey {
  std::string name;  // dotted, e.g. "upscaler.tile_size"
  ValueKind kind;
  std::string help;
  // `base_dir` resolves relative paths (config file directory or cwd).
  std::function<void(PipelineConfig&, const std::string& value,
                     const std::filesystem::path& base_dir)>
      set;
  std::function<nlohmann::json(const PipelineConfig&)> get;
};

const std::vector<ConfigKey>& PipelineConfigKeys();

// Throws ConfigError for unknown keys or malformed values.
void SetConfigValue(PipelineConfig& config, std::string_view key,
                    const std::string& value,
                    const std::filesystem::path& base_dir);

// Applies a YAML document of nested maps onto `config`. Relative paths are
// taken relative to `base_dir`.
void ApplyConfigYaml(PipelineConfig& config, const std::string& yaml_text,
                     const std::string& source,
                     const std::filesystem::path& base_dir);

// Defaults overlaid with the file's values.
PipelineConfig LoadPipelineConfig(const std::filesystem::path& path);

// Nested object holding every key (object members sorted by name).
nlohmann::json EffectiveConfigJson(const PipelineConfig& config);

// SHA-256 of the canonical dump of EffectiveConfigJson.
std::string ConfigDigest(const PipelineConfig& config);

}  // namespace newsocr::pipeline

#endif  // NEWSOCR_PIPELINE_CONFIG_H_
