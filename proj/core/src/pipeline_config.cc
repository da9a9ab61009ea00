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
#include "newsocr/pipeline_config.h"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "newsocr/digest.h"
#include "newsocr/error.h"

namespace newsocr::pipeline {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

int ParseInt(const std::string& key, const std::string& v) {
  int out = 0;
  const char* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || v.empty()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

double ParseReal(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  }
  return out;
}

bool ParseBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

fs::path ParsePath(const std::string& v, const fs::path& base) {
  if (v.empty()) return {};
  fs::path p(v);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

template <typename T>
json Dump(const T& v) {
  if constexpr (std::is_same_v<T, fs::path>) {
    return v.generic_string();
  } else {
    return v;
  }
}

template <typename T>
ValueKind KindOf() {
  if constexpr (std::is_same_v<T, std::string>) return ValueKind::kString;
  if constexpr (std::is_same_v<T, fs::path>) return ValueKind::kPath;
  if constexpr (std::is_same_v<T, int>) return ValueKind::kInt;
  if constexpr (std::is_same_v<T, double>) return ValueKind::kReal;
  if constexpr (std::is_same_v<T, bool>) return ValueKind::kBool;
}

// A key bound to a plain field reached through `field`.
template <typename Access>
ConfigKey Field(std::string name, std::string help, Access field) {
  using T = std::remove_reference_t<decltype(field(std::declval<PipelineConfig&>()))>;
  ConfigKey k;
  k.name = name;
  k.kind = KindOf<T>();
  k.help = std::move(help);
  k.set = [name, field](PipelineConfig& c, const std::string& v, const fs::path& base) {
    T& slot = field(c);
    if constexpr (std::is_same_v<T, std::string>) {
      slot = v;
    } else if constexpr (std::is_same_v<T, fs::path>) {
      slot = ParsePath(v, base);
    } else if constexpr (std::is_same_v<T, int>) {
      slot = ParseInt(name, v);
    } else if constexpr (std::is_same_v<T, double>) {
      slot = ParseReal(name, v);
    } else {
      slot = ParseBool(name, v);
    }
  };
  k.get = [field](const PipelineConfig& c) {
    return Dump(field(const_cast<PipelineConfig&>(c)));
  };
  return k;
}

// A key whose value is a named enumerator.
template <typename Access, typename Parse, typename Name>
ConfigKey Enum(std::string name, std::string help, Access field, Parse parse, Name to_name) {
  ConfigKey k;
  k.name = std::move(name);
  k.kind = ValueKind::kString;
  k.help = std::move(help);
  k.set = [field, parse](PipelineConfig& c, const std::string& v, const fs::path&) {
    field(c) = parse(v);
  };
  k.get = [field, to_name](const PipelineConfig& c) {
    return json(std::string(to_name(field(const_cast<PipelineConfig&>(c)))));
  };
  return k;
}

void AddDetectorKeys(std::vector<ConfigKey>& keys, const std::string& prefix,
                     DetectorStage PipelineConfig::*stage) {
  keys.push_back(Enum(
      prefix + ".backend", "neural or replay",
      [stage](PipelineConfig& c) -> detect::BackendKind& { return (c.*stage).backend; },
      [](const std::string& v) { return detect::ParseBackendKind(v); },
      [](detect::BackendKind k) { return detect::BackendKindName(k); }));
  keys.push_back(Field(prefix + ".model_path", "detector model file (neural)",
                       [stage](PipelineConfig& c) -> fs::path& {
                         return (c.*stage).config.model_path;
                       }));
  keys.push_back(Field(prefix + ".fixture", "detection records jsonl (replay)",
                       [stage](PipelineConfig& c) -> fs::path& { return (c.*stage).fixture; }));
  keys.push_back(Field(prefix + ".input_size", "square model input side, multiple of 32",
                       [stage](PipelineConfig& c) -> int& {
                         return (c.*stage).config.input_size;
                       }));
  keys.push_back(Field(prefix + ".confidence_threshold", "minimum detection confidence",
                       [stage](PipelineConfig& c) -> double& {
                         return (c.*stage).config.confidence_threshold;
                       }));
  keys.push_back(Field(prefix + ".nms_iou_threshold", "IoU above which NMS suppresses",
                       [stage](PipelineConfig& c) -> double& {
                         return (c.*stage).config.nms_iou_threshold;
                       }));
}

std::vector<ConfigKey> BuildKeys() {
  std::vector<ConfigKey> keys;
  keys.push_back(Field("workers", "samples processed in parallel",
                       [](PipelineConfig& c) -> int& { return c.workers; }));
  keys.push_back(Field("output_root", "run output directory",
                       [](PipelineConfig& c) -> fs::path& { return c.output_root; }));
  keys.push_back(Field("keep_intermediates", "write article, upscaled and column crops",
                       [](PipelineConfig& c) -> bool& { return c.keep_intermediates; }));
  keys.push_back(Field("crop_padding", "article crop margin in page pixels",
                       [](PipelineConfig& c) -> double& { return c.crop_padding; }));
  AddDetectorKeys(keys, "article_detector", &PipelineConfig::article_detector);

  keys.push_back(Enum(
      "upscaler.backend", "neural, replay or bicubic",
      [](PipelineConfig& c) -> superres::BackendKind& { return c.upscaler.backend; },
      [](const std::string& v) { return superres::ParseBackendKind(v); },
      [](superres::BackendKind k) { return superres::BackendKindName(k); }));
  keys.push_back(Field("upscaler.model_path", "super-resolution model file (neural)",
                       [](PipelineConfig& c) -> fs::path& { return c.upscaler.config.model_path; }));
  keys.push_back(Field("upscaler.fixture", "upscale index jsonl (replay)",
                       [](PipelineConfig& c) -> fs::path& { return c.upscaler.fixture; }));
  keys.push_back(Field("upscaler.scale", "integer upscaling factor",
                       [](PipelineConfig& c) -> int& { return c.upscaler.config.scale; }));
  keys.push_back(Field("upscaler.tile_size", "tile side in input pixels",
                       [](PipelineConfig& c) -> int& { return c.upscaler.config.tile_size; }));
  keys.push_back(Field("upscaler.tile_overlap", "overlap between neighbouring tiles",
                       [](PipelineConfig& c) -> int& { return c.upscaler.config.tile_overlap; }));
  keys.push_back(Field("upscaler.use_cache", "reuse upscaled crops from earlier runs",
                       [](PipelineConfig& c) -> bool& { return c.upscaler.use_cache; }));

  AddDetectorKeys(keys, "column_detector", &PipelineConfig::column_detector);

  using recognize::ProviderConfig;
  auto prov = [](PipelineConfig& c) -> ProviderConfig& { return c.recognizer.provider; };
  keys.push_back(Enum(
      "recognizer.provider", "openai_compat, anthropic or google",
      [prov](PipelineConfig& c) -> recognize::ProviderKind& { return prov(c).kind; },
      [](const std::string& v) { return recognize::ParseProviderKind(v); },
      [](recognize::ProviderKind k) { return recognize::ProviderKindName(k); }));
  keys.push_back(Enum(
      "recognizer.mode", "live or replay",
      [prov](PipelineConfig& c) -> recognize::ProviderMode& { return prov(c).mode; },
      [](const std::string& v) { return recognize::ParseProviderMode(v); },
      [](recognize::ProviderMode m) { return recognize::ProviderModeName(m); }));
  keys.push_back(Field("recognizer.model_name", "provider model identifier",
                       [prov](PipelineConfig& c) -> std::string& { return prov(c).model_name; }));
  keys.push_back(Field("recognizer.endpoint", "API base URL (empty: provider default)",
                       [prov](PipelineConfig& c) -> std::string& { return prov(c).endpoint; }));
  keys.push_back(Field("recognizer.api_key_env", "environment variable holding the API key",
                       [prov](PipelineConfig& c) -> std::string& { return prov(c).api_key_env; }));
  keys.push_back(Field("recognizer.temperature", "sampling temperature",
                       [prov](PipelineConfig& c) -> double& { return prov(c).temperature; }));
  keys.push_back(Field("recognizer.max_output_tokens", "response token cap",
                       [prov](PipelineConfig& c) -> int& { return prov(c).max_output_tokens; }));
  keys.push_back(Field("recognizer.requests_per_minute", "provider rate limit",
                       [prov](PipelineConfig& c) -> int& { return prov(c).requests_per_minute; }));
  keys.push_back(Field("recognizer.max_concurrency", "requests in flight at once",
                       [prov](PipelineConfig& c) -> int& { return prov(c).max_concurrency; }));
  keys.push_back(Field("recognizer.timeout_s", "per-request timeout in seconds",
                       [prov](PipelineConfig& c) -> int& { return prov(c).timeout_s; }));
  keys.push_back(Field("recognizer.max_attempts", "attempts per request, retries included",
                       [prov](PipelineConfig& c) -> int& { return prov(c).retry.max_attempts; }));
  keys.push_back(Field("recognizer.base_backoff_ms", "first retry delay, doubled per attempt",
                       [prov](PipelineConfig& c) -> int& { return prov(c).retry.base_backoff_ms; }));
  keys.push_back(Field("recognizer.jitter", "relative random spread of retry delays",
                       [prov](PipelineConfig& c) -> double& { return prov(c).retry.jitter; }));
  keys.push_back(Field("recognizer.fixture", "recognition records jsonl (replay)",
                       [prov](PipelineConfig& c) -> fs::path& { return prov(c).replay_fixture; }));
  keys.push_back(Field("recognizer.prompt_profile", "built-in prompt profile name",
                       [](PipelineConfig& c) -> std::string& { return c.recognizer.prompt_profile; }));
  keys.push_back(Field("recognizer.use_cache", "reuse stored responses for identical requests",
                       [](PipelineConfig& c) -> bool& { return c.recognizer.use_cache; }));
  keys.push_back(Field("recognizer.cache_dir", "response cache directory",
                       [](PipelineConfig& c) -> fs::path& { return c.recognizer.cache_dir; }));
  return keys;
}

void Walk(PipelineConfig& config, const YAML::Node& node, const std::string& prefix,
          const std::string& source, const fs::path& base) {
  for (const auto& item : node) {
    const std::string key = item.first.as<std::string>();
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    const YAML::Node& value = item.second;
    const int line = item.first.Mark().line + 1;
    try {
      if (value.IsMap()) {
        Walk(config, value, name, source, base);
      } else if (value.IsScalar()) {
        SetConfigValue(config, name, value.Scalar(), base);
      } else if (value.IsNull()) {
        SetConfigValue(config, name, "", base);
      } else {
        throw ConfigError(name + ": lists are not supported");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(source, line, e.what());
    }
  }
}

}  // namespace

PipelineConfig::PipelineConfig() {
  article_detector.config.task = detect::Task::kArticle;
  column_detector.config.task = detect::Task::kColumn;
}

void PipelineConfig::Validate() const {
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (output_root.empty()) throw ConfigError("output_root is not set");
  if (!(crop_padding >= 0)) throw ConfigError("crop_padding must be >= 0");
  if (article_detector.config.task != detect::Task::kArticle ||
      column_detector.config.task != detect::Task::kColumn) {
    throw ConfigError("detector stages are bound to the wrong tasks");
  }
  for (const DetectorStage* s : {&article_detector, &column_detector}) {
    s->config.Validate();
    if (s->backend == detect::BackendKind::kNeural && s->config.model_path.empty()) {
      throw ConfigError(std::string(detect::TaskName(s->config.task)) +
                        " detector: neural backend needs model_path");
    }
    if (s->backend == detect::BackendKind::kReplay && s->fixture.empty()) {
      throw ConfigError(std::string(detect::TaskName(s->config.task)) +
                        " detector: replay backend needs fixture");
    }
  }
  upscaler.config.Validate();
  if (upscaler.backend == superres::BackendKind::kNeural && upscaler.config.model_path.empty()) {
    throw ConfigError("upscaler: neural backend needs model_path");
  }
  if (upscaler.backend == superres::BackendKind::kReplay && upscaler.fixture.empty()) {
    throw ConfigError("upscaler: replay backend needs fixture");
  }
  recognizer.provider.Validate();
  recognize::BuiltinPromptProfile(recognizer.prompt_profile);
}

fs::path PipelineConfig::EffectiveCacheDir() const {
  if (!recognizer.cache_dir.empty()) return recognizer.cache_dir;
  return output_root / ".cache" / "responses";
}

const std::vector<ConfigKey>& PipelineConfigKeys() {
  static const std::vector<ConfigKey> keys = BuildKeys();
  return keys;
}

void SetConfigValue(PipelineConfig& config, std::string_view key, const std::string& value,
                    const fs::path& base_dir) {
  for (const ConfigKey& k : PipelineConfigKeys()) {
    if (k.name == key) {
      k.set(config, value, base_dir);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void ApplyConfigYaml(PipelineConfig& config, const std::string& yaml_text,
                     const std::string& source, const fs::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ParseError(source, e.mark.line + 1, e.msg);
  }
  if (root.IsNull()) return;
  if (!root.IsMap()) throw ParseError(source, 1, "config must be a mapping");
  Walk(config, root, "", source, base_dir);
}

PipelineConfig LoadPipelineConfig(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  PipelineConfig config;
  fs::path base = path.parent_path();
  if (base.empty()) base = ".";
  ApplyConfigYaml(config, buf.str(), path.string(), fs::absolute(base));
  return config;
}

json EffectiveConfigJson(const PipelineConfig& config) {
  json out = json::object();
  for (const ConfigKey& k : PipelineConfigKeys()) {
    out[json::json_pointer("/" + [&] {
      std::string p = k.name;
      std::replace(p.begin(), p.end(), '.', '/');
      return p;
    }())] = k.get(config);
  }
  return out;
}

std::string ConfigDigest(const PipelineConfig& config) {
  return Sha256Hex(EffectiveConfigJson(config).dump());
}

}  // namespace newsocr::pipeline
