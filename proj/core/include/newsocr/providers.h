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
#ifndef NEWSOCR_PROVIDERS_H_
#define NEWSOCR_PROVIDERS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "newsocr/transport.h"

namespace newsocr::recognize {

struct PromptProfile {
  std::string name;
  std::string system_prompt;
  std::string user_prompt;
};

// The built-in transcription prompts, named "default".
const PromptProfile& DefaultPromptProfile();
// Looks up a built-in profile by name; throws ConfigError when unknown.
const PromptProfile& BuiltinPromptProfile(std::string_view name);

enum class ProviderKind { kOpenAiCompat, kAnthropic, kGoogle };

std::string_view ProviderKindName(ProviderKind kind);  // openai_compat, ...
ProviderKind ParseProviderKind(std::string_view name);
std::string DefaultEndpoint(ProviderKind kind);

enum class ProviderMode { kLive, kReplay };

std::string_view ProviderModeName(ProviderMode mode);
ProviderMode ParseProviderMode(std::string_view name);

struct RetryPolicy {
  int max_attempts = 4;
  int base_backoff_ms = 1000;
  double jitter = 0.25;  // fraction of the nominal delay, applied +/-
};

struct ProviderConfig {
  ProviderKind kind = ProviderKind::kOpenAiCompat;
  std::string model_name;
  std::string endpoint;  // empty: DefaultEndpoint(kind)
  std::string api_key_env;
  double temperature = 0;
  int max_output_tokens = 4096;
  int requests_per_minute = 60;
  int max_concurrency = 4;
  int timeout_s = 120;
  RetryPolicy retry;
  ProviderMode mode = ProviderMode::kLive;
  // Replay mode: records {"image_digest", "model", "text"} per line.
  std::filesystem::path replay_fixture;

  std::string EffectiveEndpoint() const;
  void Validate() const;
};

// Builds the dialect-specific request carrying the system prompt, the user
// prompt and the PNG image inline.
HttpRequest BuildRequest(const ProviderConfig& provider,
                         const PromptProfile& profile,
                         std::span<const std::uint8_t> png,
                         const std::string& api_key);

// Extracts the transcription from a successful response body. Throws
// ParseError when the body does not have the dialect's shape.
std::string ParseResponseText(ProviderKind kind, const std::string& body);

}  // namespace newsocr::recognize

#endif  // NEWSOCR_PROVIDERS_H_
