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
#include "newsocr/providers.h"

#include <nlohmann/json.hpp>

#include "newsocr/digest.h"
#include "newsocr/error.h"

namespace newsocr::recognize {

using nlohmann::json;

const PromptProfile& DefaultPromptProfile() {
  static const PromptProfile kProfile{
      "default",
      "You are an OCR system. Your job is to transcribe image text exactly as "
      "shown, without interpretation, paraphrasing, translation, "
      "summarization, or hallucination.",
      "Extract the exact text from this image. Preserve sentence structure NOT "
      "spacing. If anything is unreadable, write '[UNREADABLE]'."};
  return kProfile;
}

const PromptProfile& BuiltinPromptProfile(std::string_view name) {
  if (name == DefaultPromptProfile().name) return DefaultPromptProfile();
  throw ConfigError("unknown prompt profile '" + std::string(name) + "'");
}

std::string_view ProviderKindName(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOpenAiCompat:
      return "openai_compat";
    case ProviderKind::kAnthropic:
      return "anthropic";
    case ProviderKind::kGoogle:
      return "google";
  }
  return "unknown";
}

ProviderKind ParseProviderKind(std::string_view name) {
  if (name == "openai_compat") return ProviderKind::kOpenAiCompat;
  if (name == "anthropic") return ProviderKind::kAnthropic;
  if (name == "google") return ProviderKind::kGoogle;
  throw ConfigError("unknown provider kind '" + std::string(name) +
                    "' (expected openai_compat, anthropic or google)");
}

std::string DefaultEndpoint(ProviderKind kind) {
  switch (kind) {
    case ProviderKind::kOpenAiCompat:
      return "https://api.openai.com/v1";
    case ProviderKind::kAnthropic:
      return "https://api.anthropic.com/v1";
    case ProviderKind::kGoogle:
      return "https://generativelanguage.googleapis.com/v1beta";
  }
  return "";
}

std::string_view ProviderModeName(ProviderMode mode) {
  return mode == ProviderMode::kLive ? "live" : "replay";
}

ProviderMode ParseProviderMode(std::string_view name) {
  if (name == "live") return ProviderMode::kLive;
  if (name == "replay") return ProviderMode::kReplay;
  throw ConfigError("unknown provider mode '" + std::string(name) +
                    "' (expected live or replay)");
}

std::string ProviderConfig::EffectiveEndpoint() const {
  std::string e = endpoint.empty() ? DefaultEndpoint(kind) : endpoint;
  while (!e.empty() && e.back() == '/') e.pop_back();
  return e;
}

void ProviderConfig::Validate() const {
  if (model_name.empty()) throw ConfigError("provider model_name is empty");
  if (retry.max_attempts < 1) throw ConfigError("retry.max_attempts must be >= 1");
  if (retry.base_backoff_ms < 0) throw ConfigError("retry.base_backoff_ms must be >= 0");
  if (!(retry.jitter >= 0 && retry.jitter <= 1)) {
    throw ConfigError("retry.jitter must be in [0,1]");
  }
  if (requests_per_minute < 1) throw ConfigError("requests_per_minute must be >= 1");
  if (max_concurrency < 1) throw ConfigError("max_concurrency must be >= 1");
  if (max_output_tokens < 1) throw ConfigError("max_output_tokens must be >= 1");
  if (timeout_s < 1) throw ConfigError("timeout_s must be >= 1");
  if (!(temperature >= 0 && temperature <= 2)) {
    throw ConfigError("temperature must be in [0,2]");
  }
  if (mode == ProviderMode::kLive) {
    if (api_key_env.empty()) throw ConfigError("live provider needs api_key_env");
    SplitUrl(EffectiveEndpoint());
  } else if (replay_fixture.empty()) {
    throw ConfigError("replay provider needs replay_fixture");
  }
}

HttpRequest BuildRequest(const ProviderConfig& p, const PromptProfile& profile,
                         std::span<const std::uint8_t> png,
                         const std::string& api_key) {
  const std::string b64 = Base64Encode(png);
  HttpRequest req;
  req.timeout = std::chrono::seconds(p.timeout_s);
  req.headers.emplace_back("Content-Type", "application/json");
  json body;
  switch (p.kind) {
    case ProviderKind::kOpenAiCompat:
      req.url = p.EffectiveEndpoint() + "/chat/completions";
      req.headers.emplace_back("Authorization", "Bearer " + api_key);
      body = {{"model", p.model_name},
              {"temperature", p.temperature},
              {"max_tokens", p.max_output_tokens},
              {"messages",
               {{{"role", "system"}, {"content", profile.system_prompt}},
                {{"role", "user"},
                 {"content",
                  {{{"type", "text"}, {"text", profile.user_prompt}},
                   {{"type", "image_url"},
                    {"image_url", {{"url", "data:image/png;base64," + b64}}}}}}}}}};
      break;
    case ProviderKind::kAnthropic:
      req.url = p.EffectiveEndpoint() + "/messages";
      req.headers.emplace_back("x-api-key", api_key);
      req.headers.emplace_back("anthropic-version", "2023-06-01");
      body = {{"model", p.model_name},
              {"temperature", p.temperature},
              {"max_tokens", p.max_output_tokens},
              {"system", profile.system_prompt},
              {"messages",
               {{{"role", "user"},
                 {"content",
                  {{{"type", "image"},
                    {"source",
                     {{"type", "base64"}, {"media_type", "image/png"}, {"data", b64}}}},
                   {{"type", "text"}, {"text", profile.user_prompt}}}}}}}};
      break;
    case ProviderKind::kGoogle:
      req.url = p.EffectiveEndpoint() + "/models/" + p.model_name + ":generateContent";
      req.headers.emplace_back("x-goog-api-key", api_key);
      body = {{"systemInstruction", {{"parts", {{{"text", profile.system_prompt}}}}}},
              {"contents",
               {{{"role", "user"},
                 {"parts",
                  {{{"text", profile.user_prompt}},
                   {{"inlineData", {{"mimeType", "image/png"}, {"data", b64}}}}}}}}},
              {"generationConfig",
               {{"temperature", p.temperature},
                {"maxOutputTokens", p.max_output_tokens}}}};
      break;
  }
  req.body = body.dump();
  return req;
}

namespace {

std::string JoinTextParts(const json& parts, const char* source) {
  if (!parts.is_array()) throw ParseError(source, 0, "expected an array of parts");
  std::string out;
  for (const json& part : parts) {
    auto it = part.find("text");
    if (it != part.end() && it->is_string()) {
      auto type = part.find("type");
      if (type != part.end() && *type != "text") continue;
      out += it->get<std::string>();
    }
  }
  return out;
}

}  // namespace

std::string ParseResponseText(ProviderKind kind, const std::string& body) {
  const char* source = "provider response";
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ParseError(source, 0, std::string("invalid JSON: ") + e.what());
  }
  try {
    switch (kind) {
      case ProviderKind::kOpenAiCompat: {
        const json& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_string()) return content.get<std::string>();
        return JoinTextParts(content, source);
      }
      case ProviderKind::kAnthropic:
        return JoinTextParts(j.at("content"), source);
      case ProviderKind::kGoogle:
        return JoinTextParts(j.at("candidates").at(0).at("content").at("parts"),
                             source);
    }
  } catch (const json::exception& e) {
    throw ParseError(source, 0, std::string("unexpected shape: ") + e.what());
  }
  throw ParseError(source, 0, "unknown provider kind");
}

}  // namespace newsocr::recognize
