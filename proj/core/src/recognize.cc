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
#include "newsocr/recognize.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "newsocr/digest.h"
#include "newsocr/error.h"
#include "newsocr/image_io.h"
#include "newsocr/jsonl.h"

namespace newsocr::recognize {

using nlohmann::json;

json ToJson(const RecognitionOutcome& o) {
  json j = {{"sample_id", o.sample_id},
            {"model_name", o.model_name},
            {"text", o.text},
            {"refusal", o.refusal},
            {"raw_digest", o.raw_digest},
            {"image_digest", o.image_digest},
            {"latency_ms", o.latency_ms},
            {"from_cache", o.from_cache}};
  if (o.transport_error) j["transport_error"] = *o.transport_error;
  return j;
}

RecognitionOutcome OutcomeFromJson(const json& j, const std::string& source,
                                   int line) {
  RecognitionOutcome o;
  o.sample_id = RequireString(j, "sample_id", source, line);
  o.model_name = RequireString(j, "model_name", source, line);
  o.text = RequireString(j, "text", source, line);
  const json& refusal = RequireField(j, "refusal", source, line);
  if (!refusal.is_boolean()) throw ParseError(source, line, "'refusal' must be a boolean");
  o.refusal = refusal.get<bool>();
  if (j.contains("raw_digest")) o.raw_digest = RequireString(j, "raw_digest", source, line);
  if (j.contains("image_digest")) {
    o.image_digest = RequireString(j, "image_digest", source, line);
  }
  if (j.contains("latency_ms")) {
    o.latency_ms = static_cast<std::int64_t>(RequireNumber(j, "latency_ms", source, line));
  }
  if (j.contains("from_cache")) {
    const json& fc = j.at("from_cache");
    if (!fc.is_boolean()) throw ParseError(source, line, "'from_cache' must be a boolean");
    o.from_cache = fc.get<bool>();
  }
  if (j.contains("transport_error") && !j.at("transport_error").is_null()) {
    o.transport_error = RequireString(j, "transport_error", source, line);
  }
  return o;
}

std::string RequestDigest(const std::string& model, const std::string& system_prompt,
                          const std::string& user_prompt,
                          const std::string& image_sha256, double temperature) {
  const json canonical = {{"image_sha256", image_sha256},
                          {"model", model},
                          {"system", system_prompt},
                          {"temperature", temperature},
                          {"user", user_prompt}};
  return Sha256Hex(canonical.dump());
}

ResponseCache::ResponseCache(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
}

std::filesystem::path ResponseCache::PathFor(const std::string& digest) const {
  if (digest.size() < 3) throw ValidationError("cache digest too short");
  return root_ / digest.substr(0, 2) / (digest + ".json");
}

std::optional<ResponseCache::Entry> ResponseCache::Get(const std::string& digest) const {
  const std::filesystem::path path = PathFor(digest);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), 1, std::string("corrupt cache record: ") + e.what());
  }
  Entry e;
  e.outcome = OutcomeFromJson(RequireField(j, "outcome", path.string(), 1),
                              path.string(), 1);
  e.raw_response = RequireString(j, "raw_response", path.string(), 1);
  return e;
}

void ResponseCache::Put(const std::string& digest, const Entry& entry) {
  const json j = {{"outcome", ToJson(entry.outcome)},
                  {"raw_response", entry.raw_response}};
  WriteFileText(PathFor(digest), j.dump(2) + "\n");
}

Recognizer::Recognizer(ProviderConfig provider, PromptProfile profile,
                       std::shared_ptr<Transport> transport,
                       std::shared_ptr<ResponseCache> cache,
                       std::shared_ptr<Clock> clock, RefusalClassifier classifier)
    : provider_(std::move(provider)),
      profile_(std::move(profile)),
      transport_(std::move(transport)),
      cache_(std::move(cache)),
      clock_(clock ? std::move(clock) : std::make_shared<SystemClock>()),
      classifier_(std::move(classifier)),
      limiter_(provider_.requests_per_minute, *clock_),
      slots_(provider_.max_concurrency),
      rng_(0x6e65777326ULL) {
  provider_.Validate();
  if (provider_.mode == ProviderMode::kReplay) {
    const std::string source = provider_.replay_fixture.string();
    ForEachJsonLine(provider_.replay_fixture, [&](const json& j, int line) {
      if (RequireString(j, "model", source, line) != provider_.model_name) return;
      const std::string digest = RequireString(j, "image_digest", source, line);
      const std::string text = RequireString(j, "text", source, line);
      auto [it, inserted] = replay_.emplace(digest, text);
      if (!inserted && it->second != text) {
        throw ParseError(source, line, "conflicting text for digest " + digest);
      }
    });
  } else if (!transport_) {
    throw ConfigError("live provider needs a transport");
  }
}

RecognitionOutcome Recognizer::Transcribe(const RasterImage& image,
                                          const std::string& sample_id) {
  if (provider_.mode == ProviderMode::kReplay) return Replay(image, sample_id);
  return Live(image, sample_id);
}

RecognitionOutcome Recognizer::Replay(const RasterImage& image,
                                      const std::string& sample_id) const {
  RecognitionOutcome o;
  o.sample_id = sample_id;
  o.model_name = provider_.model_name;
  o.image_digest = ImageDigest(image);
  auto it = replay_.find(o.image_digest);
  if (it == replay_.end()) {
    throw FixtureMissError("recognition (" + provider_.model_name + ")",
                           o.image_digest);
  }
  const std::vector<std::uint8_t> png = EncodePng(image);
  o.raw_digest = RequestDigest(provider_.model_name, profile_.system_prompt,
                               profile_.user_prompt, Sha256Hex(png),
                               provider_.temperature);
  o.text = it->second;
  o.refusal = classifier_.IsRefusal(o.text);
  return o;
}

std::chrono::milliseconds Recognizer::Backoff(int attempt) {
  double u;
  {
    std::lock_guard<std::mutex> lock(rng_mu_);
    u = std::uniform_real_distribution<double>(-1.0, 1.0)(rng_);
  }
  const double nominal =
      provider_.retry.base_backoff_ms * static_cast<double>(1LL << std::min(attempt - 1, 20));
  return std::chrono::milliseconds(
      static_cast<std::int64_t>(nominal * (1.0 + provider_.retry.jitter * u)));
}

RecognitionOutcome Recognizer::Live(const RasterImage& image,
                                    const std::string& sample_id) {
  const std::vector<std::uint8_t> png = EncodePng(image);
  RecognitionOutcome o;
  o.sample_id = sample_id;
  o.model_name = provider_.model_name;
  o.image_digest = ImageDigest(image);
  o.raw_digest = RequestDigest(provider_.model_name, profile_.system_prompt,
                               profile_.user_prompt, Sha256Hex(png),
                               provider_.temperature);
  if (cache_) {
    if (auto hit = cache_->Get(o.raw_digest)) {
      RecognitionOutcome cached = hit->outcome;
      cached.sample_id = sample_id;
      cached.from_cache = true;
      return cached;
    }
  }
  const char* key = std::getenv(provider_.api_key_env.c_str());
  if (key == nullptr || *key == '\0') {
    throw ConfigError("environment variable " + provider_.api_key_env +
                      " with the API key for " + provider_.model_name + " is not set");
  }
  const HttpRequest request = BuildRequest(provider_, profile_, png, key);

  const Clock::TimePoint start = clock_->Now();
  std::string last_error;
  std::string raw;
  bool ok = false;
  for (int attempt = 1; attempt <= provider_.retry.max_attempts; ++attempt) {
    bool retryable = false;
    limiter_.Acquire();
    slots_.acquire();
    HttpResponse response;
    bool received = false;
    try {
      ++network_calls_;
      response = transport_->Post(request);
      received = true;
    } catch (const TransportError& e) {
      last_error = e.what();
      retryable = true;
    }
    slots_.release();
    if (received) {
      if (response.status >= 200 && response.status < 300) {
        try {
          o.text = ParseResponseText(provider_.kind, response.body);
          raw = response.body;
          ok = true;
        } catch (const ParseError& e) {
          last_error = e.what();
        }
      } else {
        last_error = "HTTP " + std::to_string(response.status) + ": " +
                     response.body.substr(0, 300);
        retryable = response.status == 429 || response.status >= 500;
      }
    }
    if (ok || !retryable) break;
    if (attempt < provider_.retry.max_attempts) {
      clock_->SleepUntil(clock_->Now() + Backoff(attempt));
    }
  }
  o.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                     clock_->Now() - start)
                     .count();
  if (!ok) {
    o.text.clear();
    o.refusal = false;
    o.transport_error = last_error;
    return o;
  }
  o.refusal = classifier_.IsRefusal(o.text);
  if (cache_) cache_->Put(o.raw_digest, {o, raw});
  return o;
}

std::string StitchTranscripts(std::span<const RecognitionOutcome> parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += '\n';
    const RecognitionOutcome& p = parts[i];
    if (p.refusal || p.transport_error) {
      out += kUnreadableToken;
    } else {
      out += p.text;
    }
  }
  return out;
}

}  // namespace newsocr::recognize
