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
#ifndef NEWSOCR_RECOGNIZE_H_
#define NEWSOCR_RECOGNIZE_H_

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <semaphore>
#include <span>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "newsocr/image.h"
#include "newsocr/providers.h"
#include "newsocr/rate_limit.h"
#include "newsocr/refusal.h"
#include "newsocr/transport.h"

namespace newsocr::recognize {

inline constexpr std::string_view kUnreadableToken = "[UNREADABLE]";

struct RecognitionOutcome {
  std::string sample_id;
  std::string model_name;
  std::string text;  // refusals keep the refusal message verbatim
  bool refusal = false;
  std::string raw_digest;
  std::string image_digest;
  std::int64_t latency_ms = 0;
  bool from_cache = false;
  std::optional<std::string> transport_error;

  friend bool operator==(const RecognitionOutcome&,
                         const RecognitionOutcome&) = default;
};

nlohmann::json ToJson(const RecognitionOutcome& outcome);
RecognitionOutcome OutcomeFromJson(const nlohmann::json& j,
                                   const std::string& source, int line);

// SHA-256 of the canonical JSON of the fields that determine a response.
std::string RequestDigest(const std::string& model,
                          const std::string& system_prompt,
                          const std::string& user_prompt,
                          const std::string& image_sha256, double temperature);

// Content-addressed store: <root>/<first two hex digits>/<digest>.json.
// Writes are atomic renames, so concurrent writers of the same digest leave
// one complete record.
class ResponseCache {
 public:
  struct Entry {
    RecognitionOutcome outcome;
    std::string raw_response;
  };

  explicit ResponseCache(std::filesystem::path root);

  std::optional<Entry> Get(const std::string& digest) const;
  void Put(const std::string& digest, const Entry& entry);
  std::filesystem::path PathFor(const std::string& digest) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
};

// Sends images to one provider. Safe to call from many threads; the rate
// limit and concurrency cap apply across all callers of one instance.
class Recognizer {
 public:
  // `cache` may be null. `clock` defaults to the system clock.
  Recognizer(ProviderConfig provider, PromptProfile profile,
             std::shared_ptr<Transport> transport,
             std::shared_ptr<ResponseCache> cache,
             std::shared_ptr<Clock> clock = nullptr,
             RefusalClassifier classifier = RefusalClassifier());

  RecognitionOutcome Transcribe(const RasterImage& image,
                                const std::string& sample_id);

  // Requests handed to the transport, retries included.
  int network_calls() const { return network_calls_.load(); }
  const ProviderConfig& provider() const { return provider_; }
  const PromptProfile& profile() const { return profile_; }

 private:
  RecognitionOutcome Live(const RasterImage& image, const std::string& sample_id);
  RecognitionOutcome Replay(const RasterImage& image,
                            const std::string& sample_id) const;
  std::chrono::milliseconds Backoff(int attempt);

  ProviderConfig provider_;
  PromptProfile profile_;
  std::shared_ptr<Transport> transport_;
  std::shared_ptr<ResponseCache> cache_;
  std::shared_ptr<Clock> clock_;
  RefusalClassifier classifier_;
  RateLimiter limiter_;
  std::counting_semaphore<> slots_;
  std::atomic<int> network_calls_{0};
  std::mutex rng_mu_;
  std::mt19937_64 rng_;
  std::map<std::string, std::string> replay_;  // image digest -> text
};

// Joins parts with '\n'; refusals and transport failures contribute
// kUnreadableToken.
std::string StitchTranscripts(std::span<const RecognitionOutcome> parts);

}  // namespace newsocr::recognize

#endif  // NEWSOCR_RECOGNIZE_H_
