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
#ifndef NEWSOCR_LOG_H_
#define NEWSOCR_LOG_H_

#include <string_view>

#include <nlohmann/json.hpp>

// Diagnostics go to stderr, either as human-readable lines or as one JSON
// object per line for long batch runs.
namespace newsocr::log {

enum class Format { kText, kJsonl };
enum class Level { kDebug, kInfo, kWarn, kError, kOff };

Format ParseFormat(std::string_view name);  // "text" / "jsonl"
Level ParseLevel(std::string_view name);    // debug, info, warn, error, off

void Configure(Format format, Level level);

// `fields` must be a JSON object (or null).
void Event(Level level, std::string_view event,
           const nlohmann::json& fields = nullptr);

inline void Info(std::string_view event, const nlohmann::json& fields = nullptr) {
  Event(Level::kInfo, event, fields);
}
inline void Warn(std::string_view event, const nlohmann::json& fields = nullptr) {
  Event(Level::kWarn, event, fields);
}
inline void Error(std::string_view event, const nlohmann::json& fields = nullptr) {
  Event(Level::kError, event, fields);
}

}  // namespace newsocr::log

#endif  // NEWSOCR_LOG_H_
