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
#include "newsocr/log.h"

#include <memory>
#include <mutex>

#include <spdlog/pattern_formatter.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "newsocr/error.h"

namespace newsocr::log {
namespace {

struct State {
  std::mutex mu;
  std::shared_ptr<spdlog::logger> logger;
  Format format = Format::kText;
};

State& Global() {
  static State state;
  return state;
}

spdlog::level::level_enum ToSpd(Level level) {
  switch (level) {
    case Level::kDebug: return spdlog::level::debug;
    case Level::kInfo: return spdlog::level::info;
    case Level::kWarn: return spdlog::level::warn;
    case Level::kError: return spdlog::level::err;
    case Level::kOff: return spdlog::level::off;
  }
  return spdlog::level::info;
}

void Install(State& s, Format format, Level level) {
  if (!s.logger) {
    s.logger = std::make_shared<spdlog::logger>(
        "newsocr", std::make_shared<spdlog::sinks::stderr_sink_mt>());
  }
  // The JSON pattern wraps the caller's pre-rendered fields.
  const std::string pattern =
      format == Format::kJsonl
          ? R"({"ts":"%Y-%m-%dT%H:%M:%S.%eZ","level":"%l",%v})"
          : "%Y-%m-%d %H:%M:%S.%e [%l] %v";
  s.logger->set_formatter(std::make_unique<spdlog::pattern_formatter>(
      pattern, spdlog::pattern_time_type::utc));
  s.logger->set_level(ToSpd(level));
  s.logger->flush_on(spdlog::level::trace);
  s.format = format;
}

std::string Render(Format format, std::string_view event, const nlohmann::json& fields) {
  if (format == Format::kJsonl) {
    std::string out = "\"event\":" + nlohmann::json(event).dump();
    if (fields.is_object()) {
      for (const auto& [k, v] : fields.items()) {
        out += "," + nlohmann::json(k).dump() + ":" +
               v.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
      }
    }
    return out;
  }
  std::string out(event);
  if (fields.is_object()) {
    for (const auto& [k, v] : fields.items()) {
      out += " " + k + "=" +
             (v.is_string() ? v.get<std::string>()
                            : v.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace));
    }
  }
  return out;
}

}  // namespace

Format ParseFormat(std::string_view name) {
  if (name == "text") return Format::kText;
  if (name == "jsonl") return Format::kJsonl;
  throw ConfigError("unknown log format '" + std::string(name) + "' (text, jsonl)");
}

Level ParseLevel(std::string_view name) {
  if (name == "debug") return Level::kDebug;
  if (name == "info") return Level::kInfo;
  if (name == "warn") return Level::kWarn;
  if (name == "error") return Level::kError;
  if (name == "off") return Level::kOff;
  throw ConfigError("unknown log level '" + std::string(name) + "'");
}

void Configure(Format format, Level level) {
  State& s = Global();
  std::lock_guard<std::mutex> lock(s.mu);
  Install(s, format, level);
}

void Event(Level level, std::string_view event, const nlohmann::json& fields) {
  State& s = Global();
  std::shared_ptr<spdlog::logger> logger;
  Format format;
  {
    std::lock_guard<std::mutex> lock(s.mu);
    if (!s.logger) Install(s, Format::kText, Level::kInfo);
    logger = s.logger;
    format = s.format;
  }
  const auto spd = ToSpd(level);
  if (!logger->should_log(spd)) return;
  logger->log(spd, "{}", Render(format, event, fields));
}

}  // namespace newsocr::log
