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
#include "newsocr/rate_limit.h"

#include <algorithm>
#include <thread>

#include "newsocr/error.h"

namespace newsocr {

Clock::TimePoint SystemClock::Now() const {
  return std::chrono::time_point_cast<Duration>(std::chrono::steady_clock::now());
}

void SystemClock::SleepUntil(TimePoint t) { std::this_thread::sleep_until(t); }

Clock::TimePoint FakeClock::Now() const {
  std::lock_guard<std::mutex> lock(mu_);
  return now_;
}

void FakeClock::SleepUntil(TimePoint t) {
  std::lock_guard<std::mutex> lock(mu_);
  now_ = std::max(now_, t);
}

void FakeClock::Advance(Duration d) {
  std::lock_guard<std::mutex> lock(mu_);
  now_ += d;
}

RateLimiter::RateLimiter(int per_minute, Clock& clock)
    : per_minute_(per_minute), clock_(clock) {
  if (per_minute < 1) throw ConfigError("requests_per_minute must be >= 1");
}

Clock::TimePoint RateLimiter::Acquire() {
  constexpr auto kWindow = std::chrono::minutes(1);
  for (;;) {
    Clock::TimePoint wake;
    {
      std::lock_guard<std::mutex> lock(mu_);
      const Clock::TimePoint now = clock_.Now();
      while (!grants_.empty() && grants_.front() + kWindow <= now) {
        grants_.pop_front();
      }
      if (static_cast<int>(grants_.size()) < per_minute_) {
        grants_.push_back(now);
        return now;
      }
      wake = grants_.front() + kWindow;
    }
    clock_.SleepUntil(wake);
  }
}

}  // namespace newsocr
