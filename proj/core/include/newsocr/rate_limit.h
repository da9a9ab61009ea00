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
#ifndef NEWSOCR_RATE_LIMIT_H_
#define NEWSOCR_RATE_LIMIT_H_

#include <chrono>
#include <condition_variable>
#include <deque>
#include <mutex>

namespace newsocr {

class Clock {
 public:
  using Duration = std::chrono::nanoseconds;
  using TimePoint = std::chrono::time_point<std::chrono::steady_clock, Duration>;

  virtual ~Clock() = default;
  virtual TimePoint Now() const = 0;
  virtual void SleepUntil(TimePoint t) = 0;
};

class SystemClock : public Clock {
 public:
  TimePoint Now() const override;
  void SleepUntil(TimePoint t) override;
};

// Manually advanced clock; SleepUntil jumps time forward instead of blocking.
class FakeClock : public Clock {
 public:
  TimePoint Now() const override;
  void SleepUntil(TimePoint t) override;
  void Advance(Duration d);

 private:
  mutable std::mutex mu_;
  TimePoint now_{};
};

// Sliding-window log: Acquire blocks until fewer than `per_minute` grants
// fall inside the trailing 60 s window, then records a grant.
class RateLimiter {
 public:
  RateLimiter(int per_minute, Clock& clock);

  // Returns the time at which the grant was recorded.
  Clock::TimePoint Acquire();

 private:
  int per_minute_;
  Clock& clock_;
  std::mutex mu_;
  std::deque<Clock::TimePoint> grants_;
};

}  // namespace newsocr

#endif  // NEWSOCR_RATE_LIMIT_H_
