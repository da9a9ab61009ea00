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
#include "newsocr/error.h"

namespace newsocr {
namespace {

std::string FormatLocation(const std::string& source, int line,
                           const std::string& what) {
  if (line > 0) {
    return source + ":" + std::to_string(line) + ": " + what;
  }
  return source + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& source, int line,
                       const std::string& what)
    : Error(FormatLocation(source, line, what)), source_(source), line_(line) {}

FixtureMissError::FixtureMissError(const std::string& kind,
                                   const std::string& digest)
    : Error("fixture miss: no " + kind + " record for digest " + digest),
      digest_(digest) {}

}  // namespace newsocr
