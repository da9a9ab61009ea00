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
#ifndef NEWSOCR_JSONL_H_
#define NEWSOCR_JSONL_H_

#include <filesystem>
#include <functional>
#include <istream>
#include <string>

#include <nlohmann/json.hpp>

namespace newsocr {

// Calls `fn(record, line_number)` for every non-blank line. Lines that are
// not JSON objects raise ParseError; exceptions thrown by `fn` propagate.
void ForEachJsonLine(std::istream& in, const std::string& source,
                     const std::function<void(const nlohmann::json&, int)>& fn);
void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const nlohmann::json&, int)>& fn);

// Typed field access that reports the offending key and line.
const nlohmann::json& RequireField(const nlohmann::json& record,
                                   const char* key, const std::string& source,
                                   int line);
std::string RequireString(const nlohmann::json& record, const char* key,
                          const std::string& source, int line);
double RequireNumber(const nlohmann::json& record, const char* key,
                     const std::string& source, int line);

}  // namespace newsocr

#endif  // NEWSOCR_JSONL_H_
