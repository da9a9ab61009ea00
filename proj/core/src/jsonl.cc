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
#include "newsocr/jsonl.h"

#include <algorithm>
#include <fstream>

#include "newsocr/error.h"

namespace newsocr {

using nlohmann::json;

void ForEachJsonLine(std::istream& in, const std::string& source,
                     const std::function<void(const json&, int)>& fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const bool blank =
        std::all_of(line.begin(), line.end(), [](unsigned char c) {
          return c == ' ' || c == '\t' || c == '\r';
        });
    if (blank) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!record.is_object()) {
      throw ParseError(source, line_no, "record must be a JSON object");
    }
    fn(record, line_no);
  }
}

void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const json&, int)>& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  ForEachJsonLine(in, path.string(), fn);
}

const json& RequireField(const json& record, const char* key,
                         const std::string& source, int line) {
  auto it = record.find(key);
  if (it == record.end()) {
    throw ParseError(source, line, std::string("missing '") + key + "'");
  }
  return *it;
}

std::string RequireString(const json& record, const char* key,
                          const std::string& source, int line) {
  const json& v = RequireField(record, key, source, line);
  if (!v.is_string()) {
    throw ParseError(source, line, std::string("'") + key + "' must be a string");
  }
  return v.get<std::string>();
}

double RequireNumber(const json& record, const char* key,
                     const std::string& source, int line) {
  const json& v = RequireField(record, key, source, line);
  if (!v.is_number()) {
    throw ParseError(source, line, std::string("'") + key + "' must be a number");
  }
  return v.get<double>();
}

}  // namespace newsocr
