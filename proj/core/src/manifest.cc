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
#include "newsocr/manifest.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "newsocr/error.h"

namespace newsocr {
namespace {

using nlohmann::json;

bool IsBlank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  });
}

std::optional<std::string> OptionalString(const json& record, const char* key,
                                          const std::string& source, int line) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ParseError(source, line, std::string("field '") + key +
                                       "' must be a string");
  }
  return it->get<std::string>();
}

Sample ParseSample(const std::string& text, const std::string& source,
                   int line) {
  json record;
  try {
    record = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source, line, std::string("invalid JSON: ") + e.what());
  }
  if (!record.is_object()) {
    throw ParseError(source, line, "record must be a JSON object");
  }
  static const std::unordered_set<std::string> kKnown = {"id", "image", "text",
                                                         "labels", "pair"};
  for (const auto& [key, value] : record.items()) {
    if (!kKnown.contains(key)) {
      throw ParseError(source, line, "unknown field '" + key + "'");
    }
  }
  Sample s;
  auto id = OptionalString(record, "id", source, line);
  auto image = OptionalString(record, "image", source, line);
  if (!id || id->empty()) throw ParseError(source, line, "missing 'id'");
  if (!image || image->empty()) {
    throw ParseError(source, line, "missing 'image'");
  }
  s.id = *id;
  s.image = *image;
  s.text = OptionalString(record, "text", source, line);
  s.labels = OptionalString(record, "labels", source, line);
  s.pair = OptionalString(record, "pair", source, line);
  return s;
}

double ParseNumber(const std::string& token, const std::string& source,
                   int line) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError(source, line, "non-numeric field '" + token + "'");
  }
  return v;
}

}  // namespace

std::filesystem::path Manifest::Resolve(const std::string& path) const {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

const Sample* Manifest::Find(const std::string& id) const {
  for (const auto& s : samples) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

void Manifest::Validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& s : samples) {
    if (s.id.empty()) throw ValidationError("sample with empty id");
    if (s.image.empty()) {
      throw ValidationError("sample '" + s.id + "' has no image path");
    }
    if (!seen.insert(s.id).second) {
      throw ValidationError("duplicate sample id '" + s.id + "'");
    }
  }
}

Manifest ParseManifest(std::istream& in, const std::string& source_name) {
  Manifest m;
  std::unordered_set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    Sample s = ParseSample(line, source_name, line_no);
    if (!seen.insert(s.id).second) {
      throw ValidationError(source_name + ":" + std::to_string(line_no) +
                            ": duplicate sample id '" + s.id + "'");
    }
    m.samples.push_back(std::move(s));
  }
  return m;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  Manifest m = ParseManifest(in, path.string());
  m.split_name = path.stem().string();
  m.base_dir = path.parent_path();
  return m;
}

std::string FormatSampleLine(const Sample& sample) {
  json record = json::object();
  record["id"] = sample.id;
  record["image"] = sample.image;
  if (sample.text) record["text"] = *sample.text;
  if (sample.labels) record["labels"] = *sample.labels;
  if (sample.pair) record["pair"] = *sample.pair;
  return record.dump();
}

void WriteManifest(const Manifest& manifest, std::ostream& out) {
  for (const auto& s : manifest.samples) {
    out << FormatSampleLine(s) << '\n';
  }
}

void WriteManifest(const Manifest& manifest,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  WriteManifest(manifest, out);
}

YoloLabels ParseYoloLabels(std::istream& in, const std::string& source_name,
                           int image_width, int image_height) {
  if (image_width < 1 || image_height < 1) {
    throw ValidationError("label image size must be positive");
  }
  const double w_img = image_width;
  const double h_img = image_height;
  YoloLabels out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.size() != 5) {
      throw ParseError(source_name, line_no,
                       "expected 5 fields (class cx cy w h), got " +
                           std::to_string(tokens.size()));
    }
    const double cls = ParseNumber(tokens[0], source_name, line_no);
    if (cls < 0 || cls != std::floor(cls) || cls > 1e9) {
      throw ParseError(source_name, line_no,
                       "class must be a non-negative integer, got '" +
                           tokens[0] + "'");
    }
    const double cx = ParseNumber(tokens[1], source_name, line_no);
    const double cy = ParseNumber(tokens[2], source_name, line_no);
    const double w = ParseNumber(tokens[3], source_name, line_no);
    const double h = ParseNumber(tokens[4], source_name, line_no);

    BoundingBox b;
    b.x_min = std::clamp((cx - w / 2) * w_img, 0.0, w_img);
    b.y_min = std::clamp((cy - h / 2) * h_img, 0.0, h_img);
    b.x_max = std::clamp((cx + w / 2) * w_img, 0.0, w_img);
    b.y_max = std::clamp((cy + h / 2) * h_img, 0.0, h_img);
    if (!b.IsValid()) {
      ++out.dropped;
      continue;
    }
    out.boxes.push_back({b, static_cast<int>(cls)});
  }
  return out;
}

YoloLabels LoadYoloLabels(const std::filesystem::path& path, int image_width,
                          int image_height) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open label file " + path.string());
  return ParseYoloLabels(in, path.string(), image_width, image_height);
}

std::string FormatYoloLine(const GroundTruthBox& box, int image_width,
                           int image_height) {
  const double w = box.box.Width() / image_width;
  const double h = box.box.Height() / image_height;
  const double cx = box.box.CenterX() / image_width;
  const double cy = box.box.CenterY() / image_height;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d %.17g %.17g %.17g %.17g", box.class_id,
                cx, cy, w, h);
  return buf;
}

bool IsFileSafeId(std::string_view id) {
  if (id.empty() || id.front() == '.') return false;
  for (char c : id) {
    if (c == '/' || c == '\\' || c == '\0') return false;
  }
  return true;
}

}  // namespace newsocr
