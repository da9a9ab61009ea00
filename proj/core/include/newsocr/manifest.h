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
#ifndef NEWSOCR_MANIFEST_H_
#define NEWSOCR_MANIFEST_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newsocr/boxes.h"

namespace newsocr {

// One evaluation unit. Paths are kept exactly as written in the manifest;
// use Manifest::Resolve to turn them into filesystem paths.
struct Sample {
  std::string id;
  std::string image;
  std::optional<std::string> text;
  std::optional<std::string> labels;
  std::optional<std::string> pair;

  // True if the sample carries anything to score against.
  bool HasReference() const { return text || labels || pair; }

  friend bool operator==(const Sample&, const Sample&) = default;
};

struct Manifest {
  std::string split_name;
  std::vector<Sample> samples;
  // Directory relative paths are resolved against (the manifest's own).
  std::filesystem::path base_dir;

  std::filesystem::path Resolve(const std::string& path) const;
  const Sample* Find(const std::string& id) const;

  // Throws ValidationError on duplicate ids or empty id/image fields.
  void Validate() const;
};

// Line-delimited JSON records with keys id, image, and optional text,
// labels, pair. Blank lines are skipped. Image files are not checked.
Manifest LoadManifest(const std::filesystem::path& path);

// True when `id` can name a file or directory: non-empty, no leading dot,
// no path separators or NUL.
bool IsFileSafeId(std::string_view id);
Manifest ParseManifest(std::istream& in, const std::string& source_name);

// Canonical form: one compact object per line, keys sorted, raw UTF-8.
std::string FormatSampleLine(const Sample& sample);
void WriteManifest(const Manifest& manifest, std::ostream& out);
void WriteManifest(const Manifest& manifest, const std::filesystem::path& path);

struct YoloLabels {
  std::vector<GroundTruthBox> boxes;
  // Boxes that collapsed to zero area after clamping to the image.
  int dropped = 0;
};

// `class cx cy w h` per line, normalized to the image size. Boxes are
// converted to pixel corners and clamped to [0,W]x[0,H].
YoloLabels LoadYoloLabels(const std::filesystem::path& path, int image_width,
                          int image_height);
YoloLabels ParseYoloLabels(std::istream& in, const std::string& source_name,
                           int image_width, int image_height);

std::string FormatYoloLine(const GroundTruthBox& box, int image_width,
                           int image_height);

}  // namespace newsocr

#endif  // NEWSOCR_MANIFEST_H_
