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
#ifndef NEWSOCR_DETECT_H_
#define NEWSOCR_DETECT_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsocr/boxes.h"
#include "newsocr/image.h"

namespace newsocr::detect {

enum class Task { kArticle, kColumn };

std::string_view TaskName(Task task);  // "article" / "column"
Task ParseTask(std::string_view name);

struct DetectorConfig {
  std::filesystem::path model_path;
  Task task = Task::kArticle;
  int input_size = 640;
  double confidence_threshold = 0.25;
  double nms_iou_threshold = 0.45;

  void Validate() const;
};

// Aspect-preserving fit of a W x H image into a size x size square, centred,
// padding filled with kLetterboxFill.
struct Letterbox {
  int size = 0;
  double scale = 1;
  int resized_width = 0;
  int resized_height = 0;
  int pad_x = 0;
  int pad_y = 0;

  BoundingBox ToModel(const BoundingBox& image_box) const;
  BoundingBox ToImage(const BoundingBox& model_box) const;
};

inline constexpr std::uint8_t kLetterboxFill = 114;

Letterbox ComputeLetterbox(int width, int height, int size);

// RGB, planar NCHW, values in [0,1]. Gray input is replicated to 3 planes.
std::vector<float> LetterboxTensor(const RasterImage& image,
                                   const Letterbox& letterbox);

// Candidate rows in letterbox pixels: (cx, cy, w, h, score_0 .. score_{C-1}).
struct RawRows {
  int count = 0;
  int width = 0;  // 4 + number of classes
  std::vector<float> values;  // row-major, count * width
  Letterbox letterbox;
};

// Rows whose best class score reaches `confidence_threshold`, mapped back to
// image pixels and clamped; rows that collapse after clamping are dropped.
std::vector<Detection> DecodeRows(const RawRows& rows, int image_width,
                                  int image_height,
                                  double confidence_threshold);

// Greedy per-class suppression in descending confidence; a box is dropped
// when its IoU with a kept box of the same class exceeds `iou_threshold`.
std::vector<Detection> NonMaxSuppression(std::vector<Detection> candidates,
                                         double iou_threshold);

// Either undecoded model rows or final image-space detections.
using BackendOutput = std::variant<RawRows, std::vector<Detection>>;

// Implementations must tolerate concurrent Infer calls.
class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;
  virtual std::string Name() const = 0;
  virtual BackendOutput Infer(const RasterImage& image,
                              const DetectorConfig& config) const = 0;
};

std::vector<Detection> DetectRegions(const RasterImage& image,
                                     const DetectorBackend& backend,
                                     const DetectorConfig& config);

// COLUMN: centre x descending, ties top to bottom. ARTICLE: boxes whose
// vertical overlap is at least half the shorter height share a row (taken
// transitively); rows top to bottom, right to left within a row.
std::vector<Detection> ReadingOrder(const std::vector<Detection>& detections,
                                    Task task);

// One line of a detection fixture or detections export.
struct DetectionRecord {
  std::string image_digest;
  Task task = Task::kArticle;
  std::vector<Detection> detections;
  std::optional<std::string> sample_id;  // exports only
};

nlohmann::json ToJson(const DetectionRecord& record);
DetectionRecord DetectionRecordFromJson(const nlohmann::json& record,
                                        const std::string& source, int line);
std::vector<DetectionRecord> LoadDetectionRecords(
    const std::filesystem::path& path);
void WriteDetectionRecords(const std::vector<DetectionRecord>& records,
                           std::ostream& out);

// Serves recorded detections by image digest for one task.
class ReplayDetector : public DetectorBackend {
 public:
  ReplayDetector(const std::filesystem::path& fixture, Task task);
  ReplayDetector(const std::vector<DetectionRecord>& records, Task task);

  std::string Name() const override { return "replay"; }
  BackendOutput Infer(const RasterImage& image,
                      const DetectorConfig& config) const override;
  std::size_t size() const { return by_digest_.size(); }

 private:
  Task task_;
  std::map<std::string, std::vector<Detection>> by_digest_;
};

// Runs an interchange-format model with input 1x3xSxS and output [1,A,B]
// holding RawRows either row-major (B = 4 + C) or channel-first (A = 4 + C,
// detected when A < B). Construction performs one dry run at input_size so
// model/config shape mismatches fail early with ModelError.
class NeuralDetector : public DetectorBackend {
 public:
  NeuralDetector(const std::filesystem::path& model_path, int input_size);
  ~NeuralDetector() override;

  std::string Name() const override { return "neural"; }
  BackendOutput Infer(const RasterImage& image,
                      const DetectorConfig& config) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int input_size_;
};

enum class BackendKind { kNeural, kReplay };

std::string_view BackendKindName(BackendKind kind);
BackendKind ParseBackendKind(std::string_view name);

std::unique_ptr<DetectorBackend> MakeDetectorBackend(
    BackendKind kind, const DetectorConfig& config,
    const std::filesystem::path& fixture);

}  // namespace newsocr::detect

#endif  // NEWSOCR_DETECT_H_
