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
#include "newsocr/detect.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "newsocr/detection_metrics.h"
#include "newsocr/digest.h"
#include "newsocr/error.h"
#include "newsocr/imageops.h"
#include "newsocr/jsonl.h"
#include "onnx_model.h"

namespace newsocr::detect {

using nlohmann::json;

std::string_view TaskName(Task task) {
  return task == Task::kArticle ? "article" : "column";
}

Task ParseTask(std::string_view name) {
  if (name == "article") return Task::kArticle;
  if (name == "column") return Task::kColumn;
  throw ConfigError("unknown detection task '" + std::string(name) +
                    "' (expected article or column)");
}

void DetectorConfig::Validate() const {
  if (!(confidence_threshold >= 0 && confidence_threshold <= 1)) {
    throw ConfigError("confidence_threshold must be in [0,1]");
  }
  if (!(nms_iou_threshold >= 0 && nms_iou_threshold <= 1)) {
    throw ConfigError("nms_iou_threshold must be in [0,1]");
  }
  if (input_size < 32 || input_size % 32 != 0) {
    throw ConfigError("input_size must be a positive multiple of 32, got " +
                      std::to_string(input_size));
  }
}

BoundingBox Letterbox::ToModel(const BoundingBox& b) const {
  BoundingBox out;
  out.x_min = b.x_min * scale + pad_x;
  out.y_min = b.y_min * scale + pad_y;
  out.x_max = b.x_max * scale + pad_x;
  out.y_max = b.y_max * scale + pad_y;
  return out;
}

BoundingBox Letterbox::ToImage(const BoundingBox& b) const {
  BoundingBox out;
  out.x_min = (b.x_min - pad_x) / scale;
  out.y_min = (b.y_min - pad_y) / scale;
  out.x_max = (b.x_max - pad_x) / scale;
  out.y_max = (b.y_max - pad_y) / scale;
  return out;
}

Letterbox ComputeLetterbox(int width, int height, int size) {
  if (width < 1 || height < 1 || size < 1) {
    throw ValidationError("letterbox needs positive dimensions");
  }
  Letterbox lb;
  lb.size = size;
  lb.scale = std::min(static_cast<double>(size) / width,
                      static_cast<double>(size) / height);
  lb.resized_width = std::clamp(
      static_cast<int>(std::lround(width * lb.scale)), 1, size);
  lb.resized_height = std::clamp(
      static_cast<int>(std::lround(height * lb.scale)), 1, size);
  lb.pad_x = (size - lb.resized_width) / 2;
  lb.pad_y = (size - lb.resized_height) / 2;
  return lb;
}

std::vector<float> LetterboxTensor(const RasterImage& image,
                                   const Letterbox& lb) {
  const RasterImage rgb = image.color_space() == ColorSpace::kRgb
                              ? image
                              : ToRgb(image);
  const RasterImage resized =
      imageops::Resize(rgb, lb.resized_width, lb.resized_height,
                       imageops::ResampleKernel::kBilinear);
  const std::size_t plane = static_cast<std::size_t>(lb.size) * lb.size;
  std::vector<float> tensor(plane * 3, kLetterboxFill / 255.0f);
  for (int c = 0; c < 3; ++c) {
    float* dst = tensor.data() + plane * c;
    for (int y = 0; y < lb.resized_height; ++y) {
      for (int x = 0; x < lb.resized_width; ++x) {
        dst[static_cast<std::size_t>(y + lb.pad_y) * lb.size + x + lb.pad_x] =
            resized.at(x, y, c) / 255.0f;
      }
    }
  }
  return tensor;
}

std::vector<Detection> DecodeRows(const RawRows& rows, int image_width,
                                  int image_height,
                                  double confidence_threshold) {
  if (rows.width < 5) {
    throw ModelError("detector rows need at least 5 values, got " +
                     std::to_string(rows.width));
  }
  if (rows.values.size() !=
      static_cast<std::size_t>(rows.count) * static_cast<std::size_t>(rows.width)) {
    throw ModelError("detector output size does not match its row shape");
  }
  std::vector<Detection> out;
  for (int i = 0; i < rows.count; ++i) {
    const float* r = rows.values.data() + static_cast<std::size_t>(i) * rows.width;
    int best = 0;
    for (int c = 1; c < rows.width - 4; ++c) {
      if (r[4 + c] > r[4 + best]) best = c;
    }
    const double score = r[4 + best];
    if (!(score >= confidence_threshold)) continue;  // also drops NaN
    BoundingBox model_box;
    model_box.x_min = r[0] - r[2] / 2.0;
    model_box.y_min = r[1] - r[3] / 2.0;
    model_box.x_max = r[0] + r[2] / 2.0;
    model_box.y_max = r[1] + r[3] / 2.0;
    BoundingBox b = rows.letterbox.ToImage(model_box);
    b.x_min = std::clamp(b.x_min, 0.0, static_cast<double>(image_width));
    b.x_max = std::clamp(b.x_max, 0.0, static_cast<double>(image_width));
    b.y_min = std::clamp(b.y_min, 0.0, static_cast<double>(image_height));
    b.y_max = std::clamp(b.y_max, 0.0, static_cast<double>(image_height));
    if (!b.IsValid()) continue;
    out.push_back({b, best, std::min(score, 1.0)});
  }
  return out;
}

std::vector<Detection> NonMaxSuppression(std::vector<Detection> candidates,
                                         double iou_threshold) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.confidence > b.confidence;
                   });
  std::vector<Detection> kept;
  for (const Detection& d : candidates) {
    const bool suppressed =
        std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
          return k.class_id == d.class_id &&
                 metrics::Iou(k.box, d.box) > iou_threshold;
        });
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

std::vector<Detection> DetectRegions(const RasterImage& image,
                                     const DetectorBackend& backend,
                                     const DetectorConfig& config) {
  BackendOutput raw = backend.Infer(image, config);
  if (auto* recorded = std::get_if<std::vector<Detection>>(&raw)) {
    std::stable_sort(recorded->begin(), recorded->end(),
                     [](const Detection& a, const Detection& b) {
                       return a.confidence > b.confidence;
                     });
    return std::move(*recorded);
  }
  const RawRows& rows = std::get<RawRows>(raw);
  return NonMaxSuppression(
      DecodeRows(rows, image.width(), image.height(),
                 config.confidence_threshold),
      config.nms_iou_threshold);
}

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t Find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void Union(std::size_t a, std::size_t b) {
    a = Find(a);
    b = Find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

bool RightToLeft(const Detection& a, const Detection& b) {
  if (a.box.CenterX() != b.box.CenterX()) {
    return a.box.CenterX() > b.box.CenterX();
  }
  return a.box.CenterY() < b.box.CenterY();
}

}  // namespace

std::vector<Detection> ReadingOrder(const std::vector<Detection>& detections,
                                    Task task) {
  std::vector<Detection> out = detections;
  if (task == Task::kColumn) {
    std::stable_sort(out.begin(), out.end(), RightToLeft);
    return out;
  }
  const std::size_t n = out.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const BoundingBox& a = out[i].box;
      const BoundingBox& b = out[j].box;
      const double overlap =
          std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
      if (overlap > 0 && overlap >= 0.5 * std::min(a.Height(), b.Height())) {
        sets.Union(i, j);
      }
    }
  }
  std::map<std::size_t, double> row_top;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = sets.Find(i);
    auto [it, inserted] = row_top.emplace(r, out[i].box.y_min);
    if (!inserted) it->second = std::min(it->second, out[i].box.y_min);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const std::size_t ra = sets.Find(a), rb = sets.Find(b);
    if (ra != rb) {
      if (row_top[ra] != row_top[rb]) return row_top[ra] < row_top[rb];
      return ra < rb;
    }
    return RightToLeft(out[a], out[b]);
  });
  std::vector<Detection> sorted;
  sorted.reserve(n);
  for (std::size_t i : order) sorted.push_back(out[i]);
  return sorted;
}

json ToJson(const DetectionRecord& record) {
  json dets = json::array();
  for (const Detection& d : record.detections) {
    dets.push_back({{"x_min", d.box.x_min},
                    {"y_min", d.box.y_min},
                    {"x_max", d.box.x_max},
                    {"y_max", d.box.y_max},
                    {"class_id", d.class_id},
                    {"confidence", d.confidence}});
  }
  json out = {{"image_digest", record.image_digest},
              {"task", std::string(TaskName(record.task))},
              {"detections", std::move(dets)}};
  if (record.sample_id) out["sample_id"] = *record.sample_id;
  return out;
}

DetectionRecord DetectionRecordFromJson(const json& j, const std::string& source,
                                        int line) {
  DetectionRecord r;
  r.image_digest = RequireString(j, "image_digest", source, line);
  try {
    r.task = ParseTask(RequireString(j, "task", source, line));
  } catch (const ConfigError& e) {
    throw ParseError(source, line, e.what());
  }
  if (j.contains("sample_id")) r.sample_id = RequireString(j, "sample_id", source, line);
  const json& dets = RequireField(j, "detections", source, line);
  if (!dets.is_array()) throw ParseError(source, line, "'detections' must be an array");
  for (const json& d : dets) {
    if (!d.is_object()) throw ParseError(source, line, "detection must be an object");
    BoundingBox b;
    b.x_min = RequireNumber(d, "x_min", source, line);
    b.y_min = RequireNumber(d, "y_min", source, line);
    b.x_max = RequireNumber(d, "x_max", source, line);
    b.y_max = RequireNumber(d, "y_max", source, line);
    if (!b.IsValid()) throw ParseError(source, line, "zero-area or invalid box");
    const json& cls = RequireField(d, "class_id", source, line);
    if (!cls.is_number_integer()) {
      throw ParseError(source, line, "'class_id' must be an integer");
    }
    const double conf = RequireNumber(d, "confidence", source, line);
    if (!(conf >= 0 && conf <= 1)) {
      throw ParseError(source, line, "confidence outside [0,1]");
    }
    r.detections.push_back({b, cls.get<int>(), conf});
  }
  return r;
}

std::vector<DetectionRecord> LoadDetectionRecords(
    const std::filesystem::path& path) {
  std::vector<DetectionRecord> out;
  ForEachJsonLine(path, [&](const json& j, int line) {
    out.push_back(DetectionRecordFromJson(j, path.string(), line));
  });
  return out;
}

void WriteDetectionRecords(const std::vector<DetectionRecord>& records,
                           std::ostream& out) {
  for (const auto& r : records) out << ToJson(r).dump() << '\n';
}

ReplayDetector::ReplayDetector(const std::filesystem::path& fixture, Task task)
    : ReplayDetector(LoadDetectionRecords(fixture), task) {}

ReplayDetector::ReplayDetector(const std::vector<DetectionRecord>& records,
                               Task task)
    : task_(task) {
  for (const auto& r : records) {
    if (r.task != task) continue;
    auto [it, inserted] = by_digest_.emplace(r.image_digest, r.detections);
    if (!inserted && it->second != r.detections) {
      throw ValidationError("conflicting " + std::string(TaskName(task)) +
                            " fixture records for digest " + r.image_digest);
    }
  }
}

BackendOutput ReplayDetector::Infer(const RasterImage& image,
                                    const DetectorConfig&) const {
  const std::string digest = ImageDigest(image);
  auto it = by_digest_.find(digest);
  if (it == by_digest_.end()) {
    throw FixtureMissError(std::string(TaskName(task_)) + " detection", digest);
  }
  return it->second;
}

struct NeuralDetector::Impl {
  explicit Impl(const std::filesystem::path& path) : model(path) {}
  internal::OnnxModel model;
};

namespace {

RawRows RunDetector(const internal::OnnxModel& model, const std::vector<float>& input,
                    const Letterbox& lb) {
  internal::Tensor in{{1, 3, lb.size, lb.size}, input};
  internal::Tensor out = model.Run(in);
  // Drop the leading batch dimension; accept [A,B] and [1,A,B].
  std::vector<int> dims;
  if (out.shape.size() == 3 && out.shape[0] == 1) {
    dims = {out.shape[1], out.shape[2]};
  } else if (out.shape.size() == 2) {
    dims = out.shape;
  } else {
    std::string s;
    for (int d : out.shape) s += (s.empty() ? "" : "x") + std::to_string(d);
    throw ModelError("detector output must be [1,A,B], got " + s);
  }
  RawRows rows;
  rows.letterbox = lb;
  const int a = dims[0], b = dims[1];
  if (a < b) {  // channel-first: A = 4 + C features, B candidates
    rows.count = b;
    rows.width = a;
    rows.values.resize(out.values.size());
    for (int i = 0; i < b; ++i) {
      for (int f = 0; f < a; ++f) {
        rows.values[static_cast<std::size_t>(i) * a + f] =
            out.values[static_cast<std::size_t>(f) * b + i];
      }
    }
  } else {
    rows.count = a;
    rows.width = b;
    rows.values = std::move(out.values);
  }
  if (rows.width < 5) {
    throw ModelError("detector output rows have " + std::to_string(rows.width) +
                     " values; need 4 box values plus at least one class score");
  }
  return rows;
}

}  // namespace

NeuralDetector::NeuralDetector(const std::filesystem::path& model_path,
                               int input_size)
    : impl_(std::make_unique<Impl>(model_path)), input_size_(input_size) {
  const Letterbox lb = ComputeLetterbox(input_size, input_size, input_size);
  const std::vector<float> zeros(static_cast<std::size_t>(3) * input_size * input_size,
                                 kLetterboxFill / 255.0f);
  RunDetector(impl_->model, zeros, lb);
}

NeuralDetector::~NeuralDetector() = default;

BackendOutput NeuralDetector::Infer(const RasterImage& image,
                                    const DetectorConfig& config) const {
  if (config.input_size != input_size_) {
    throw ModelError("detector was loaded for input " +
                     std::to_string(input_size_) + " but config asks for " +
                     std::to_string(config.input_size));
  }
  const Letterbox lb = ComputeLetterbox(image.width(), image.height(), input_size_);
  return RunDetector(impl_->model, LetterboxTensor(image, lb), lb);
}

std::string_view BackendKindName(BackendKind kind) {
  return kind == BackendKind::kNeural ? "neural" : "replay";
}

BackendKind ParseBackendKind(std::string_view name) {
  if (name == "neural") return BackendKind::kNeural;
  if (name == "replay") return BackendKind::kReplay;
  throw ConfigError("unknown detector backend '" + std::string(name) +
                    "' (expected neural or replay)");
}

std::unique_ptr<DetectorBackend> MakeDetectorBackend(
    BackendKind kind, const DetectorConfig& config,
    const std::filesystem::path& fixture) {
  config.Validate();
  if (kind == BackendKind::kNeural) {
    if (config.model_path.empty()) {
      throw ConfigError("neural detector needs model_path");
    }
    return std::make_unique<NeuralDetector>(config.model_path, config.input_size);
  }
  if (fixture.empty()) throw ConfigError("replay detector needs a fixture file");
  return std::make_unique<ReplayDetector>(fixture, config.task);
}

}  // namespace newsocr::detect
