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
#ifndef NEWSOCR_DETECTION_METRICS_H_
#define NEWSOCR_DETECTION_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "newsocr/boxes.h"

namespace newsocr::metrics {

// 0.50, 0.55, ..., 0.95
inline constexpr std::array<double, 10> kIouThresholds = {
    0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};

// 0 for disjoint boxes.
double Iou(const BoundingBox& a, const BoundingBox& b);

struct MatchResult {
  // Indexed like the input detections.
  std::vector<bool> is_true_positive;
  std::vector<int> matched_gt;  // -1 for false positives
  // Input indices in processing order (confidence descending, stable).
  std::vector<std::size_t> order;
  int missed_gt = 0;
};

// Greedy one-to-one matching for a single image and class. Each detection,
// in descending confidence, takes the unmatched ground-truth box of highest
// IoU >= iou_threshold; IoU ties go to the lowest ground-truth index.
MatchResult MatchDetections(std::span<const Detection> detections,
                            std::span<const GroundTruthBox> ground_truth,
                            double iou_threshold);

// COCO 101-point interpolated AP. `flags` are TP (true) / FP (false) in
// descending confidence over the whole split. Returns nullopt when
// total_gt == 0: the class has nothing to recall and is excluded.
std::optional<double> AveragePrecision(std::span<const bool> flags,
                                       std::int64_t total_gt);
// std::vector<bool> has no contiguous storage.
std::optional<double> AveragePrecision(const std::vector<bool>& flags,
                                       std::int64_t total_gt);

struct ImageDetections {
  std::vector<Detection> detections;
  std::vector<GroundTruthBox> ground_truth;
};

struct DetectionScore {
  double precision = 0;
  double recall = 0;
  double map50 = 0;
  double map50_95 = 0;
  // (IoU threshold, AP averaged over classes), one entry per kIouThresholds.
  std::vector<std::pair<double, double>> per_threshold_ap;
  // Lowest confidence kept at the best-F1 operating point; nullopt when
  // there are no detections.
  std::optional<double> operating_confidence;
  std::vector<int> evaluated_classes;
  std::int64_t ground_truth_count = 0;
  std::int64_t detection_count = 0;
};

// AP per class and IoU threshold, averaged over classes then thresholds.
// Precision/recall are pooled over classes at IoU 0.50 and reported at the
// confidence cut maximising F1 (ties keep the higher cut). Throws
// ValidationError if there is no ground truth at all.
DetectionScore ScoreDetections(std::span<const ImageDetections> images);

}  // namespace newsocr::metrics

#endif  // NEWSOCR_DETECTION_METRICS_H_
