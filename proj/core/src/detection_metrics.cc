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
#include "newsocr/detection_metrics.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "newsocr/error.h"

namespace newsocr::metrics {
namespace {

constexpr int kRecallPoints = 101;

template <typename Flags>
std::optional<double> AveragePrecisionImpl(const Flags& flags,
                                           std::int64_t total_gt) {
  if (total_gt <= 0) return std::nullopt;
  const std::size_t n = flags.size();
  if (n == 0) return 0.0;
  std::vector<double> recall(n), precision(n);
  std::int64_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (flags[i]) ++tp;
    recall[i] = static_cast<double>(tp) / static_cast<double>(total_gt);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  // Monotone precision envelope from the right.
  for (std::size_t i = n - 1; i > 0; --i) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0;
  for (int r = 0; r < kRecallPoints; ++r) {
    const double threshold = r / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), threshold);
    if (it == recall.end()) break;  // recall thresholds ascend
    sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / kRecallPoints;
}

std::vector<std::size_t> ConfidenceOrder(std::span<const Detection> dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&dets](std::size_t a, std::size_t b) {
                     return dets[a].confidence > dets[b].confidence;
                   });
  return order;
}

struct ScoredFlag {
  double confidence;
  bool tp;
};

// Stable: ties keep (image, in-image confidence order).
void SortByConfidence(std::vector<ScoredFlag>& flags) {
  std::stable_sort(flags.begin(), flags.end(),
                   [](const ScoredFlag& a, const ScoredFlag& b) {
                     return a.confidence > b.confidence;
                   });
}

}  // namespace

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0 || ih <= 0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.Area() + b.Area() - inter;
  if (uni <= 0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

MatchResult MatchDetections(std::span<const Detection> detections,
                            std::span<const GroundTruthBox> ground_truth,
                            double iou_threshold) {
  MatchResult result;
  result.is_true_positive.assign(detections.size(), false);
  result.matched_gt.assign(detections.size(), -1);
  result.order = ConfidenceOrder(detections);
  std::vector<bool> taken(ground_truth.size(), false);
  for (std::size_t d : result.order) {
    int best = -1;
    double best_iou = iou_threshold;
    for (std::size_t g = 0; g < ground_truth.size(); ++g) {
      if (taken[g]) continue;
      const double v = Iou(detections[d].box, ground_truth[g].box);
      if (v < iou_threshold) continue;
      if (best < 0 || v > best_iou) {
        best = static_cast<int>(g);
        best_iou = v;
      }
    }
    if (best >= 0) {
      taken[static_cast<std::size_t>(best)] = true;
      result.is_true_positive[d] = true;
      result.matched_gt[d] = best;
    }
  }
  result.missed_gt = static_cast<int>(
      std::count(taken.begin(), taken.end(), false));
  return result;
}

std::optional<double> AveragePrecision(std::span<const bool> flags,
                                       std::int64_t total_gt) {
  return AveragePrecisionImpl(flags, total_gt);
}

std::optional<double> AveragePrecision(const std::vector<bool>& flags,
                                       std::int64_t total_gt) {
  return AveragePrecisionImpl(flags, total_gt);
}

DetectionScore ScoreDetections(std::span<const ImageDetections> images) {
  DetectionScore score;
  std::map<int, std::int64_t> gt_per_class;
  std::set<int> det_classes;
  for (const auto& img : images) {
    for (const auto& g : img.ground_truth) ++gt_per_class[g.class_id];
    for (const auto& d : img.detections) det_classes.insert(d.class_id);
    score.ground_truth_count += static_cast<std::int64_t>(img.ground_truth.size());
    score.detection_count += static_cast<std::int64_t>(img.detections.size());
  }
  if (score.ground_truth_count == 0) {
    throw ValidationError("no ground-truth boxes: nothing to evaluate");
  }
  for (const auto& [cls, n] : gt_per_class) score.evaluated_classes.push_back(cls);

  // Operating-point flags at IoU 0.50, pooled over every detected class.
  std::vector<ScoredFlag> pooled;

  for (double threshold : kIouThresholds) {
    double ap_sum = 0;
    for (int cls : score.evaluated_classes) {
      std::vector<ScoredFlag> flags;
      for (const auto& img : images) {
        std::vector<Detection> dets;
        std::vector<GroundTruthBox> gts;
        for (const auto& d : img.detections) {
          if (d.class_id == cls) dets.push_back(d);
        }
        for (const auto& g : img.ground_truth) {
          if (g.class_id == cls) gts.push_back(g);
        }
        const MatchResult m = MatchDetections(dets, gts, threshold);
        for (std::size_t i : m.order) {
          flags.push_back({dets[i].confidence, m.is_true_positive[i]});
        }
      }
      SortByConfidence(flags);
      if (threshold == kIouThresholds.front()) {
        pooled.insert(pooled.end(), flags.begin(), flags.end());
      }
      std::vector<bool> tp(flags.size());
      for (std::size_t i = 0; i < flags.size(); ++i) tp[i] = flags[i].tp;
      ap_sum += *AveragePrecision(tp, gt_per_class.at(cls));
    }
    score.per_threshold_ap.emplace_back(
        threshold, ap_sum / static_cast<double>(score.evaluated_classes.size()));
  }

  // Detections of classes with no ground truth only ever count as FPs.
  for (int cls : det_classes) {
    if (gt_per_class.contains(cls)) continue;
    for (const auto& img : images) {
      for (const auto& d : img.detections) {
        if (d.class_id == cls) pooled.push_back({d.confidence, false});
      }
    }
  }
  SortByConfidence(pooled);

  score.map50 = score.per_threshold_ap.front().second;
  double sum = 0;
  for (const auto& [t, ap] : score.per_threshold_ap) sum += ap;
  score.map50_95 = sum / static_cast<double>(score.per_threshold_ap.size());

  double best_f1 = -1;
  std::int64_t tp = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    if (pooled[i].tp) ++tp;
    // Only evaluate at the end of a run of equal confidences.
    if (i + 1 < pooled.size() &&
        pooled[i + 1].confidence == pooled[i].confidence) {
      continue;
    }
    const double p = static_cast<double>(tp) / static_cast<double>(i + 1);
    const double r =
        static_cast<double>(tp) / static_cast<double>(score.ground_truth_count);
    const double f1 = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
    if (f1 > best_f1) {
      best_f1 = f1;
      score.precision = p;
      score.recall = r;
      score.operating_confidence = pooled[i].confidence;
    }
  }
  return score;
}

}  // namespace newsocr::metrics
