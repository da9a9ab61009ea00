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

// Reference implementations used only by tests. Each one is written along a
// different route from the production code it checks: top-down recursion
// instead of a rolling table, exhaustive enumeration instead of greedy
// search, a per-point scan instead of an envelope.
#ifndef NEWSOCR_TESTS_SUPPORT_ORACLES_H_
#define NEWSOCR_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "newsocr/boxes.h"

namespace newsocr::testing {

struct OracleEdits {
  std::int64_t total = 0;
  std::int64_t substitutions = 0;
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;
};

// Memoised recursion over suffixes. Minimises (edits, deletions)
// lexicographically and counts every operation along the chosen path.
template <typename T>
OracleEdits EditOracle(const std::vector<T>& ref, const std::vector<T>& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  struct Cell {
    bool done = false;
    OracleEdits e;
  };
  std::vector<Cell> memo((n + 1) * (m + 1));
  auto key = [](const OracleEdits& e) {
    return std::make_pair(e.total, e.deletions);
  };
  std::function<OracleEdits(std::size_t, std::size_t)> solve =
      [&](std::size_t i, std::size_t j) -> OracleEdits {
    Cell& cell = memo[i * (m + 1) + j];
    if (cell.done) return cell.e;
    OracleEdits best;
    if (i == n) {
      best.insertions = static_cast<std::int64_t>(m - j);
      best.total = best.insertions;
    } else if (j == m) {
      best.deletions = static_cast<std::int64_t>(n - i);
      best.total = best.deletions;
    } else {
      std::vector<OracleEdits> options;
      OracleEdits diag = solve(i + 1, j + 1);
      if (!(ref[i] == hyp[j])) {
        ++diag.substitutions;
        ++diag.total;
      }
      options.push_back(diag);
      OracleEdits del = solve(i + 1, j);
      ++del.deletions;
      ++del.total;
      options.push_back(del);
      OracleEdits ins = solve(i, j + 1);
      ++ins.insertions;
      ++ins.total;
      options.push_back(ins);
      best = *std::min_element(
          options.begin(), options.end(),
          [&](const OracleEdits& a, const OracleEdits& b) {
            return key(a) < key(b);
          });
    }
    cell.done = true;
    cell.e = best;
    return best;
  };
  return solve(0, 0);
}

inline double OracleIou(const BoundingBox& a, const BoundingBox& b) {
  const double x0 = std::max(a.x_min, b.x_min);
  const double y0 = std::max(a.y_min, b.y_min);
  const double x1 = std::min(a.x_max, b.x_max);
  const double y1 = std::min(a.y_max, b.y_max);
  if (x1 <= x0 || y1 <= y0) return 0.0;
  const double inter = (x1 - x0) * (y1 - y0);
  return inter / ((a.x_max - a.x_min) * (a.y_max - a.y_min) +
                  (b.x_max - b.x_min) * (b.y_max - b.y_min) - inter);
}

// Enumerates every one-to-one partial assignment of detections to ground
// truth with IoU >= threshold and keeps the lexicographically best under
// greedy-by-confidence semantics: detections are ranked by descending
// confidence (ties by input index), and for each in turn a match beats no
// match, higher IoU beats lower, lower GT index beats higher. Returns the
// matched GT per detection (input order), -1 for unmatched.
inline std::vector<int> ExhaustiveMatch(const std::vector<Detection>& dets,
                                        const std::vector<GroundTruthBox>& gts,
                                        double threshold) {
  std::vector<std::size_t> rank(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) rank[i] = i;
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });
  // Score vector per detection in rank order: (matched, iou, -gt).
  using Key = std::vector<std::tuple<int, double, int>>;
  std::optional<Key> best_key;
  std::vector<int> best_assign(dets.size(), -1);
  std::vector<int> assign(dets.size(), -1);
  std::vector<bool> used(gts.size(), false);
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == rank.size()) {
      Key key;
      for (std::size_t r : rank) {
        const int g = assign[r];
        if (g < 0) {
          key.emplace_back(0, 0.0, 0);
        } else {
          key.emplace_back(1, OracleIou(dets[r].box, gts[g].box), -g);
        }
      }
      if (!best_key || key > *best_key) {
        best_key = key;
        best_assign = assign;
      }
      return;
    }
    const std::size_t d = rank[k];
    assign[d] = -1;
    rec(k + 1);
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (used[g]) continue;
      if (OracleIou(dets[d].box, gts[g].box) < threshold) continue;
      used[g] = true;
      assign[d] = static_cast<int>(g);
      rec(k + 1);
      assign[d] = -1;
      used[g] = false;
    }
  };
  rec(0);
  return best_assign;
}

// Builds the raw precision/recall points and, for each of the 101 recall
// levels, scans every point with recall >= level for the largest precision.
inline double BruteForceAp101(const std::vector<bool>& flags,
                              std::int64_t total_gt) {
  std::vector<std::pair<double, double>> points;  // (recall, precision)
  std::int64_t tp = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) ++tp;
    points.emplace_back(static_cast<double>(tp) / total_gt,
                        static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  double sum = 0;
  for (int r = 0; r <= 100; ++r) {
    const double level = r / 100.0;
    double best = 0;
    for (const auto& [rec, prec] : points) {
      if (rec >= level) best = std::max(best, prec);
    }
    sum += best;
  }
  return sum / 101.0;
}

// VOC-style all-points interpolation (area under the monotone envelope).
inline double AllPointsAp(const std::vector<bool>& flags,
                          std::int64_t total_gt) {
  std::vector<double> rec{0.0}, prec{0.0};
  std::int64_t tp = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) ++tp;
    rec.push_back(static_cast<double>(tp) / total_gt);
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
  }
  rec.push_back(1.0);
  prec.push_back(0.0);
  for (std::size_t i = prec.size() - 1; i > 0; --i) {
    prec[i - 1] = std::max(prec[i - 1], prec[i]);
  }
  double ap = 0;
  for (std::size_t i = 1; i < rec.size(); ++i) {
    ap += (rec[i] - rec[i - 1]) * prec[i];
  }
  return ap;
}

// Per-class, per-threshold AP from the exhaustive matcher; the mean over
// classes for each threshold in `thresholds`.
struct OracleImage {
  std::vector<Detection> dets;
  std::vector<GroundTruthBox> gts;
};

inline std::vector<double> OraclePerThresholdAp(
    const std::vector<OracleImage>& images,
    const std::vector<double>& thresholds) {
  std::map<int, std::int64_t> gt_count;
  for (const auto& img : images) {
    for (const auto& g : img.gts) ++gt_count[g.class_id];
  }
  std::vector<double> out;
  for (double t : thresholds) {
    double sum = 0;
    for (const auto& [cls, n] : gt_count) {
      struct Flag {
        double conf;
        std::size_t image;
        std::size_t rank;
        bool tp;
      };
      std::vector<Flag> all;
      for (std::size_t im = 0; im < images.size(); ++im) {
        std::vector<Detection> dets;
        std::vector<GroundTruthBox> gts;
        for (const auto& d : images[im].dets) {
          if (d.class_id == cls) dets.push_back(d);
        }
        for (const auto& g : images[im].gts) {
          if (g.class_id == cls) gts.push_back(g);
        }
        const std::vector<int> assign = ExhaustiveMatch(dets, gts, t);
        std::vector<std::size_t> rank(dets.size());
        for (std::size_t i = 0; i < dets.size(); ++i) rank[i] = i;
        std::stable_sort(rank.begin(), rank.end(),
                         [&](std::size_t a, std::size_t b) {
                           return dets[a].confidence > dets[b].confidence;
                         });
        for (std::size_t r = 0; r < rank.size(); ++r) {
          all.push_back({dets[rank[r]].confidence, im, r, assign[rank[r]] >= 0});
        }
      }
      std::sort(all.begin(), all.end(), [](const Flag& a, const Flag& b) {
        if (a.conf != b.conf) return a.conf > b.conf;
        if (a.image != b.image) return a.image < b.image;
        return a.rank < b.rank;
      });
      std::vector<bool> flags;
      for (const auto& f : all) flags.push_back(f.tp);
      sum += BruteForceAp101(flags, n);
    }
    out.push_back(sum / static_cast<double>(gt_count.size()));
  }
  return out;
}

}  // namespace newsocr::testing

#endif  // NEWSOCR_TESTS_SUPPORT_ORACLES_H_
