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
#ifndef NEWSOCR_BOXES_H_
#define NEWSOCR_BOXES_H_

#include <vector>

namespace newsocr {

// Pixel-space rectangle. Origin top-left, y grows downward.
struct BoundingBox {
  double x_min = 0;
  double y_min = 0;
  double x_max = 0;
  double y_max = 0;

  // Throws ValidationError unless x_min < x_max and y_min < y_max.
  static BoundingBox Make(double x_min, double y_min, double x_max,
                          double y_max);

  bool IsValid() const;
  double Width() const { return x_max - x_min; }
  double Height() const { return y_max - y_min; }
  double Area() const { return Width() * Height(); }
  double CenterX() const { return 0.5 * (x_min + x_max); }
  double CenterY() const { return 0.5 * (y_min + y_max); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct Detection {
  BoundingBox box;
  int class_id = 0;
  double confidence = 0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct GroundTruthBox {
  BoundingBox box;
  int class_id = 0;

  friend bool operator==(const GroundTruthBox&, const GroundTruthBox&) = default;
};

using Detections = std::vector<Detection>;

}  // namespace newsocr

#endif  // NEWSOCR_BOXES_H_
