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
#ifndef NEWSOCR_PSNR_H_
#define NEWSOCR_PSNR_H_

#include <cmath>
#include <limits>

#include "newsocr/image.h"

namespace newsocr::metrics {

enum class PsnrMode {
  kRgb,   // every stored sample; channel counts must match
  kLuma,  // BT.601 luma (0.299, 0.587, 0.114), unrounded
};

inline constexpr double kInfinitePsnr = std::numeric_limits<double>::infinity();

struct PsnrScore {
  double psnr_db = 0;  // kInfinitePsnr when mse == 0
  double mse = 0;

  bool IsExact() const { return mse == 0; }
};

// 10 * log10(255^2 / mse). Throws ValidationError naming both shapes on a
// size or channel mismatch.
PsnrScore Psnr(const RasterImage& reference, const RasterImage& candidate,
               PsnrMode mode = PsnrMode::kRgb);

}  // namespace newsocr::metrics

#endif  // NEWSOCR_PSNR_H_
