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
#include "newsocr/psnr.h"

#include "newsocr/error.h"

namespace newsocr::metrics {
namespace {

double LumaAt(const RasterImage& img, std::size_t pixel) {
  const auto px = img.pixels();
  if (img.channels() == 1) return px[pixel];
  return 0.299 * px[3 * pixel] + 0.587 * px[3 * pixel + 1] +
         0.114 * px[3 * pixel + 2];
}

PsnrScore FromMse(double mse) {
  PsnrScore s;
  s.mse = mse;
  s.psnr_db = mse == 0 ? kInfinitePsnr : 10.0 * std::log10(255.0 * 255.0 / mse);
  return s;
}

}  // namespace

PsnrScore Psnr(const RasterImage& reference, const RasterImage& candidate,
               PsnrMode mode) {
  const bool same_size = reference.width() == candidate.width() &&
                         reference.height() == candidate.height();
  if (!same_size ||
      (mode == PsnrMode::kRgb && reference.channels() != candidate.channels())) {
    throw ValidationError("PSNR shape mismatch: reference " +
                          reference.ShapeString() + " vs candidate " +
                          candidate.ShapeString());
  }
  double sum = 0;
  std::size_t n = 0;
  if (mode == PsnrMode::kRgb) {
    const auto a = reference.pixels();
    const auto b = candidate.pixels();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
      sum += d * d;
    }
    n = a.size();
  } else {
    n = static_cast<std::size_t>(reference.width()) * reference.height();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = LumaAt(reference, i) - LumaAt(candidate, i);
      sum += d * d;
    }
  }
  return FromMse(sum / static_cast<double>(n));
}

}  // namespace newsocr::metrics
