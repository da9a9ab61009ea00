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
#ifndef NEWSOCR_IMAGEOPS_H_
#define NEWSOCR_IMAGEOPS_H_

#include <cstdint>
#include <vector>

#include "newsocr/boxes.h"
#include "newsocr/image.h"

namespace newsocr::imageops {

enum class ResampleKernel { kBox, kBilinear, kBicubic };

// Separable resample in double precision; results are rounded half up and
// clamped to [0,255]. kBox is area averaging in both directions, kBilinear
// and kBicubic (Keys, a = -0.5) sample at pixel centres with edge clamping.
RasterImage Resize(const RasterImage& image, int new_width, int new_height,
                   ResampleKernel kernel);

// Mean of each non-overlapping factor x factor block, anchored top-left.
// Trailing rows/columns that do not fill a block are discarded.
RasterImage DownsampleBlocks(const RasterImage& image, int factor);

// Half-open integer rectangle [x0,x1) x [y0,y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int Width() const { return x1 - x0; }
  int Height() const { return y1 - y0; }
  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

// `box` grown by `padding` on every side, rounded outward to whole pixels
// and intersected with the image. Throws ValidationError if empty.
PixelRect CropRect(int image_width, int image_height, const BoundingBox& box,
                   double padding);

RasterImage Crop(const RasterImage& image, const BoundingBox& box,
                 double padding);
RasterImage Crop(const RasterImage& image, const PixelRect& rect);

struct DegradeSpec {
  int scale_factor = 4;
  int quality_reduction = 30;  // percentage points off base_quality
  int base_quality = 100;

  int EffectiveQuality() const { return base_quality - quality_reduction; }
  // Throws ValidationError if any field or the effective quality is out of
  // range.
  void Validate() const;
};

struct DegradeResult {
  RasterImage image;                 // decoded JPEG
  std::vector<std::uint8_t> jpeg;    // exact encoder output
  int encoder_quality = 0;
};

// Block-mean downsample by spec.scale_factor followed by a JPEG round trip at
// spec.EffectiveQuality(). Deterministic for a given libjpeg build.
DegradeResult Degrade(const RasterImage& image, const DegradeSpec& spec);

}  // namespace newsocr::imageops

#endif  // NEWSOCR_IMAGEOPS_H_
