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
#include "newsocr/image.h"

#include <cmath>

#include "newsocr/error.h"

namespace newsocr {

RasterImage::RasterImage(int width, int height, ColorSpace color_space,
                         std::vector<std::uint8_t> pixels)
    : width_(width),
      height_(height),
      color_space_(color_space),
      pixels_(std::move(pixels)) {
  if (width_ < 1 || height_ < 1) {
    throw ValidationError("image dimensions must be positive, got " +
                          std::to_string(width_) + "x" +
                          std::to_string(height_));
  }
  const std::size_t expected =
      static_cast<std::size_t>(width_) * height_ * channels();
  if (pixels_.size() != expected) {
    throw ValidationError("pixel buffer holds " +
                          std::to_string(pixels_.size()) + " samples, shape " +
                          ShapeString() + " needs " + std::to_string(expected));
  }
}

RasterImage RasterImage::Filled(int width, int height, ColorSpace color_space,
                                std::uint8_t value) {
  const std::size_t n = static_cast<std::size_t>(width < 0 ? 0 : width) *
                        (height < 0 ? 0 : height) * ChannelCount(color_space);
  return RasterImage(width, height, color_space,
                     std::vector<std::uint8_t>(n, value));
}

std::string RasterImage::ShapeString() const {
  return std::to_string(width_) + "x" + std::to_string(height_) + "x" +
         std::to_string(channels());
}

RasterImage ToRgb(const RasterImage& image) {
  if (image.color_space() == ColorSpace::kRgb) return image;
  std::vector<std::uint8_t> out;
  out.reserve(image.pixels().size() * 3);
  for (std::uint8_t v : image.pixels()) {
    out.insert(out.end(), {v, v, v});
  }
  return RasterImage(image.width(), image.height(), ColorSpace::kRgb,
                     std::move(out));
}

RasterImage ToGray(const RasterImage& image) {
  if (image.color_space() == ColorSpace::kGray) return image;
  const auto px = image.pixels();
  std::vector<std::uint8_t> out(px.size() / 3);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double y =
        0.299 * px[3 * i] + 0.587 * px[3 * i + 1] + 0.114 * px[3 * i + 2];
    out[i] = static_cast<std::uint8_t>(std::floor(y + 0.5));
  }
  return RasterImage(image.width(), image.height(), ColorSpace::kGray,
                     std::move(out));
}

}  // namespace newsocr
