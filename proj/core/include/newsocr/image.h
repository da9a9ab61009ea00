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
#ifndef NEWSOCR_IMAGE_H_
#define NEWSOCR_IMAGE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace newsocr {

enum class ColorSpace { kGray, kRgb };

inline int ChannelCount(ColorSpace cs) { return cs == ColorSpace::kGray ? 1 : 3; }

// Row-major, interleaved, 8 bits per sample. Always at least 1x1.
class RasterImage {
 public:
  // Throws ValidationError if the buffer length does not match the shape.
  RasterImage(int width, int height, ColorSpace color_space,
              std::vector<std::uint8_t> pixels);

  static RasterImage Filled(int width, int height, ColorSpace color_space,
                            std::uint8_t value);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return ChannelCount(color_space_); }
  ColorSpace color_space() const { return color_space_; }

  std::span<const std::uint8_t> pixels() const { return pixels_; }
  std::span<std::uint8_t> mutable_pixels() { return pixels_; }

  std::size_t Index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * channels() + c;
  }
  std::uint8_t at(int x, int y, int c = 0) const { return pixels_[Index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c = 0) { return pixels_[Index(x, y, c)]; }

  // "WxHxC", used in error messages.
  std::string ShapeString() const;

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_;
  int height_;
  ColorSpace color_space_;
  std::vector<std::uint8_t> pixels_;
};

RasterImage ToRgb(const RasterImage& image);

// BT.601 luma, rounded half up.
RasterImage ToGray(const RasterImage& image);

}  // namespace newsocr

#endif  // NEWSOCR_IMAGE_H_
