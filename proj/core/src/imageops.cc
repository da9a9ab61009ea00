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
#include "newsocr/imageops.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "newsocr/error.h"
#include "newsocr/image_io.h"

namespace newsocr::imageops {
namespace {

struct Tap {
  int index;
  double weight;
};

using TapList = std::vector<std::vector<Tap>>;

void Normalize(std::vector<Tap>& taps) {
  double sum = 0;
  for (const auto& t : taps) sum += t.weight;
  if (sum == 0) return;
  for (auto& t : taps) t.weight /= sum;
}

TapList BoxTaps(int src, int dst) {
  const double scale = static_cast<double>(src) / dst;
  TapList taps(dst);
  for (int i = 0; i < dst; ++i) {
    const double lo = i * scale;
    const double hi = (i + 1) * scale;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(src - 1, static_cast<int>(std::ceil(hi)) - 1);
    for (int j = first; j <= last; ++j) {
      const double overlap = std::min(hi, j + 1.0) - std::max(lo, double(j));
      if (overlap > 0) taps[i].push_back({j, overlap});
    }
    Normalize(taps[i]);
  }
  return taps;
}

TapList BilinearTaps(int src, int dst) {
  const double scale = static_cast<double>(src) / dst;
  TapList taps(dst);
  for (int i = 0; i < dst; ++i) {
    const double x = std::clamp((i + 0.5) * scale - 0.5, 0.0, src - 1.0);
    const int x0 = static_cast<int>(std::floor(x));
    const int x1 = std::min(x0 + 1, src - 1);
    const double f = x - x0;
    taps[i].push_back({x0, 1.0 - f});
    if (f > 0) taps[i].push_back({x1, f});
  }
  return taps;
}

double CubicWeight(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1) return ((a + 2) * t - (a + 3)) * t * t + 1;
  if (t < 2) return ((a * t - 5 * a) * t + 8 * a) * t - 4 * a;
  return 0;
}

TapList BicubicTaps(int src, int dst) {
  const double scale = static_cast<double>(src) / dst;
  TapList taps(dst);
  for (int i = 0; i < dst; ++i) {
    const double x = (i + 0.5) * scale - 0.5;
    const int base = static_cast<int>(std::floor(x));
    for (int k = -1; k <= 2; ++k) {
      const double w = CubicWeight(x - (base + k));
      if (w == 0) continue;
      taps[i].push_back({std::clamp(base + k, 0, src - 1), w});
    }
    Normalize(taps[i]);
  }
  return taps;
}

TapList MakeTaps(int src, int dst, ResampleKernel kernel) {
  switch (kernel) {
    case ResampleKernel::kBox:
      return BoxTaps(src, dst);
    case ResampleKernel::kBilinear:
      return BilinearTaps(src, dst);
    case ResampleKernel::kBicubic:
      return BicubicTaps(src, dst);
  }
  return {};
}

std::uint8_t RoundToByte(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

}  // namespace

RasterImage Resize(const RasterImage& image, int new_width, int new_height,
                   ResampleKernel kernel) {
  if (new_width < 1 || new_height < 1) {
    throw ValidationError("resize target must be at least 1x1, got " +
                          std::to_string(new_width) + "x" +
                          std::to_string(new_height));
  }
  if (new_width == image.width() && new_height == image.height()) {
    return image;
  }
  const int c = image.channels();
  const int w = image.width();
  const int h = image.height();
  const TapList xt = MakeTaps(w, new_width, kernel);
  const TapList yt = MakeTaps(h, new_height, kernel);

  // Horizontal pass into a double buffer, vertical pass rounds once.
  std::vector<double> tmp(static_cast<std::size_t>(new_width) * h * c);
  const auto src = image.pixels();
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < new_width; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0;
        for (const Tap& t : xt[x]) {
          acc += t.weight * src[image.Index(t.index, y, ch)];
        }
        tmp[(static_cast<std::size_t>(y) * new_width + x) * c + ch] = acc;
      }
    }
  }
  std::vector<std::uint8_t> out(static_cast<std::size_t>(new_width) *
                                new_height * c);
  for (int y = 0; y < new_height; ++y) {
    for (int x = 0; x < new_width; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        double acc = 0;
        for (const Tap& t : yt[y]) {
          acc += t.weight *
                 tmp[(static_cast<std::size_t>(t.index) * new_width + x) * c +
                     ch];
        }
        out[(static_cast<std::size_t>(y) * new_width + x) * c + ch] =
            RoundToByte(acc);
      }
    }
  }
  return RasterImage(new_width, new_height, image.color_space(),
                     std::move(out));
}

RasterImage DownsampleBlocks(const RasterImage& image, int factor) {
  if (factor < 1) throw ValidationError("downsample factor must be >= 1");
  if (image.width() < factor || image.height() < factor) {
    throw ValidationError("image " + image.ShapeString() +
                          " is smaller than the scale factor " +
                          std::to_string(factor));
  }
  if (factor == 1) return image;
  const int c = image.channels();
  const int w = image.width() / factor;
  const int h = image.height() / factor;
  const std::uint64_t n = static_cast<std::uint64_t>(factor) * factor;
  std::vector<std::uint8_t> out(static_cast<std::size_t>(w) * h * c);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int ch = 0; ch < c; ++ch) {
        std::uint64_t sum = 0;
        for (int dy = 0; dy < factor; ++dy) {
          for (int dx = 0; dx < factor; ++dx) {
            sum += image.at(x * factor + dx, y * factor + dy, ch);
          }
        }
        // Round half up in integer arithmetic.
        out[(static_cast<std::size_t>(y) * w + x) * c + ch] =
            static_cast<std::uint8_t>((2 * sum + n) / (2 * n));
      }
    }
  }
  return RasterImage(w, h, image.color_space(), std::move(out));
}

PixelRect CropRect(int image_width, int image_height, const BoundingBox& box,
                   double padding) {
  if (!box.IsValid()) throw ValidationError("crop box is not a valid box");
  PixelRect r;
  r.x0 = static_cast<int>(std::max(0.0, std::floor(box.x_min - padding)));
  r.y0 = static_cast<int>(std::max(0.0, std::floor(box.y_min - padding)));
  r.x1 = static_cast<int>(
      std::min<double>(image_width, std::ceil(box.x_max + padding)));
  r.y1 = static_cast<int>(
      std::min<double>(image_height, std::ceil(box.y_max + padding)));
  if (r.x1 <= r.x0 || r.y1 <= r.y0) {
    throw ValidationError("crop box does not intersect the " +
                          std::to_string(image_width) + "x" +
                          std::to_string(image_height) + " image");
  }
  return r;
}

RasterImage Crop(const RasterImage& image, const PixelRect& rect) {
  if (rect.x0 < 0 || rect.y0 < 0 || rect.x1 > image.width() ||
      rect.y1 > image.height() || rect.Width() < 1 || rect.Height() < 1) {
    throw ValidationError("crop rectangle outside image " +
                          image.ShapeString());
  }
  const int c = image.channels();
  const std::size_t row = static_cast<std::size_t>(rect.Width()) * c;
  std::vector<std::uint8_t> out(row * rect.Height());
  const auto src = image.pixels();
  for (int y = 0; y < rect.Height(); ++y) {
    const auto begin = src.begin() + image.Index(rect.x0, rect.y0 + y, 0);
    std::copy(begin, begin + row, out.begin() + row * y);
  }
  return RasterImage(rect.Width(), rect.Height(), image.color_space(),
                     std::move(out));
}

RasterImage Crop(const RasterImage& image, const BoundingBox& box,
                 double padding) {
  return Crop(image, CropRect(image.width(), image.height(), box, padding));
}

void DegradeSpec::Validate() const {
  if (scale_factor < 1) {
    throw ValidationError("scale_factor must be >= 1");
  }
  if (quality_reduction < 0 || quality_reduction >= 100) {
    throw ValidationError("quality_reduction must be in [0,100)");
  }
  if (base_quality < 1 || base_quality > 100) {
    throw ValidationError("base_quality must be in [1,100]");
  }
  const int q = EffectiveQuality();
  if (q < 1 || q > 100) {
    throw ValidationError("effective JPEG quality " + std::to_string(q) +
                          " is outside [1,100]");
  }
}

DegradeResult Degrade(const RasterImage& image, const DegradeSpec& spec) {
  spec.Validate();
  RasterImage small = DownsampleBlocks(image, spec.scale_factor);
  const int quality = spec.EffectiveQuality();
  std::vector<std::uint8_t> jpeg = EncodeJpeg(small, JpegOptions{quality});
  RasterImage decoded = DecodeImage(jpeg);
  return DegradeResult{std::move(decoded), std::move(jpeg), quality};
}

}  // namespace newsocr::imageops
