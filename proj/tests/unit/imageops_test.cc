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

#include <gtest/gtest.h>

#include <cmath>

#include "newsocr/error.h"
#include "newsocr/image_io.h"
#include "newsocr/psnr.h"
#include "jpeg_inspect.h"
#include "synthetic.h"

namespace newsocr::imageops {
namespace {

using newsocr::testing::RandomNoise;
using newsocr::testing::ReadQuantTables;
using newsocr::testing::ReadSamplingFactors;
using newsocr::testing::ScaledTable;
using newsocr::testing::SyntheticPage;

constexpr ResampleKernel kAllKernels[] = {
    ResampleKernel::kBox, ResampleKernel::kBilinear, ResampleKernel::kBicubic};

TEST(DownsampleBlocksTest, RoundsBlockMeansHalfUp) {
  // 4x2 gray, factor 2: blocks {0,0,0,1} -> 0.25 -> 0; {1,1,0,0} -> 0.5 -> 1.
  const RasterImage img(4, 2, ColorSpace::kGray, {0, 0, 1, 1, 0, 1, 0, 0});
  const RasterImage out = DownsampleBlocks(img, 2);
  ASSERT_EQ(out.width(), 2);
  ASSERT_EQ(out.height(), 1);
  EXPECT_EQ(out.at(0, 0), 0);
  EXPECT_EQ(out.at(1, 0), 1);
}

TEST(ResizeTest, BoxAverageRoundsHalfUp) {
  const RasterImage img(2, 2, ColorSpace::kGray, {0, 0, 255, 255});
  EXPECT_EQ(Resize(img, 1, 1, ResampleKernel::kBox).at(0, 0), 128);
  EXPECT_EQ(DownsampleBlocks(img, 2).at(0, 0), 128);
}

TEST(DownsampleBlocksTest, DropsRemainderRowsAndColumns) {
  const RasterImage img = RandomNoise(11, 7, ColorSpace::kRgb, 4);
  const RasterImage out = DownsampleBlocks(img, 4);
  EXPECT_EQ(out.width(), 2);
  EXPECT_EQ(out.height(), 1);
  int sum = 0;
  for (int y = 0; y < 4; ++y) {
    for (int x = 4; x < 8; ++x) sum += img.at(x, y, 2);
  }
  EXPECT_EQ(out.at(1, 0, 2), (2 * sum + 16) / 32);
  EXPECT_THROW(DownsampleBlocks(img, 8), ValidationError);
}

TEST(DownsampleBlocksTest, MatchesBoxResizeAtIntegerFactors) {
  for (int factor : {2, 4}) {
    const RasterImage img = RandomNoise(8 * factor, 5 * factor,
                                        ColorSpace::kRgb, 10 + factor);
    EXPECT_EQ(DownsampleBlocks(img, factor),
              Resize(img, 8, 5, ResampleKernel::kBox));
  }
}

TEST(ResizeTest, SameSizeIsIdentity) {
  const RasterImage img = RandomNoise(13, 9, ColorSpace::kRgb, 1);
  for (ResampleKernel k : kAllKernels) EXPECT_EQ(Resize(img, 13, 9, k), img);
}

TEST(ResizeTest, ConstantImageStaysConstant) {
  const auto img = RasterImage::Filled(5, 3, ColorSpace::kRgb, 137);
  for (ResampleKernel k : kAllKernels) {
    for (auto [w, h] : {std::pair{20, 12}, std::pair{2, 1}, std::pair{7, 9}}) {
      EXPECT_EQ(Resize(img, w, h, k),
                RasterImage::Filled(w, h, ColorSpace::kRgb, 137));
    }
  }
}

TEST(ResizeTest, TinyImageUpscalesWithoutLeavingItsRange) {
  const RasterImage img(2, 2, ColorSpace::kGray, {10, 200, 200, 10});
  for (ResampleKernel k : kAllKernels) {
    const RasterImage big = Resize(img, 128, 128, k);
    ASSERT_EQ(big.width(), 128);
    ASSERT_EQ(big.height(), 128);
    if (k == ResampleKernel::kBicubic) continue;  // may overshoot then clamp
    for (std::uint8_t v : big.pixels()) {
      ASSERT_GE(v, 10);
      ASSERT_LE(v, 200);
    }
  }
  // Box upscaling replicates pixels.
  const RasterImage box = Resize(img, 128, 128, ResampleKernel::kBox);
  EXPECT_EQ(box.at(0, 0), 10);
  EXPECT_EQ(box.at(63, 63), 10);
  EXPECT_EQ(box.at(64, 0), 200);
  EXPECT_EQ(box.at(127, 127), 10);
}

TEST(ResizeTest, BilinearMidpointUsesHalfPixelCenters) {
  const RasterImage img(2, 1, ColorSpace::kGray, {0, 100});
  const RasterImage out = Resize(img, 4, 1, ResampleKernel::kBilinear);
  // Centers at 0.25, 0.75, 1.25, 1.75 in source pixel units: clamped 0,
  // 0.25, 0.75, clamped 1.
  EXPECT_EQ(out.at(0, 0), 0);
  EXPECT_EQ(out.at(1, 0), 25);
  EXPECT_EQ(out.at(2, 0), 75);
  EXPECT_EQ(out.at(3, 0), 100);
}

TEST(ResizeTest, RejectsEmptyTarget) {
  const auto img = RasterImage::Filled(4, 4, ColorSpace::kGray, 0);
  EXPECT_THROW(Resize(img, 0, 4, ResampleKernel::kBox), ValidationError);
}

TEST(CropTest, PadsOutwardAndClamps) {
  const BoundingBox b = BoundingBox::Make(10.2, 20.7, 30.1, 40.0);
  EXPECT_EQ(CropRect(100, 100, b, 4), (PixelRect{6, 16, 35, 44}));
  EXPECT_EQ(CropRect(32, 42, b, 4), (PixelRect{6, 16, 32, 42}));
  EXPECT_EQ(CropRect(100, 100, BoundingBox::Make(1, 1, 2, 2), 4),
            (PixelRect{0, 0, 6, 6}));
  EXPECT_THROW(CropRect(10, 10, BoundingBox::Make(20, 20, 30, 30), 0),
               ValidationError);
}

TEST(CropTest, FullBoxCopiesAndEdgeBoxClamps) {
  const RasterImage img = RandomNoise(100, 100, ColorSpace::kRgb, 6);
  EXPECT_EQ(Crop(img, BoundingBox::Make(0, 0, 100, 100), 0), img);
  const RasterImage c = Crop(img, BoundingBox::Make(10, 10, 20, 20), 0);
  EXPECT_EQ(c, Crop(img, PixelRect{10, 10, 20, 20}));
  EXPECT_EQ(c.width(), 10);
  const RasterImage edge = Crop(img, BoundingBox::Make(90, 10, 105, 20), 0);
  EXPECT_EQ(edge.width(), 10);
  EXPECT_EQ(edge.height(), 10);
}

TEST(CropTest, CopiesTheRequestedPixels) {
  const RasterImage img = RandomNoise(20, 10, ColorSpace::kRgb, 2);
  const RasterImage c = Crop(img, PixelRect{3, 2, 8, 9});
  ASSERT_EQ(c.width(), 5);
  ASSERT_EQ(c.height(), 7);
  for (int y = 0; y < 7; ++y) {
    for (int x = 0; x < 5; ++x) {
      for (int ch = 0; ch < 3; ++ch) {
        ASSERT_EQ(c.at(x, y, ch), img.at(x + 3, y + 2, ch));
      }
    }
  }
  EXPECT_THROW(Crop(img, PixelRect{15, 0, 21, 4}), ValidationError);
}

TEST(DegradeTest, ShrinksByTheScaleFactor) {
  for (auto [w, h] : {std::pair{1001, 517}, std::pair{64, 64}, std::pair{7, 4}}) {
    const DegradeResult r = Degrade(SyntheticPage(w, h, 3), DegradeSpec{});
    EXPECT_EQ(r.image.width(), w / 4);
    EXPECT_EQ(r.image.height(), h / 4);
    EXPECT_EQ(r.encoder_quality, 70);
  }
}

TEST(DegradeTest, EncoderUsesQualitySeventyTables) {
  const DegradeResult r = Degrade(SyntheticPage(160, 96, 5), DegradeSpec{});
  const auto tables = ReadQuantTables(r.jpeg);
  ASSERT_EQ(tables.size(), 2u);
  EXPECT_EQ(tables.at(0), ScaledTable(newsocr::testing::kStdLuminance, 70));
  EXPECT_EQ(tables.at(1), ScaledTable(newsocr::testing::kStdChrominance, 70));
  EXPECT_EQ(tables.at(0)[0], 10);  // (16 * 60 + 50) / 100
  const auto sampling = ReadSamplingFactors(r.jpeg);
  ASSERT_EQ(sampling.size(), 3u);
  EXPECT_EQ(sampling[0], (std::pair{2, 2}));
  EXPECT_EQ(sampling[1], (std::pair{1, 1}));
}

TEST(DegradeTest, QualityFollowsTheReduction) {
  DegradeSpec spec;
  spec.quality_reduction = 55;
  const DegradeResult r = Degrade(SyntheticPage(64, 64, 5), spec);
  EXPECT_EQ(r.encoder_quality, 45);
  EXPECT_EQ(ReadQuantTables(r.jpeg).at(0),
            ScaledTable(newsocr::testing::kStdLuminance, 45));
}

TEST(DegradeTest, IsDeterministicAndDecodesToItsJpeg) {
  const RasterImage page = SyntheticPage(321, 203, 9);
  const DegradeResult a = Degrade(page, DegradeSpec{});
  const DegradeResult b = Degrade(page, DegradeSpec{});
  EXPECT_EQ(a.jpeg, b.jpeg);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(DecodeImage(a.jpeg), a.image);
}

TEST(DegradeTest, GrayInputStaysGray) {
  const RasterImage g = ToGray(SyntheticPage(40, 40, 1));
  const DegradeResult r = Degrade(g, DegradeSpec{});
  EXPECT_EQ(r.image.color_space(), ColorSpace::kGray);
  EXPECT_EQ(ReadQuantTables(r.jpeg).size(), 1u);
}

TEST(DegradeTest, IdentityPathOnJpegStableImage) {
  DegradeSpec spec;
  spec.scale_factor = 1;
  spec.quality_reduction = 0;
  for (auto img : {RasterImage::Filled(48, 40, ColorSpace::kGray, 77),
                   RasterImage::Filled(33, 17, ColorSpace::kRgb, 128)}) {
    EXPECT_EQ(Degrade(img, spec).image, img);
  }
}

TEST(DegradeTest, SmallerThanScaleFactorIsAnError) {
  const auto img = RasterImage::Filled(3, 40, ColorSpace::kRgb, 1);
  EXPECT_THROW(Degrade(img, DegradeSpec{}), ValidationError);
}

TEST(DegradeTest, SpecValidation) {
  DegradeSpec s;
  s.scale_factor = 0;
  EXPECT_THROW(s.Validate(), ValidationError);
  s = DegradeSpec{};
  s.quality_reduction = 100;
  EXPECT_THROW(s.Validate(), ValidationError);
  s = DegradeSpec{};
  s.base_quality = 20;
  s.quality_reduction = 30;
  EXPECT_THROW(s.Validate(), ValidationError);
  EXPECT_NO_THROW(DegradeSpec{}.Validate());
}

TEST(DegradeTest, UpscaledDegradedPageBeatsAFlatGuess) {
  const RasterImage hr = SyntheticPage(256, 192, 12);
  const DegradeResult lr = Degrade(hr, DegradeSpec{});
  const RasterImage up = Resize(lr.image, 256, 192, ResampleKernel::kBicubic);
  const RasterImage flat = RasterImage::Filled(256, 192, ColorSpace::kRgb, 128);
  const double up_db = metrics::Psnr(hr, up).psnr_db;
  const double flat_db = metrics::Psnr(hr, flat).psnr_db;
  EXPECT_GT(up_db, flat_db + 3);
  EXPECT_TRUE(std::isfinite(up_db));
  // Recompressing at full resolution loses less than shrinking first.
  const RasterImage recompressed =
      DecodeImage(EncodeJpeg(hr, JpegOptions{.quality = 70}));
  EXPECT_LT(up_db, metrics::Psnr(hr, recompressed).psnr_db);
}

}  // namespace
}  // namespace newsocr::imageops
