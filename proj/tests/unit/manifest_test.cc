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
#include "newsocr/manifest.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "newsocr/error.h"

namespace newsocr {
namespace {

TEST(ManifestTest, LoadsSamplesInFileOrder) {
  std::istringstream in(
      R"({"id":"p1","image":"pages/p1.png","text":"سلام دنیا"})"
      "\n"
      R"({"image":"pages/p2.png","id":"p2","labels":"labels/p2.txt"})"
      "\n"
      R"({"id":"p3","image":"p3.jpg","pair":"hr/p3.png"})"
      "\n");
  Manifest m = ParseManifest(in, "m.jsonl");
  ASSERT_EQ(m.samples.size(), 3u);
  EXPECT_EQ(m.samples[0].id, "p1");
  EXPECT_EQ(*m.samples[0].text, "سلام دنیا");
  EXPECT_EQ(m.samples[1].id, "p2");
  EXPECT_EQ(*m.samples[1].labels, "labels/p2.txt");
  EXPECT_FALSE(m.samples[1].text.has_value());
  EXPECT_EQ(m.samples[2].id, "p3");
  EXPECT_EQ(*m.samples[2].pair, "hr/p3.png");
}

TEST(ManifestTest, DuplicateIdIsAValidationError) {
  std::istringstream in(R"({"id":"a","image":"x.png"})"
                        "\n"
                        R"({"id":"a","image":"y.png"})"
                        "\n");
  EXPECT_THROW(ParseManifest(in, "dup.jsonl"), ValidationError);
}

TEST(ManifestTest, EmptyFileGivesEmptyManifest) {
  std::istringstream in("");
  EXPECT_TRUE(ParseManifest(in, "empty.jsonl").samples.empty());
}

TEST(ManifestTest, MalformedLineReportsLineNumber) {
  std::istringstream in(R"({"id":"a","image":"x.png"})"
                        "\n\n"
                        "{not json\n");
  try {
    ParseManifest(in, "bad.jsonl");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("bad.jsonl:3"), std::string::npos);
  }
}

TEST(ManifestTest, MissingImageAndUnknownFieldsAreRejected) {
  std::istringstream no_image(R"({"id":"a"})");
  EXPECT_THROW(ParseManifest(no_image, "m"), ParseError);
  std::istringstream extra(R"({"id":"a","image":"x","colour":"red"})");
  EXPECT_THROW(ParseManifest(extra, "m"), ParseError);
  std::istringstream wrong_type(R"({"id":"a","image":"x","text":3})");
  EXPECT_THROW(ParseManifest(wrong_type, "m"), ParseError);
}

TEST(ManifestTest, CanonicalFileRoundTripsByteForByte) {
  const std::string canonical =
      R"({"id":"p1","image":"pages/p1.png","text":"سلام\nدنیا"})"
      "\n"
      R"({"id":"p2","image":"p2.png","labels":"l/p2.txt","pair":"hr/p2.png"})"
      "\n";
  std::istringstream in(canonical);
  Manifest m = ParseManifest(in, "m");
  std::ostringstream out;
  WriteManifest(m, out);
  EXPECT_EQ(out.str(), canonical);
}

TEST(ManifestTest, ResolvesRelativePathsAgainstBaseDir) {
  Manifest m;
  m.base_dir = "/data/split";
  EXPECT_EQ(m.Resolve("img/a.png"), std::filesystem::path("/data/split/img/a.png"));
  EXPECT_EQ(m.Resolve("/abs/a.png"), std::filesystem::path("/abs/a.png"));
}

TEST(YoloLabelsTest, CentredHalfSizeBox) {
  std::istringstream in("0 0.5 0.5 0.5 0.5\n");
  YoloLabels labels = ParseYoloLabels(in, "l.txt", 100, 100);
  ASSERT_EQ(labels.boxes.size(), 1u);
  EXPECT_EQ(labels.boxes[0].class_id, 0);
  EXPECT_EQ(labels.boxes[0].box, BoundingBox::Make(25, 25, 75, 75));
}

TEST(YoloLabelsTest, ClampsToImageBounds) {
  std::istringstream in("0 0.0 0.0 0.1 0.1\n");
  YoloLabels labels = ParseYoloLabels(in, "l.txt", 100, 100);
  ASSERT_EQ(labels.boxes.size(), 1u);
  EXPECT_EQ(labels.boxes[0].box, BoundingBox::Make(0, 0, 5, 5));
}

TEST(YoloLabelsTest, DropsBoxesThatCollapseAfterClamping) {
  std::istringstream in("1 1.5 0.5 0.2 0.2\n2 0.5 0.5 0.0 0.3\n0 0.5 0.5 1 1\n");
  YoloLabels labels = ParseYoloLabels(in, "l.txt", 50, 40);
  EXPECT_EQ(labels.dropped, 2);
  ASSERT_EQ(labels.boxes.size(), 1u);
  EXPECT_EQ(labels.boxes[0].box, BoundingBox::Make(0, 0, 50, 40));
}

TEST(YoloLabelsTest, EmptyFileGivesNoBoxes) {
  std::istringstream in("");
  EXPECT_TRUE(ParseYoloLabels(in, "l.txt", 10, 10).boxes.empty());
}

TEST(YoloLabelsTest, ParseErrorsCarryLineNumbers) {
  std::istringstream wrong_count("0 0.5 0.5 0.5 0.5\n0 0.5 0.5 0.5\n");
  try {
    ParseYoloLabels(wrong_count, "l.txt", 10, 10);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  std::istringstream non_numeric("0 0.5 abc 0.5 0.5\n");
  EXPECT_THROW(ParseYoloLabels(non_numeric, "l.txt", 10, 10), ParseError);
  std::istringstream fractional_class("0.5 0.5 0.5 0.5 0.5\n");
  EXPECT_THROW(ParseYoloLabels(fractional_class, "l.txt", 10, 10), ParseError);
}

// Unclamped boxes survive pixel -> normalized -> pixel within 1e-9 px.
TEST(YoloLabelsTest, NormalizedRoundTripProperty) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dim(1, 4000);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    const double x0 = unit(rng) * w * 0.9;
    const double y0 = unit(rng) * h * 0.9;
    const double x1 = x0 + (w - x0) * (0.01 + 0.99 * unit(rng));
    const double y1 = y0 + (h - y0) * (0.01 + 0.99 * unit(rng));
    if (!(x1 > x0 && y1 > y0)) continue;
    GroundTruthBox gt{BoundingBox::Make(x0, y0, x1, y1), trial % 3};
    std::istringstream in(FormatYoloLine(gt, w, h));
    YoloLabels back = ParseYoloLabels(in, "rt", w, h);
    ASSERT_EQ(back.boxes.size(), 1u);
    EXPECT_EQ(back.boxes[0].class_id, gt.class_id);
    EXPECT_NEAR(back.boxes[0].box.x_min, x0, 1e-9);
    EXPECT_NEAR(back.boxes[0].box.y_min, y0, 1e-9);
    EXPECT_NEAR(back.boxes[0].box.x_max, x1, 1e-9);
    EXPECT_NEAR(back.boxes[0].box.y_max, y1, 1e-9);
  }
}

}  // namespace
}  // namespace newsocr
