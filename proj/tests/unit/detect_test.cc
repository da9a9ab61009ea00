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
#include "newsocr/detect.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <thread>

#include "newsocr/detection_metrics.h"
#include "newsocr/digest.h"
#include "newsocr/error.h"
#include "newsocr/jsonl.h"

namespace newsocr::detect {
namespace {

const std::filesystem::path kModels =
    std::filesystem::path(NEWSOCR_TEST_DATA_DIR) / "models";

BoundingBox Box(double x0, double y0, double x1, double y1) {
  return BoundingBox::Make(x0, y0, x1, y1);
}

class FakeRowsBackend : public DetectorBackend {
 public:
  explicit FakeRowsBackend(std::vector<std::vector<float>> rows)
      : rows_(std::move(rows)) {}
  std::string Name() const override { return "fake"; }
  BackendOutput Infer(const RasterImage& image,
                      const DetectorConfig& config) const override {
    RawRows r;
    r.letterbox = ComputeLetterbox(image.width(), image.height(), config.input_size);
    r.count = static_cast<int>(rows_.size());
    r.width = rows_.empty() ? 6 : static_cast<int>(rows_[0].size());
    for (const auto& row : rows_) r.values.insert(r.values.end(), row.begin(), row.end());
    return r;
  }

 private:
  std::vector<std::vector<float>> rows_;
};

TEST(LetterboxTest, WidePageIsPaddedVertically) {
  const Letterbox lb = ComputeLetterbox(1280, 640, 640);
  EXPECT_EQ(lb.scale, 0.5);
  EXPECT_EQ(lb.resized_width, 640);
  EXPECT_EQ(lb.resized_height, 320);
  EXPECT_EQ(lb.pad_x, 0);
  EXPECT_EQ(lb.pad_y, 160);
  EXPECT_EQ(lb.ToModel(Box(0, 0, 1280, 640)), Box(0, 160, 640, 480));
}

TEST(LetterboxTest, OddPaddingIsFloored) {
  const Letterbox lb = ComputeLetterbox(100, 33, 64);
  EXPECT_EQ(lb.resized_width, 64);
  EXPECT_EQ(lb.resized_height, 21);  // round(33 * 0.64)
  EXPECT_EQ(lb.pad_y, 21);           // (64 - 21) / 2
}

TEST(LetterboxTest, MappingRoundTripsRandomBoxes) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> dim(1, 5000);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 5000; ++i) {
    const int w = dim(rng), h = dim(rng);
    const Letterbox lb = ComputeLetterbox(w, h, 640);
    const double x0 = u(rng) * w * 0.9, y0 = u(rng) * h * 0.9;
    const BoundingBox b = Box(x0, y0, x0 + 1 + u(rng) * (w - x0),
                              y0 + 1 + u(rng) * (h - y0));
    const BoundingBox back = lb.ToImage(lb.ToModel(b));
    ASSERT_NEAR(back.x_min, b.x_min, 0.5);
    ASSERT_NEAR(back.y_min, b.y_min, 0.5);
    ASSERT_NEAR(back.x_max, b.x_max, 0.5);
    ASSERT_NEAR(back.y_max, b.y_max, 0.5);
  }
}

TEST(LetterboxTest, TensorHasFillAndPlanarRgb) {
  RasterImage img = RasterImage::Filled(4, 2, ColorSpace::kRgb, 0);
  for (int y = 0; y < 2; ++y) {
    for (int x = 0; x < 4; ++x) img.at(x, y, 0) = 255;  // pure red
  }
  const Letterbox lb = ComputeLetterbox(4, 2, 4);
  const std::vector<float> t = LetterboxTensor(img, lb);
  ASSERT_EQ(t.size(), 48u);
  EXPECT_FLOAT_EQ(t[0], 114 / 255.0f);   // row 0 is padding
  EXPECT_FLOAT_EQ(t[4], 1.0f);           // red plane, row 1
  EXPECT_FLOAT_EQ(t[16 + 4], 0.0f);      // green plane, row 1
  EXPECT_FLOAT_EQ(t[12], 114 / 255.0f);  // row 3 is padding
}

TEST(DecodeRowsTest, MapsCentreFormatBackToImagePixels) {
  RawRows rows;
  rows.letterbox = ComputeLetterbox(1280, 640, 640);
  rows.count = 2;
  rows.width = 6;
  rows.values = {320, 320, 100, 200, 0.2f, 0.9f,   //
                 100, 100, 10, 10, 0.1f, 0.2f};
  const auto dets = DecodeRows(rows, 1280, 640, 0.25);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_EQ(dets[0].class_id, 1);
  EXPECT_FLOAT_EQ(dets[0].confidence, 0.9f);
  // Model box (270,220)-(370,420), minus pad (0,160), divided by 0.5.
  EXPECT_EQ(dets[0].box, Box(540, 120, 740, 520));
}

TEST(DecodeRowsTest, ClampsAndDropsCollapsedBoxes) {
  RawRows rows;
  rows.letterbox = ComputeLetterbox(640, 640, 640);
  rows.count = 2;
  rows.width = 5;
  rows.values = {630, 10, 40, 40, 0.8f,  //
                 700, 10, 40, 40, 0.8f};
  const auto dets = DecodeRows(rows, 640, 640, 0.25);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_EQ(dets[0].box, Box(610, 0, 640, 30));
}

TEST(DecodeRowsTest, RejectsRowsWithoutClassScores) {
  RawRows rows;
  rows.count = 1;
  rows.width = 4;
  rows.values = {1, 2, 3, 4};
  EXPECT_THROW(DecodeRows(rows, 10, 10, 0.1), ModelError);
}

TEST(NmsTest, HighlyOverlappingPairKeepsTheStrongerBox) {
  // IoU of these two boxes is 0.9.
  const BoundingBox a = Box(0, 0, 100, 100);
  const BoundingBox b = Box(0, 0, 100, 90);
  ASSERT_DOUBLE_EQ(metrics::Iou(a, b), 0.9);
  const auto kept = NonMaxSuppression({{b, 0, 0.8}, {a, 0, 0.9}}, 0.5);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].confidence, 0.9);
  EXPECT_EQ(kept[0].box, a);
}

TEST(NmsTest, DifferentClassesDoNotSuppressEachOther) {
  const BoundingBox a = Box(0, 0, 100, 100);
  EXPECT_EQ(NonMaxSuppression({{a, 0, 0.9}, {a, 1, 0.8}}, 0.5).size(), 2u);
}

TEST(NmsTest, OutputHasNoSameClassPairAboveThreshold) {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> u(0, 50);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Detection> cands;
    for (int i = 0; i < 30; ++i) {
      const double x = u(rng), y = u(rng);
      cands.push_back({Box(x, y, x + 5 + u(rng), y + 5 + u(rng)), i % 2,
                       std::uniform_real_distribution<double>(0, 1)(rng)});
    }
    const double thr = 0.3 + 0.4 * (trial % 3) / 2.0;
    const auto kept = NonMaxSuppression(cands, thr);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (i > 0) {
        ASSERT_GE(kept[i - 1].confidence, kept[i].confidence);
      }
      for (std::size_t j = i + 1; j < kept.size(); ++j) {
        if (kept[i].class_id != kept[j].class_id) continue;
        ASSERT_LE(metrics::Iou(kept[i].box, kept[j].box), thr);
      }
    }
  }
}

TEST(DetectRegionsTest, ThresholdsSuppressesAndSorts) {
  const FakeRowsBackend backend({{100, 100, 40, 40, 0.5f, 0},
                                 {300, 300, 40, 40, 0.7f, 0},
                                 {101, 100, 40, 40, 0.6f, 0},
                                 {500, 500, 40, 40, 0.1f, 0.2f}});
  DetectorConfig config;
  const auto dets =
      DetectRegions(RasterImage::Filled(640, 640, ColorSpace::kRgb, 0), backend, config);
  ASSERT_EQ(dets.size(), 2u);
  EXPECT_FLOAT_EQ(dets[0].confidence, 0.7f);
  EXPECT_FLOAT_EQ(dets[1].confidence, 0.6f);
}

TEST(DetectRegionsTest, AllBelowThresholdGivesEmptyList) {
  const FakeRowsBackend backend({{100, 100, 40, 40, 0.2f, 0.1f}});
  DetectorConfig config;
  EXPECT_TRUE(DetectRegions(RasterImage::Filled(64, 64, ColorSpace::kGray, 0),
                            backend, config)
                  .empty());
}

TEST(DetectorConfigTest, Validation) {
  DetectorConfig c;
  EXPECT_NO_THROW(c.Validate());
  c.input_size = 650;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = DetectorConfig{};
  c.confidence_threshold = 1.5;
  EXPECT_THROW(c.Validate(), ConfigError);
  EXPECT_THROW(ParseTask("paragraph"), ConfigError);
  EXPECT_EQ(ParseTask(TaskName(Task::kColumn)), Task::kColumn);
}

TEST(ReplayDetectorTest, ServesRecordedDetectionsByDigest) {
  const RasterImage page = RasterImage::Filled(30, 20, ColorSpace::kRgb, 9);
  DetectionRecord rec;
  rec.image_digest = ImageDigest(page);
  rec.task = Task::kArticle;
  rec.detections = {{Box(1, 1, 5, 5), 0, 0.4}, {Box(2, 2, 9, 9), 0, 0.8}};
  const ReplayDetector replay({rec}, Task::kArticle);
  const auto dets = DetectRegions(page, replay, DetectorConfig{});
  ASSERT_EQ(dets.size(), 2u);
  EXPECT_EQ(dets[0], rec.detections[1]);
  EXPECT_EQ(dets[1], rec.detections[0]);

  const RasterImage other = RasterImage::Filled(30, 20, ColorSpace::kRgb, 10);
  EXPECT_THROW(DetectRegions(other, replay, DetectorConfig{}), FixtureMissError);
  const ReplayDetector columns({rec}, Task::kColumn);
  EXPECT_THROW(DetectRegions(page, columns, DetectorConfig{}), FixtureMissError);
}

TEST(ReplayDetectorTest, ConflictingRecordsAreRejected) {
  DetectionRecord a{"d", Task::kColumn, {{Box(0, 0, 1, 1), 0, 0.5}}, {}};
  DetectionRecord b = a;
  b.detections[0].confidence = 0.6;
  EXPECT_THROW(ReplayDetector({a, b}, Task::kColumn), ValidationError);
  EXPECT_NO_THROW(ReplayDetector({a, a}, Task::kColumn));
}

TEST(DetectionRecordTest, JsonRoundTrip) {
  DetectionRecord r{"abc", Task::kColumn,
                    {{Box(0.5, 1, 2.25, 3), 2, 0.125}}, std::string("p7")};
  std::ostringstream out;
  WriteDetectionRecords({r, r}, out);
  std::istringstream in(out.str());
  std::vector<DetectionRecord> back;
  ForEachJsonLine(in, "rt", [&](const nlohmann::json& j, int line) {
    back.push_back(DetectionRecordFromJson(j, "rt", line));
  });
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].image_digest, "abc");
  EXPECT_EQ(back[0].task, Task::kColumn);
  EXPECT_EQ(back[0].detections, r.detections);
  EXPECT_EQ(back[0].sample_id, r.sample_id);
}

TEST(DetectionRecordTest, MalformedRecordsNameTheLine) {
  std::istringstream in(
      R"({"image_digest":"a","task":"article","detections":[]})"
      "\n"
      R"({"image_digest":"b","task":"article","detections":[{"x_min":5,"y_min":0,"x_max":5,"y_max":1,"class_id":0,"confidence":0.5}]})"
      "\n");
  try {
    ForEachJsonLine(in, "fx", [&](const nlohmann::json& j, int line) {
      DetectionRecordFromJson(j, "fx", line);
    });
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(ReadingOrderTest, ColumnsReadRightToLeft) {
  std::vector<Detection> cols;
  for (double cx : {100.0, 500.0, 300.0}) {
    cols.push_back({Box(cx - 50, 0, cx + 50, 900), 0, 0.9});
  }
  const auto ordered = ReadingOrder(cols, Task::kColumn);
  EXPECT_EQ(ordered[0].box.CenterX(), 500);
  EXPECT_EQ(ordered[1].box.CenterX(), 300);
  EXPECT_EQ(ordered[2].box.CenterX(), 100);
}

TEST(ReadingOrderTest, ColumnTiesGoTopToBottom) {
  const std::vector<Detection> cols = {{Box(0, 500, 10, 600), 0, 0.9},
                                       {Box(0, 0, 10, 100), 0, 0.8}};
  const auto ordered = ReadingOrder(cols, Task::kColumn);
  EXPECT_EQ(ordered[0].box.y_min, 0);
}

TEST(ReadingOrderTest, SingleDetectionIsItself) {
  const std::vector<Detection> one = {{Box(3, 4, 5, 6), 1, 0.3}};
  EXPECT_EQ(ReadingOrder(one, Task::kArticle), one);
  EXPECT_EQ(ReadingOrder(one, Task::kColumn), one);
}

TEST(ReadingOrderTest, StackedArticlesReadTopFirst) {
  const std::vector<Detection> arts = {{Box(0, 600, 800, 1000), 0, 0.9},
                                       {Box(0, 0, 800, 500), 0, 0.8}};
  const auto ordered = ReadingOrder(arts, Task::kArticle);
  EXPECT_EQ(ordered[0].box.y_min, 0);
  EXPECT_EQ(ordered[1].box.y_min, 600);
}

TEST(ReadingOrderTest, ArticlesInOneBandReadRightToLeft) {
  // A and B overlap vertically by 60 of B's 100 px; C sits below both.
  const std::vector<Detection> arts = {{Box(0, 0, 300, 200), 0, 0.5},
                                       {Box(400, 140, 700, 240), 0, 0.5},
                                       {Box(0, 400, 700, 600), 0, 0.5}};
  const auto ordered = ReadingOrder(arts, Task::kArticle);
  EXPECT_EQ(ordered[0], arts[1]);
  EXPECT_EQ(ordered[1], arts[0]);
  EXPECT_EQ(ordered[2], arts[2]);
  // Below half of the shorter height the boxes fall into separate rows.
  const std::vector<Detection> apart = {{Box(0, 0, 300, 200), 0, 0.5},
                                        {Box(400, 160, 700, 260), 0, 0.5}};
  EXPECT_EQ(ReadingOrder(apart, Task::kArticle)[0], apart[0]);
}

TEST(ReadingOrderTest, IsADeterministicPermutation) {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(0, 1000);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Detection> dets;
    for (int i = 0; i < 12; ++i) {
      const double x = u(rng), y = u(rng);
      dets.push_back({Box(x, y, x + 1 + u(rng) / 4, y + 1 + u(rng) / 4), 0,
                      static_cast<double>(i) / 12});
    }
    for (Task t : {Task::kArticle, Task::kColumn}) {
      const auto a = ReadingOrder(dets, t);
      ASSERT_EQ(a, ReadingOrder(dets, t));
      auto key = [](const Detection& d) { return d.confidence; };
      std::vector<double> want, got;
      for (const auto& d : dets) want.push_back(key(d));
      for (const auto& d : a) got.push_back(key(d));
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      ASSERT_EQ(got, want);
    }
  }
}

// Page with white background and one black 160 px cell at grid (1, 0) plus a
// half-black cell at grid (3, 2).
RasterImage ToyPage() {
  RasterImage img = RasterImage::Filled(640, 640, ColorSpace::kRgb, 255);
  for (int y = 0; y < 160; ++y) {
    for (int x = 160; x < 320; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = 0;
    }
  }
  for (int y = 320; y < 480; ++y) {
    for (int x = 480; x < 560; ++x) {
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = 0;
    }
  }
  return img;
}

TEST(NeuralDetectorTest, ToyModelFindsDarkCells) {
  const NeuralDetector det(kModels / "toy_detector.onnx", 640);
  DetectorConfig config;
  config.confidence_threshold = 0.4;
  const auto dets = DetectRegions(ToyPage(), det, config);
  ASSERT_EQ(dets.size(), 2u);
  EXPECT_EQ(dets[0].box, Box(160, 0, 320, 160));
  EXPECT_NEAR(dets[0].confidence, 1.0, 1e-5);
  EXPECT_EQ(dets[1].box, Box(480, 320, 640, 480));
  EXPECT_NEAR(dets[1].confidence, 0.5, 1e-5);
  EXPECT_EQ(dets[0].class_id, 0);
}

TEST(NeuralDetectorTest, LetterboxedInputMapsBackToThePage) {
  // 1280x640 page: scale 0.5, 160 px of padding above and below. A black
  // block covering model cell (2, 1) lands at page x 640..960, y 0..320.
  RasterImage page = RasterImage::Filled(1280, 640, ColorSpace::kRgb, 255);
  for (int y = 0; y < 320; ++y) {
    for (int x = 640; x < 960; ++x) {
      for (int c = 0; c < 3; ++c) page.at(x, y, c) = 0;
    }
  }
  const NeuralDetector det(kModels / "toy_detector.onnx", 640);
  DetectorConfig config;
  config.confidence_threshold = 0.9;
  const auto dets = DetectRegions(page, det, config);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_EQ(dets[0].box, Box(640, 0, 960, 320));
}

TEST(NeuralDetectorTest, ShapeMismatchesFailAtLoad) {
  EXPECT_THROW(NeuralDetector(kModels / "toy_detector.onnx", 320), ModelError);
  EXPECT_THROW(NeuralDetector(kModels / "nearest_x4.onnx", 64), ModelError);
  EXPECT_THROW(NeuralDetector(kModels / "missing.onnx", 640), ModelError);
  const NeuralDetector det(kModels / "toy_detector.onnx", 640);
  DetectorConfig config;
  config.input_size = 320;
  EXPECT_THROW(det.Infer(ToyPage(), config), ModelError);
}

TEST(NeuralDetectorTest, ReplayOfARecordedRunIsInterchangeable) {
  const NeuralDetector neural(kModels / "toy_detector.onnx", 640);
  DetectorConfig config;
  config.confidence_threshold = 0.4;
  const RasterImage page = ToyPage();
  const auto live = DetectRegions(page, neural, config);
  DetectionRecord rec{ImageDigest(page), Task::kArticle, live, {}};
  std::ostringstream out;
  WriteDetectionRecords({rec}, out);
  std::istringstream in(out.str());
  std::vector<DetectionRecord> loaded;
  ForEachJsonLine(in, "rec", [&](const nlohmann::json& j, int line) {
    loaded.push_back(DetectionRecordFromJson(j, "rec", line));
  });
  const ReplayDetector replay(loaded, Task::kArticle);
  EXPECT_EQ(DetectRegions(page, replay, config), live);
}

TEST(NeuralDetectorTest, ConcurrentCallsAgree) {
  const NeuralDetector det(kModels / "toy_detector.onnx", 640);
  DetectorConfig config;
  config.confidence_threshold = 0.4;
  const RasterImage page = ToyPage();
  const auto want = DetectRegions(page, det, config);
  std::vector<std::vector<Detection>> got(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&, i] { got[i] = DetectRegions(page, det, config); });
  }
  for (auto& t : threads) t.join();
  for (const auto& g : got) EXPECT_EQ(g, want);
}

}  // namespace
}  // namespace newsocr::detect
