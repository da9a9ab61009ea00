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
#ifndef NEWSOCR_SUPERRES_H_
#define NEWSOCR_SUPERRES_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "newsocr/image.h"
#include "newsocr/psnr.h"

namespace newsocr::superres {

struct UpscalerConfig {
  std::filesystem::path model_path;
  int scale = 4;
  int tile_size = 256;
  int tile_overlap = 16;

  void Validate() const;
};

// Implementations must tolerate concurrent Upscale calls.
class UpscalerBackend {
 public:
  virtual ~UpscalerBackend() = default;
  virtual std::string Name() const = 0;
  virtual RasterImage Upscale(const RasterImage& image,
                              const UpscalerConfig& config) const = 0;
};

// Runs the backend and enforces the (scale*W, scale*H) output contract.
RasterImage Upscale(const RasterImage& image, const UpscalerBackend& backend,
                    const UpscalerConfig& config);

class BicubicUpscaler : public UpscalerBackend {
 public:
  std::string Name() const override { return "bicubic"; }
  RasterImage Upscale(const RasterImage& image,
                      const UpscalerConfig& config) const override;
};

// Index file: one {"image_digest", "output"} record per line; `output` is a
// PNG path relative to the index file.
class ReplayUpscaler : public UpscalerBackend {
 public:
  explicit ReplayUpscaler(const std::filesystem::path& index);

  std::string Name() const override { return "replay"; }
  RasterImage Upscale(const RasterImage& image,
                      const UpscalerConfig& config) const override;

 private:
  std::map<std::string, std::filesystem::path> outputs_;
};

// Planar float image, channel-major (C, H, W), values nominally in [0,1].
struct PlanarImage {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> values;

  float& at(int x, int y, int c) {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  float at(int x, int y, int c) const {
    return values[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

PlanarImage ToPlanar(const RasterImage& image);
// Rounds half up after clamping to [0,1].
RasterImage FromPlanar(const PlanarImage& planar);

// Tile origins along one axis and the padded extent they cover. The padded
// extent is tile + ceil(max(0, n - tile) / stride) * stride with
// stride = tile - overlap; origins are 0, stride, 2*stride, ...
struct TileAxis {
  int padded = 0;
  std::vector<int> origins;
};
TileAxis ComputeTileAxis(int length, int tile, int overlap);

// Mirror index into [0, n) without repeating the edge sample, reflecting as
// often as needed.
int ReflectIndex(int i, int n);

using TileModel = std::function<PlanarImage(const PlanarImage&)>;

// Reflect-pads `input` to the tile grid, runs `model` on every tile, averages
// overlapping outputs with equal weight and crops to (scale*W, scale*H).
PlanarImage TiledUpscale(const PlanarImage& input, int scale, int tile,
                         int overlap, const TileModel& model);

// Interchange-format model with input 1x3xHxW in [0,1] and output
// 1x3x(sH)x(sW). Gray input is expanded to RGB. Construction runs one tile to
// check that the model really upscales by config.scale.
class NeuralUpscaler : public UpscalerBackend {
 public:
  explicit NeuralUpscaler(const UpscalerConfig& config);
  ~NeuralUpscaler() override;

  std::string Name() const override { return "neural"; }
  RasterImage Upscale(const RasterImage& image,
                      const UpscalerConfig& config) const override;

 private:
  PlanarImage RunTile(const PlanarImage& tile, int scale) const;

  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class BackendKind { kNeural, kReplay, kBicubic };

std::string_view BackendKindName(BackendKind kind);
BackendKind ParseBackendKind(std::string_view name);

std::unique_ptr<UpscalerBackend> MakeUpscalerBackend(
    BackendKind kind, const UpscalerConfig& config,
    const std::filesystem::path& fixture);

struct SrPair {
  std::string id;
  std::filesystem::path output;
  std::filesystem::path reference;
};

struct PairScore {
  std::string id;
  std::optional<metrics::PsnrScore> score;
  std::optional<std::string> error;
};

struct SrScore {
  std::vector<PairScore> pairs;
  // Mean of finite per-pair PSNR values; absent when none are finite.
  std::optional<double> mean_psnr_db;
  int finite_count = 0;
  int exact_count = 0;   // identical pairs (infinite PSNR)
  int failed_count = 0;  // unreadable or mismatched pairs

  bool AllExact() const {
    return exact_count > 0 && finite_count == 0 && failed_count == 0;
  }
  bool AllFailed() const {
    return !pairs.empty() && failed_count == static_cast<int>(pairs.size());
  }
};

PairScore ScorePair(std::string id, const RasterImage& output,
                    const RasterImage& reference, metrics::PsnrMode mode);
SrScore AggregatePairs(std::vector<PairScore> pairs);
// Reads each pair from disk; a failure to read or score one pair is recorded
// on that pair and never aborts the rest.
SrScore ScoreSrPairs(std::span<const SrPair> pairs, metrics::PsnrMode mode);

}  // namespace newsocr::superres

#endif  // NEWSOCR_SUPERRES_H_
