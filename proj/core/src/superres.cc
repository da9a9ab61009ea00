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
#include "newsocr/superres.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "newsocr/digest.h"
#include "newsocr/error.h"
#include "newsocr/image_io.h"
#include "newsocr/imageops.h"
#include "newsocr/jsonl.h"
#include "onnx_model.h"

namespace newsocr::superres {

void UpscalerConfig::Validate() const {
  if (scale < 1) throw ConfigError("upscaler scale must be >= 1");
  if (tile_size < 1) throw ConfigError("tile_size must be >= 1");
  if (tile_overlap < 0 || tile_overlap >= tile_size) {
    throw ConfigError("tile_overlap must be in [0, tile_size)");
  }
}

RasterImage Upscale(const RasterImage& image, const UpscalerBackend& backend,
                    const UpscalerConfig& config) {
  RasterImage out = backend.Upscale(image, config);
  if (out.width() != image.width() * config.scale ||
      out.height() != image.height() * config.scale) {
    throw ModelError(backend.Name() + " upscaler returned " + out.ShapeString() +
                     " for input " + image.ShapeString() + " at scale " +
                     std::to_string(config.scale));
  }
  return out;
}

RasterImage BicubicUpscaler::Upscale(const RasterImage& image,
                                     const UpscalerConfig& config) const {
  return imageops::Resize(image, image.width() * config.scale,
                          image.height() * config.scale,
                          imageops::ResampleKernel::kBicubic);
}

ReplayUpscaler::ReplayUpscaler(const std::filesystem::path& index) {
  const std::filesystem::path dir = index.parent_path();
  ForEachJsonLine(index, [&](const nlohmann::json& j, int line) {
    const std::string digest = RequireString(j, "image_digest", index.string(), line);
    const std::filesystem::path out = RequireString(j, "output", index.string(), line);
    outputs_[digest] = out.is_absolute() ? out : dir / out;
  });
}

RasterImage ReplayUpscaler::Upscale(const RasterImage& image,
                                    const UpscalerConfig&) const {
  const std::string digest = ImageDigest(image);
  auto it = outputs_.find(digest);
  if (it == outputs_.end()) throw FixtureMissError("upscale", digest);
  return ReadImage(it->second);
}

PlanarImage ToPlanar(const RasterImage& image) {
  PlanarImage p;
  p.width = image.width();
  p.height = image.height();
  p.channels = image.channels();
  p.values.resize(image.pixels().size());
  for (int c = 0; c < p.channels; ++c) {
    for (int y = 0; y < p.height; ++y) {
      for (int x = 0; x < p.width; ++x) p.at(x, y, c) = image.at(x, y, c) / 255.0f;
    }
  }
  return p;
}

RasterImage FromPlanar(const PlanarImage& p) {
  if (p.channels != 1 && p.channels != 3) {
    throw ModelError("planar image must have 1 or 3 channels, got " +
                     std::to_string(p.channels));
  }
  RasterImage out = RasterImage::Filled(
      p.width, p.height, p.channels == 1 ? ColorSpace::kGray : ColorSpace::kRgb, 0);
  for (int c = 0; c < p.channels; ++c) {
    for (int y = 0; y < p.height; ++y) {
      for (int x = 0; x < p.width; ++x) {
        const double v = std::clamp(static_cast<double>(p.at(x, y, c)), 0.0, 1.0);
        out.at(x, y, c) = static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
      }
    }
  }
  return out;
}

TileAxis ComputeTileAxis(int length, int tile, int overlap) {
  const int stride = tile - overlap;
  TileAxis axis;
  const int extra = std::max(0, length - tile);
  const int steps = (extra + stride - 1) / stride;
  axis.padded = tile + steps * stride;
  for (int i = 0; i <= steps; ++i) axis.origins.push_back(i * stride);
  return axis;
}

int ReflectIndex(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

PlanarImage TiledUpscale(const PlanarImage& input, int scale, int tile,
                         int overlap, const TileModel& model) {
  const TileAxis ax = ComputeTileAxis(input.width, tile, overlap);
  const TileAxis ay = ComputeTileAxis(input.height, tile, overlap);
  const int out_w = input.width * scale;
  const int out_h = input.height * scale;
  const int ch = input.channels;
  // Accumulate only the region that survives the final crop.
  std::vector<double> sum(static_cast<std::size_t>(out_w) * out_h * ch, 0.0);
  std::vector<int> hits(static_cast<std::size_t>(out_w) * out_h, 0);
  PlanarImage patch;
  patch.width = tile;
  patch.height = tile;
  patch.channels = ch;
  patch.values.resize(static_cast<std::size_t>(tile) * tile * ch);
  for (int oy : ay.origins) {
    if (oy >= input.height) continue;
    for (int ox : ax.origins) {
      if (ox >= input.width) continue;
      for (int c = 0; c < ch; ++c) {
        for (int y = 0; y < tile; ++y) {
          const int sy = ReflectIndex(oy + y, input.height);
          for (int x = 0; x < tile; ++x) {
            patch.at(x, y, c) = input.at(ReflectIndex(ox + x, input.width), sy, c);
          }
        }
      }
      const PlanarImage up = model(patch);
      if (up.width != tile * scale || up.height != tile * scale ||
          up.channels != ch) {
        throw ModelError("tile model returned " + std::to_string(up.width) + "x" +
                         std::to_string(up.height) + "x" +
                         std::to_string(up.channels) + " for a " +
                         std::to_string(tile) + " px tile at scale " +
                         std::to_string(scale));
      }
      const int x_end = std::min(out_w, (ox + tile) * scale);
      const int y_end = std::min(out_h, (oy + tile) * scale);
      for (int y = oy * scale; y < y_end; ++y) {
        for (int x = ox * scale; x < x_end; ++x) {
          ++hits[static_cast<std::size_t>(y) * out_w + x];
          for (int c = 0; c < ch; ++c) {
            sum[(static_cast<std::size_t>(c) * out_h + y) * out_w + x] +=
                up.at(x - ox * scale, y - oy * scale, c);
          }
        }
      }
    }
  }
  PlanarImage out;
  out.width = out_w;
  out.height = out_h;
  out.channels = ch;
  out.values.resize(sum.size());
  for (int c = 0; c < ch; ++c) {
    for (int y = 0; y < out_h; ++y) {
      for (int x = 0; x < out_w; ++x) {
        const std::size_t i = (static_cast<std::size_t>(c) * out_h + y) * out_w + x;
        out.values[i] = static_cast<float>(
            sum[i] / hits[static_cast<std::size_t>(y) * out_w + x]);
      }
    }
  }
  return out;
}

struct NeuralUpscaler::Impl {
  explicit Impl(const std::filesystem::path& path) : model(path) {}
  internal::OnnxModel model;
  UpscalerConfig config;
};

NeuralUpscaler::NeuralUpscaler(const UpscalerConfig& config)
    : impl_(std::make_unique<Impl>(config.model_path)) {
  config.Validate();
  impl_->config = config;
  PlanarImage probe;
  probe.width = probe.height = config.tile_size;
  probe.channels = 3;
  probe.values.assign(static_cast<std::size_t>(3) * config.tile_size * config.tile_size,
                      0.5f);
  RunTile(probe, config.scale);
}

NeuralUpscaler::~NeuralUpscaler() = default;

PlanarImage NeuralUpscaler::RunTile(const PlanarImage& tile, int scale) const {
  internal::Tensor in{{1, tile.channels, tile.height, tile.width}, tile.values};
  internal::Tensor out = impl_->model.Run(in);
  const std::vector<int> want = {1, tile.channels, tile.height * scale,
                                 tile.width * scale};
  if (out.shape != want) {
    std::string got;
    for (int d : out.shape) got += (got.empty() ? "" : "x") + std::to_string(d);
    throw ModelError("upscaler output " + got + " does not match 1x" +
                     std::to_string(tile.channels) + "x" +
                     std::to_string(want[2]) + "x" + std::to_string(want[3]) +
                     " (scale " + std::to_string(scale) + ")");
  }
  PlanarImage p;
  p.width = want[3];
  p.height = want[2];
  p.channels = tile.channels;
  p.values = std::move(out.values);
  return p;
}

RasterImage NeuralUpscaler::Upscale(const RasterImage& image,
                                    const UpscalerConfig& config) const {
  if (config.scale != impl_->config.scale) {
    throw ModelError("upscaler was loaded for scale " +
                     std::to_string(impl_->config.scale) + " but config asks for " +
                     std::to_string(config.scale));
  }
  const PlanarImage in = ToPlanar(image.color_space() == ColorSpace::kRgb
                                      ? image
                                      : ToRgb(image));
  return FromPlanar(TiledUpscale(
      in, config.scale, config.tile_size, config.tile_overlap,
      [&](const PlanarImage& tile) { return RunTile(tile, config.scale); }));
}

std::string_view BackendKindName(BackendKind kind) {
  switch (kind) {
    case BackendKind::kNeural:
      return "neural";
    case BackendKind::kReplay:
      return "replay";
    case BackendKind::kBicubic:
      return "bicubic";
  }
  return "unknown";
}

BackendKind ParseBackendKind(std::string_view name) {
  if (name == "neural") return BackendKind::kNeural;
  if (name == "replay") return BackendKind::kReplay;
  if (name == "bicubic") return BackendKind::kBicubic;
  throw ConfigError("unknown upscaler backend '" + std::string(name) +
                    "' (expected neural, replay or bicubic)");
}

std::unique_ptr<UpscalerBackend> MakeUpscalerBackend(
    BackendKind kind, const UpscalerConfig& config,
    const std::filesystem::path& fixture) {
  config.Validate();
  switch (kind) {
    case BackendKind::kNeural:
      if (config.model_path.empty()) {
        throw ConfigError("neural upscaler needs model_path");
      }
      return std::make_unique<NeuralUpscaler>(config);
    case BackendKind::kReplay:
      if (fixture.empty()) throw ConfigError("replay upscaler needs a fixture index");
      return std::make_unique<ReplayUpscaler>(fixture);
    case BackendKind::kBicubic:
      return std::make_unique<BicubicUpscaler>();
  }
  throw ConfigError("unknown upscaler backend");
}

PairScore ScorePair(std::string id, const RasterImage& output,
                    const RasterImage& reference, metrics::PsnrMode mode) {
  PairScore p;
  p.id = std::move(id);
  try {
    p.score = metrics::Psnr(reference, output, mode);
  } catch (const Error& e) {
    p.error = e.what();
  }
  return p;
}

SrScore AggregatePairs(std::vector<PairScore> pairs) {
  SrScore s;
  double sum = 0;
  for (const auto& p : pairs) {
    if (!p.score) {
      ++s.failed_count;
    } else if (p.score->IsExact()) {
      ++s.exact_count;
    } else {
      ++s.finite_count;
      sum += p.score->psnr_db;
    }
  }
  if (s.finite_count > 0) s.mean_psnr_db = sum / s.finite_count;
  s.pairs = std::move(pairs);
  return s;
}

SrScore ScoreSrPairs(std::span<const SrPair> pairs, metrics::PsnrMode mode) {
  std::vector<PairScore> scores;
  for (const SrPair& pair : pairs) {
    try {
      scores.push_back(
          ScorePair(pair.id, ReadImage(pair.output), ReadImage(pair.reference), mode));
    } catch (const Error& e) {
      scores.push_back({pair.id, std::nullopt, std::string(e.what())});
    }
  }
  return AggregatePairs(std::move(scores));
}

}  // namespace newsocr::superres
