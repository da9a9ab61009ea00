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
#ifndef NEWSOCR_IMAGE_IO_H_
#define NEWSOCR_IMAGE_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "newsocr/image.h"

namespace newsocr {

std::vector<std::uint8_t> ReadFileBytes(const std::filesystem::path& path);

// Writes through a temporary sibling and renames, so readers never observe a
// partially written file.
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::uint8_t> bytes);
void WriteFileText(const std::filesystem::path& path, std::string_view text);

// PNG or JPEG, sniffed from the magic bytes. Alpha is composited away,
// 16-bit samples are reduced to 8 bits, palettes are expanded.
RasterImage DecodeImage(std::span<const std::uint8_t> bytes);
RasterImage ReadImage(const std::filesystem::path& path);

// Lossless and deterministic for a given libpng build.
std::vector<std::uint8_t> EncodePng(const RasterImage& image);
void WritePng(const RasterImage& image, const std::filesystem::path& path);

struct JpegOptions {
  int quality = 95;  // 1..100, standard IJG scale
};

// Baseline JPEG, 4:2:0 chroma subsampling for colour input, standard
// Huffman tables. Throws ValidationError for quality outside 1..100.
std::vector<std::uint8_t> EncodeJpeg(const RasterImage& image,
                                     const JpegOptions& options);

}  // namespace newsocr

#endif  // NEWSOCR_IMAGE_IO_H_
