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
#ifndef NEWSOCR_TESTS_SUPPORT_JPEG_INSPECT_H_
#define NEWSOCR_TESTS_SUPPORT_JPEG_INSPECT_H_

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>
#include <stdexcept>

namespace newsocr::testing {

using QuantTable = std::array<int, 64>;  // natural (row-major) order

inline constexpr std::array<int, 64> kZigzagToNatural = {
    0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
    12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};

inline constexpr QuantTable kStdLuminance = {
    16, 11, 10, 16, 24,  40,  51,  61,  12, 12, 14, 19, 26,  58,  60,  55,
    14, 13, 16, 24, 40,  57,  69,  56,  14, 17, 22, 29, 51,  87,  80,  62,
    18, 22, 37, 56, 68,  109, 103, 77,  24, 35, 55, 64, 81,  104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101, 72, 92, 95, 98, 112, 100, 103, 99};

inline constexpr QuantTable kStdChrominance = {
    17, 18, 24, 47, 99, 99, 99, 99, 18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99, 47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99, 99};

// The IJG quality mapping applied to a base table, baseline-clamped.
inline QuantTable ScaledTable(const QuantTable& base, int quality) {
  const int scale = quality < 50 ? 5000 / quality : 200 - 2 * quality;
  QuantTable out{};
  for (int i = 0; i < 64; ++i) {
    out[i] = std::clamp((base[i] * scale + 50) / 100, 1, 255);
  }
  return out;
}

// Walks the marker segments up to the first SOS and returns every DQT table
// by id, converted to natural order.
inline std::map<int, QuantTable> ReadQuantTables(
    std::span<const std::uint8_t> jpeg) {
  std::map<int, QuantTable> tables;
  if (jpeg.size() < 4 || jpeg[0] != 0xFF || jpeg[1] != 0xD8) {
    throw std::runtime_error("not a JPEG stream");
  }
  std::size_t pos = 2;
  while (pos + 4 <= jpeg.size()) {
    if (jpeg[pos] != 0xFF) throw std::runtime_error("bad marker");
    const int marker = jpeg[pos + 1];
    const std::size_t len = (jpeg[pos + 2] << 8) | jpeg[pos + 3];
    if (marker == 0xDA) break;
    if (marker == 0xDB) {
      std::size_t p = pos + 4;
      const std::size_t end = pos + 2 + len;
      while (p < end) {
        const int precision = jpeg[p] >> 4;
        const int id = jpeg[p] & 0x0F;
        ++p;
        QuantTable t{};
        for (int k = 0; k < 64; ++k) {
          int v = jpeg[p++];
          if (precision) v = (v << 8) | jpeg[p++];
          t[kZigzagToNatural[k]] = v;
        }
        tables[id] = t;
      }
    }
    pos += 2 + len;
  }
  return tables;
}

// Horizontal/vertical sampling factors of each component from SOF0.
inline std::vector<std::pair<int, int>> ReadSamplingFactors(
    std::span<const std::uint8_t> jpeg) {
  std::size_t pos = 2;
  while (pos + 4 <= jpeg.size()) {
    const int marker = jpeg[pos + 1];
    const std::size_t len = (jpeg[pos + 2] << 8) | jpeg[pos + 3];
    if (marker == 0xC0) {
      const int n = jpeg[pos + 9];
      std::vector<std::pair<int, int>> out;
      for (int c = 0; c < n; ++c) {
        const int f = jpeg[pos + 11 + 3 * c];
        out.emplace_back(f >> 4, f & 0x0F);
      }
      return out;
    }
    if (marker == 0xDA) break;
    pos += 2 + len;
  }
  throw std::runtime_error("no baseline SOF0 segment");
}

}  // namespace newsocr::testing

#endif  // NEWSOCR_TESTS_SUPPORT_JPEG_INSPECT_H_
