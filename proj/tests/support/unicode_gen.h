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
#ifndef NEWSOCR_TESTS_SUPPORT_UNICODE_GEN_H_
#define NEWSOCR_TESTS_SUPPORT_UNICODE_GEN_H_

#include <random>
#include <string>
#include <vector>

namespace newsocr::testing {

inline void AppendUtf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

inline std::string Utf8(const std::u32string& s) {
  std::string out;
  for (char32_t c : s) AppendUtf8(out, c);
  return out;
}

// Codepoints that stress normalization: whitespace variants, zero-width and
// bidi controls, Arabic letters and harakat, Latin combining sequences,
// Hangul jamo that compose under NFC, plus arbitrary BMP/astral picks.
inline char32_t RandomTrickyCodepoint(std::mt19937& rng) {
  static const std::vector<char32_t> kPool = {
      U' ',    U'\t',   U'\n',   U'\r',   0x00A0,  0x3000,  0x2009,  0x0085,
      0x200B,  0x200C,  0x200D,  0x2060,  0xFEFF,  0x200E,  0x200F,  0x061C,
      0x202A,  0x202B,  0x202C,  0x202D,  0x202E,  0x2066,  0x2069,  U'a',
      U'e',    U'z',    U'.',    U',',    0x0301,  0x0308,  0x0327,  0x00E9,
      0x0627,  0x0628,  0x067E,  0x0679,  0x06A9,  0x06AF,  0x06CC,  0x06D2,
      0x0622,  0x0653,  0x0654,  0x0655,  0x064B,  0x064E,  0x0650,  0x0651,
      0x0652,  0x06C1,  0x06C2,  0x1100,  0x1161,  0x11A8,  0xAC00,  0x1E0A,
      0x0323,  0x0307,  0x212B,  0x2126,  0xFB50,  0xFEFB,  0x1D15E, 0x1F600};
  std::uniform_int_distribution<int> coin(0, 9);
  if (coin(rng) < 8) {
    std::uniform_int_distribution<std::size_t> pick(0, kPool.size() - 1);
    return kPool[pick(rng)];
  }
  std::uniform_int_distribution<std::uint32_t> any(0x20, 0x2FFFF);
  char32_t c;
  do {
    c = any(rng);
  } while (c >= 0xD800 && c <= 0xDFFF);
  return c;
}

inline std::string RandomTrickyString(std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::u32string s;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) s.push_back(RandomTrickyCodepoint(rng));
  return Utf8(s);
}

}  // namespace newsocr::testing

#endif  // NEWSOCR_TESTS_SUPPORT_UNICODE_GEN_H_
