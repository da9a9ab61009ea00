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
#ifndef NEWSOCR_TEXT_METRICS_H_
#define NEWSOCR_TEXT_METRICS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace newsocr::metrics {

enum class UnicodeForm { kNfc, kNone };

struct NormalizationPolicy {
  UnicodeForm unicode_form = UnicodeForm::kNfc;
  // ZWSP, ZWNJ, ZWJ, word joiner, BOM.
  bool strip_zero_width = true;
  // Any White_Space run becomes one U+0020; ends are trimmed.
  bool collapse_whitespace = true;
  // LRM, RLM, ALM, embeddings, overrides and isolates.
  bool strip_bidi_controls = true;
};

// Total function: invalid UTF-8 sequences decode to U+FFFD. Idempotent.
std::string NormalizeText(std::string_view text,
                          const NormalizationPolicy& policy);

std::u32string DecodeUtf8(std::string_view text);

// Splits on whitespace; no empty tokens.
std::vector<std::string> Tokenize(std::string_view normalized);

struct EditCounts {
  std::int64_t substitutions = 0;
  std::int64_t insertions = 0;
  std::int64_t deletions = 0;

  std::int64_t Total() const { return substitutions + insertions + deletions; }
  EditCounts& operator+=(const EditCounts& o) {
    substitutions += o.substitutions;
    insertions += o.insertions;
    deletions += o.deletions;
    return *this;
  }
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

// Unit-cost Levenshtein alignment of `hypothesis` against `reference`.
// Among minimum-cost alignments the one with the fewest deletions is
// reported, which makes the S/I/D split unique.
EditCounts Align(std::span<const std::uint32_t> reference,
                 std::span<const std::uint32_t> hypothesis);
EditCounts Align(std::span<const char32_t> reference,
                 std::span<const char32_t> hypothesis);

struct OcrScore {
  double wer = 0;
  double cer = 0;
  EditCounts word_edits;
  EditCounts char_edits;
  std::int64_t reference_token_count = 0;
  std::int64_t reference_char_count = 0;
};

// Both strings are normalized; words are whitespace tokens (punctuation stays
// attached), characters are NFC codepoints including the collapsed spaces.
// Throws ValidationError if the reference is empty after normalization.
OcrScore WordErrorRate(std::string_view reference, std::string_view hypothesis,
                       const NormalizationPolicy& policy);

}  // namespace newsocr::metrics

#endif  // NEWSOCR_TEXT_METRICS_H_
