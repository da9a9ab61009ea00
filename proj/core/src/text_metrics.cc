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
#include "newsocr/text_metrics.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <unordered_map>

#include "newsocr/error.h"

namespace newsocr::metrics {
namespace {

bool IsZeroWidth(UChar32 c) {
  return c == 0x200B || c == 0x200C || c == 0x200D || c == 0x2060 ||
         c == 0xFEFF;
}

bool IsBidiControl(UChar32 c) {
  return c == 0x200E || c == 0x200F || c == 0x061C ||
         (c >= 0x202A && c <= 0x202E) || (c >= 0x2066 && c <= 0x2069);
}

const icu::Normalizer2& Nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || nfc == nullptr) {
    throw Error(std::string("ICU NFC normalizer unavailable: ") +
                u_errorName(status));
  }
  return *nfc;
}

// Packs (edit count, deletions) into one integer so that plain `<` orders
// alignments lexicographically. `radix` exceeds any possible deletion count.
struct PackedCost {
  std::int64_t radix;
  std::int64_t Pack(std::int64_t total, std::int64_t deletions) const {
    return total * radix + deletions;
  }
};

template <typename T>
EditCounts AlignImpl(std::span<const T> ref, std::span<const T> hyp) {
  const std::int64_t n = static_cast<std::int64_t>(ref.size());
  const std::int64_t m = static_cast<std::int64_t>(hyp.size());
  const PackedCost pc{n + 1};
  std::vector<std::int64_t> prev(m + 1), cur(m + 1);
  for (std::int64_t j = 0; j <= m; ++j) prev[j] = pc.Pack(j, 0);
  for (std::int64_t i = 1; i <= n; ++i) {
    cur[0] = pc.Pack(i, i);
    for (std::int64_t j = 1; j <= m; ++j) {
      const std::int64_t sub =
          prev[j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : pc.Pack(1, 0));
      const std::int64_t del = prev[j] + pc.Pack(1, 1);
      const std::int64_t ins = cur[j - 1] + pc.Pack(1, 0);
      cur[j] = std::min({sub, del, ins});
    }
    std::swap(prev, cur);
  }
  const std::int64_t best = prev[m];
  EditCounts e;
  const std::int64_t total = best / pc.radix;
  e.deletions = best % pc.radix;
  e.insertions = e.deletions + (m - n);
  e.substitutions = total - e.insertions - e.deletions;
  return e;
}

}  // namespace

std::string NormalizeText(std::string_view text,
                          const NormalizationPolicy& policy) {
  icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));

  icu::UnicodeString filtered;
  for (int32_t i = 0; i < in.length();) {
    const UChar32 c = in.char32At(i);
    i += U16_LENGTH(c);
    if (policy.strip_zero_width && IsZeroWidth(c)) continue;
    if (policy.strip_bidi_controls && IsBidiControl(c)) continue;
    filtered.append(c);
  }

  icu::UnicodeString composed;
  if (policy.unicode_form == UnicodeForm::kNfc) {
    UErrorCode status = U_ZERO_ERROR;
    composed = Nfc().normalize(filtered, status);
    if (U_FAILURE(status)) {
      throw Error(std::string("NFC normalization failed: ") +
                  u_errorName(status));
    }
  } else {
    composed = filtered;
  }

  icu::UnicodeString out;
  if (policy.collapse_whitespace) {
    bool pending_space = false;
    for (int32_t i = 0; i < composed.length();) {
      const UChar32 c = composed.char32At(i);
      i += U16_LENGTH(c);
      if (u_isUWhiteSpace(c)) {
        pending_space = true;
        continue;
      }
      if (pending_space && !out.isEmpty()) out.append(UChar32{0x20});
      pending_space = false;
      out.append(c);
    }
  } else {
    out = composed;
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

std::u32string DecodeUtf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  for (int32_t i = 0; i < length;) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

std::vector<std::string> Tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  const std::u32string cps = DecodeUtf8(normalized);
  std::u32string token;
  auto flush = [&] {
    if (token.empty()) return;
    icu::UnicodeString u;
    for (char32_t c : token) u.append(static_cast<UChar32>(c));
    std::string utf8;
    u.toUTF8String(utf8);
    tokens.push_back(std::move(utf8));
    token.clear();
  };
  for (char32_t c : cps) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      flush();
    } else {
      token.push_back(c);
    }
  }
  flush();
  return tokens;
}

EditCounts Align(std::span<const std::uint32_t> reference,
                 std::span<const std::uint32_t> hypothesis) {
  return AlignImpl(reference, hypothesis);
}

EditCounts Align(std::span<const char32_t> reference,
                 std::span<const char32_t> hypothesis) {
  return AlignImpl(reference, hypothesis);
}

OcrScore WordErrorRate(std::string_view reference, std::string_view hypothesis,
                       const NormalizationPolicy& policy) {
  const std::string ref = NormalizeText(reference, policy);
  const std::string hyp = NormalizeText(hypothesis, policy);
  const std::vector<std::string> ref_tokens = Tokenize(ref);
  if (ref_tokens.empty()) {
    throw ValidationError(
        "reference text is empty after normalization; WER is undefined");
  }
  const std::vector<std::string> hyp_tokens = Tokenize(hyp);

  std::unordered_map<std::string, std::uint32_t> vocab;
  auto intern = [&vocab](const std::vector<std::string>& tokens) {
    std::vector<std::uint32_t> ids;
    ids.reserve(tokens.size());
    for (const auto& t : tokens) {
      auto [it, inserted] =
          vocab.emplace(t, static_cast<std::uint32_t>(vocab.size()));
      ids.push_back(it->second);
    }
    return ids;
  };
  const std::vector<std::uint32_t> ref_ids = intern(ref_tokens);
  const std::vector<std::uint32_t> hyp_ids = intern(hyp_tokens);

  const std::u32string ref_chars = DecodeUtf8(ref);
  const std::u32string hyp_chars = DecodeUtf8(hyp);

  OcrScore score;
  score.word_edits = Align(std::span<const std::uint32_t>(ref_ids),
                           std::span<const std::uint32_t>(hyp_ids));
  score.char_edits = Align(std::span<const char32_t>(ref_chars),
                           std::span<const char32_t>(hyp_chars));
  score.reference_token_count = static_cast<std::int64_t>(ref_ids.size());
  score.reference_char_count = static_cast<std::int64_t>(ref_chars.size());
  score.wer = static_cast<double>(score.word_edits.Total()) /
              static_cast<double>(score.reference_token_count);
  score.cer = static_cast<double>(score.char_edits.Total()) /
              static_cast<double>(score.reference_char_count);
  return score;
}

}  // namespace newsocr::metrics
