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
#include "newsocr/refusal.h"

#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>

namespace newsocr::recognize {

const std::vector<std::string>& DefaultRefusalPatterns() {
  static const std::vector<std::string> kPatterns = {
      "Unfortunately, I am unable to extract text",
      "I can't directly extract text",
      "The image contains text in what appears to be",
  };
  return kPatterns;
}

const std::vector<std::string>& DefaultInabilityPhrases() {
  static const std::vector<std::string> kPhrases = {
      "i can't",      "i cannot",        "i can not",     "i am unable",
      "i'm unable",   "i am not able",   "i'm not able",  "i won't be able",
      "i will not be able", "i'm sorry, but i", "i apologize, but i",
  };
  return kPhrases;
}

std::string FoldCase(std::string_view text) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.foldCase();
  u.findAndReplace(icu::UnicodeString(static_cast<UChar32>(0x2019)), "'");
  u.findAndReplace(icu::UnicodeString(static_cast<UChar32>(0x2018)), "'");
  std::string out;
  u.toUTF8String(out);
  return out;
}

bool ContainsArabicScript(std::string_view text) {
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  for (int32_t i = 0; i < u.length();) {
    const UChar32 c = u.char32At(i);
    UErrorCode status = U_ZERO_ERROR;
    if (uscript_getScript(c, &status) == USCRIPT_ARABIC) return true;
    i += U16_LENGTH(c);
  }
  return false;
}

RefusalClassifier::RefusalClassifier()
    : RefusalClassifier(DefaultRefusalPatterns(), DefaultInabilityPhrases()) {}

RefusalClassifier::RefusalClassifier(std::vector<std::string> patterns,
                                     std::vector<std::string> inability_phrases)
    : patterns_(std::move(patterns)) {
  for (const auto& p : patterns_) folded_patterns_.push_back(FoldCase(p));
  for (const auto& p : inability_phrases) folded_phrases_.push_back(FoldCase(p));
}

bool RefusalClassifier::IsRefusal(std::string_view text) const {
  const std::string folded = FoldCase(text);
  for (const auto& p : folded_patterns_) {
    if (!p.empty() && folded.find(p) != std::string::npos) return true;
  }
  if (ContainsArabicScript(text)) return false;
  for (const auto& p : folded_phrases_) {
    if (!p.empty() && folded.find(p) != std::string::npos) return true;
  }
  return false;
}

}  // namespace newsocr::recognize
