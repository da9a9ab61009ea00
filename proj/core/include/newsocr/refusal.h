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
#ifndef NEWSOCR_REFUSAL_H_
#define NEWSOCR_REFUSAL_H_

#include <string>
#include <string_view>
#include <vector>

namespace newsocr::recognize {

// Refusal messages seen from vision LLMs asked to transcribe Urdu scans.
const std::vector<std::string>& DefaultRefusalPatterns();
// First-person inability phrases used by the script heuristic.
const std::vector<std::string>& DefaultInabilityPhrases();

// A response is a refusal when it contains any pattern (case-insensitive
// substring), or when it contains no Arabic-script codepoint and contains an
// inability phrase.
class RefusalClassifier {
 public:
  RefusalClassifier();
  RefusalClassifier(std::vector<std::string> patterns,
                    std::vector<std::string> inability_phrases);

  bool IsRefusal(std::string_view text) const;

  const std::vector<std::string>& patterns() const { return patterns_; }

 private:
  std::vector<std::string> patterns_;
  std::vector<std::string> folded_patterns_;
  std::vector<std::string> folded_phrases_;
};

// Unicode case folding with typographic apostrophes mapped to ASCII.
std::string FoldCase(std::string_view text);
bool ContainsArabicScript(std::string_view text);

}  // namespace newsocr::recognize

#endif  // NEWSOCR_REFUSAL_H_
