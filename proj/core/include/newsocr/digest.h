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
#ifndef NEWSOCR_DIGEST_H_
#define NEWSOCR_DIGEST_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "newsocr/image.h"

namespace newsocr {

// Lowercase hex SHA-256.
std::string Sha256Hex(std::span<const std::uint8_t> bytes);
std::string Sha256Hex(std::string_view bytes);

// Digest of decoded pixel content: independent of the file encoding the
// image came from. Replay fixtures are keyed by this value.
std::string ImageDigest(const RasterImage& image);

std::string Base64Encode(std::span<const std::uint8_t> bytes);

}  // namespace newsocr

#endif  // NEWSOCR_DIGEST_H_
