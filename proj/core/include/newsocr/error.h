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
#ifndef NEWSOCR_ERROR_H_
#define NEWSOCR_ERROR_H_

#include <stdexcept>
#include <string>

namespace newsocr {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, int line, const std::string& what);

  const std::string& source() const { return source_; }
  int line() const { return line_; }

 private:
  std::string source_;
  int line_;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Bad configuration or usage. The CLI maps this to exit status 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A replay backend was asked for a digest it has no record of.
class FixtureMissError : public Error {
 public:
  FixtureMissError(const std::string& kind, const std::string& digest);

  const std::string& digest() const { return digest_; }

 private:
  std::string digest_;
};

// Model file could not be loaded or its tensors do not fit the config.
class ModelError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace newsocr

#endif  // NEWSOCR_ERROR_H_
