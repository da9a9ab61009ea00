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
#ifndef NEWSOCR_TRANSPORT_H_
#define NEWSOCR_TRANSPORT_H_

#include <chrono>
#include <string>
#include <utility>
#include <vector>

#include "newsocr/error.h"

namespace newsocr {

struct HttpRequest {
  std::string url;  // absolute, https:// or http://
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::seconds timeout{120};
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Connection-level failure: DNS, TLS, timeouts, resets.
class TransportError : public Error {
 public:
  using Error::Error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws TransportError when no HTTP response was received.
  virtual HttpResponse Post(const HttpRequest& request) = 0;
};

struct SplitUrlResult {
  std::string origin;  // scheme://host[:port]
  std::string path;    // begins with '/'
};
SplitUrlResult SplitUrl(const std::string& url);

// Blocking HTTPS client; one connection per request.
class HttpsTransport : public Transport {
 public:
  HttpResponse Post(const HttpRequest& request) override;
};

}  // namespace newsocr

#endif  // NEWSOCR_TRANSPORT_H_
