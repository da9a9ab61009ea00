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
#include "newsocr/transport.h"

#include <httplib.h>

namespace newsocr {

SplitUrlResult SplitUrl(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("URL needs a scheme: '" + url + "'");
  }
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "https" && scheme != "http") {
    throw ConfigError("unsupported URL scheme '" + scheme + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrlResult r;
  if (path_start == std::string::npos) {
    r.origin = url;
    r.path = "/";
  } else {
    r.origin = url.substr(0, path_start);
    r.path = url.substr(path_start);
  }
  if (r.origin.size() <= scheme_end + 3) throw ConfigError("URL has no host: '" + url + "'");
  return r;
}

HttpResponse HttpsTransport::Post(const HttpRequest& request) {
  const SplitUrlResult target = SplitUrl(request.url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(std::chrono::seconds(30));
  client.set_read_timeout(request.timeout);
  client.set_write_timeout(request.timeout);
  httplib::Headers headers;
  std::string content_type = "application/json";
  for (const auto& [k, v] : request.headers) {
    if (k == "Content-Type") {
      content_type = v;
    } else {
      headers.emplace(k, v);
    }
  }
  auto result = client.Post(target.path, headers, request.body, content_type);
  if (!result) {
    throw TransportError("POST " + target.origin + target.path + " failed: " +
                         httplib::to_string(result.error()));
  }
  return {result->status, result->body};
}

}  // namespace newsocr
