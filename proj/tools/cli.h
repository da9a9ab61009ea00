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
#ifndef NEWSOCR_TOOLS_CLI_H_
#define NEWSOCR_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace newsocr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSampleFailures = 1;
inline constexpr int kExitUsage = 2;

// Runs one invocation. `args` excludes the program name; machine output
// requested with --stdout goes to `out`, diagnostics go to stderr.
int Run(const std::vector<std::string>& args, std::ostream& out);

}  // namespace newsocr::cli

#endif  // NEWSOCR_TOOLS_CLI_H_
