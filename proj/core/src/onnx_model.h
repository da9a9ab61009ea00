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
#ifndef NEWSOCR_SRC_ONNX_MODEL_H_
#define NEWSOCR_SRC_ONNX_MODEL_H_

#include <filesystem>
#include <memory>
#include <vector>

namespace newsocr::internal {

struct Tensor {
  std::vector<int> shape;
  std::vector<float> values;
};

// Thin serialized wrapper around the OpenCV dnn importer. Errors from the
// runtime surface as ModelError naming the model file.
class OnnxModel {
 public:
  explicit OnnxModel(const std::filesystem::path& path);
  ~OnnxModel();
  OnnxModel(const OnnxModel&) = delete;
  OnnxModel& operator=(const OnnxModel&) = delete;

  Tensor Run(const Tensor& input) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace newsocr::internal

#endif  // NEWSOCR_SRC_ONNX_MODEL_H_
