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
#include "onnx_model.h"

#include <mutex>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/core/utils/logger.hpp>
#include <opencv2/dnn.hpp>

#include "newsocr/error.h"

namespace newsocr::internal {

struct OnnxModel::Impl {
  std::string name;
  cv::dnn::Net net;
  std::mutex mu;
};

OnnxModel::OnnxModel(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>()) {
  // Runtime failures are rethrown as ModelError; the library's own log line
  // would only duplicate them on stderr.
  static std::once_flag quiet;
  std::call_once(quiet, [] {
    cv::utils::logging::setLogLevel(cv::utils::logging::LOG_LEVEL_SILENT);
  });
  impl_->name = path.string();
  if (!std::filesystem::is_regular_file(path)) {
    throw ModelError("model file not found: " + impl_->name);
  }
  try {
    impl_->net = cv::dnn::readNetFromONNX(impl_->name);
  } catch (const cv::Exception& e) {
    throw ModelError("cannot load model " + impl_->name + ": " + e.what());
  }
  if (impl_->net.empty()) throw ModelError("empty model " + impl_->name);
  impl_->net.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
  impl_->net.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
}

OnnxModel::~OnnxModel() = default;

Tensor OnnxModel::Run(const Tensor& input) const {
  std::vector<int> shape = input.shape;
  cv::Mat blob(static_cast<int>(shape.size()), shape.data(), CV_32F);
  if (blob.total() != input.values.size()) {
    throw ModelError("input tensor size does not match its shape");
  }
  std::copy(input.values.begin(), input.values.end(), blob.ptr<float>());
  cv::Mat out;
  {
    std::lock_guard<std::mutex> lock(impl_->mu);
    try {
      impl_->net.setInput(blob);
      out = impl_->net.forward().clone();
    } catch (const cv::Exception& e) {
      std::string dims;
      for (int d : shape) dims += (dims.empty() ? "" : "x") + std::to_string(d);
      throw ModelError("model " + impl_->name + " rejected input " + dims +
                       ": " + e.what());
    }
  }
  if (out.type() != CV_32F) {
    throw ModelError("model " + impl_->name + " produced a non-float output");
  }
  Tensor result;
  for (int i = 0; i < out.dims; ++i) result.shape.push_back(out.size[i]);
  const float* p = out.ptr<float>();
  result.values.assign(p, p + out.total());
  return result;
}

}  // namespace newsocr::internal
