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
#include "newsocr/boxes.h"

#include <cmath>
#include <sstream>

#include "newsocr/error.h"

namespace newsocr {

BoundingBox BoundingBox::Make(double x_min, double y_min, double x_max,
                              double y_max) {
  BoundingBox b{x_min, y_min, x_max, y_max};
  if (!b.IsValid()) {
    std::ostringstream msg;
    msg << "invalid box (" << x_min << ", " << y_min << ", " << x_max << ", "
        << y_max << "): need finite corners with min < max";
    throw ValidationError(msg.str());
  }
  return b;
}

bool BoundingBox::IsValid() const {
  return std::isfinite(x_min) && std::isfinite(y_min) &&
         std::isfinite(x_max) && std::isfinite(y_max) && x_min < x_max &&
         y_min < y_max;
}

}  // namespace newsocr
