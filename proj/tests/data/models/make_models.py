# Copyright 2026 The newsocr Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates the tiny ONNX models used by the NEURAL backend tests.

    python3 make_models.py

toy_detector.onnx: 1x3x640x640 -> [1, 6, 16]. The input is split into a
4x4 grid of 160 px cells; each cell proposes its own square as a candidate
(cx, cy, w, h in letterbox pixels) with class-0 score equal to the cell's
mean darkness (1 - mean value) and class-1 score 0.

nearest_x4.onnx: 1x3xHxW -> 1x3x4Hx4W nearest-neighbour upscaler, dynamic
spatial dims.
"""
import torch
from torch import nn

CELL = 160
SIZE = 640
GRID = SIZE // CELL


class ToyDetector(nn.Module):
    def __init__(self):
        super().__init__()
        self.pool = nn.AvgPool2d(CELL)
        self.cells = nn.Conv2d(3, 6, 1)
        w = torch.zeros(6, 3, 1, 1)
        w[4] = -1.0 / 3
        b = torch.zeros(6)
        b[4] = 1.0
        self.cells.weight.data = w
        self.cells.bias.data = b
        geometry = torch.zeros(1, 6, GRID * GRID)
        for gy in range(GRID):
            for gx in range(GRID):
                k = gy * GRID + gx
                geometry[0, 0, k] = gx * CELL + CELL / 2
                geometry[0, 1, k] = gy * CELL + CELL / 2
                geometry[0, 2, k] = CELL
                geometry[0, 3, k] = CELL
        self.register_buffer("geometry", geometry)

    def forward(self, x):
        return self.cells(self.pool(x)).flatten(2) + self.geometry


class NearestX4(nn.Module):
    def __init__(self):
        super().__init__()
        self.up = nn.ConvTranspose2d(3, 3, 4, stride=4, bias=False)
        w = torch.zeros(3, 3, 4, 4)
        for c in range(3):
            w[c, c] = 1.0
        self.up.weight.data = w

    def forward(self, x):
        return self.up(x)


def main():
    torch.onnx.export(ToyDetector(), torch.zeros(1, 3, SIZE, SIZE),
                      "toy_detector.onnx", opset_version=13,
                      input_names=["images"], output_names=["rows"],
                      dynamo=False)
    torch.onnx.export(NearestX4(), torch.zeros(1, 3, 16, 16), "nearest_x4.onnx",
                      opset_version=13, input_names=["lr"],
                      output_names=["sr"],
                      dynamic_axes={"lr": {2: "h", 3: "w"},
                                    "sr": {2: "H", 3: "W"}},
                      dynamo=False)


if __name__ == "__main__":
    main()
