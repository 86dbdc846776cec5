// Copyright 2026 The GLLC Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GLLC_IMAGE_H_
#define GLLC_IMAGE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "gllc/tensor.h"

namespace gllc {

// Interleaved 8-bit image, row-major.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 3;
  std::vector<uint8_t> pixels;

  Image() = default;
  Image(int w, int h, int c = 3)
      : width(w), height(h), channels(c),
        pixels(static_cast<size_t>(w) * h * c, 0) {}

  bool empty() const { return pixels.empty(); }
  uint8_t& at(int x, int y, int c) {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<size_t>(y) * width + x) * channels + c];
  }

  friend bool operator==(const Image&, const Image&) = default;
};

// PNG I/O; any input format is converted to 8-bit RGB. Throws IoError.
Image read_png(const std::string& path);
void write_png(const std::string& path, const Image& image);

// Replicate-pads width and height up to multiples of `multiple`.
Image pad_replicate(const Image& image, int multiple);
Image crop(const Image& image, int width, int height);

// X / 127.5 - 1 into a 1×C×H×W tensor.
Tensor normalize(const Image& image);
// round((x + 1) * 127.5) clamped to 0..255.
Image denormalize(const Tensor& x);

// Deterministic RGB test pattern: smooth gradients plus seeded noise.
Image synthetic_image(int width, int height, uint64_t seed);

}  // namespace gllc

#endif  // GLLC_IMAGE_H_
