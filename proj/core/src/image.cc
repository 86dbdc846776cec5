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

#include "gllc/image.h"

#include <png.h>

#include <algorithm>
#include <cmath>

#include "gllc/error.h"
#include "rng.h"

namespace gllc {

Image read_png(const std::string& path) {
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&img, path.c_str())) {
    throw IoError("cannot read PNG " + path + ": " + img.message);
  }
  img.format = PNG_FORMAT_RGB;
  Image out(static_cast<int>(img.width), static_cast<int>(img.height), 3);
  if (!png_image_finish_read(&img, nullptr, out.pixels.data(), 0, nullptr)) {
    const std::string msg = img.message;
    png_image_free(&img);
    throw IoError("cannot decode PNG " + path + ": " + msg);
  }
  return out;
}

void write_png(const std::string& path, const Image& image) {
  if (image.channels != 3 && image.channels != 1) {
    throw IoError("PNG output supports 1 or 3 channels");
  }
  png_image img{};
  img.version = PNG_IMAGE_VERSION;
  img.width = static_cast<png_uint_32>(image.width);
  img.height = static_cast<png_uint_32>(image.height);
  img.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&img, path.c_str(), 0, image.pixels.data(), 0,
                               nullptr)) {
    throw IoError("cannot write PNG " + path + ": " + img.message);
  }
}

Image pad_replicate(const Image& image, int multiple) {
  if (image.empty()) throw ShapeError("cannot pad an empty image");
  const int w = (image.width + multiple - 1) / multiple * multiple;
  const int h = (image.height + multiple - 1) / multiple * multiple;
  Image out(w, h, image.channels);
  for (int y = 0; y < h; ++y) {
    const int sy = std::min(y, image.height - 1);
    for (int x = 0; x < w; ++x) {
      const int sx = std::min(x, image.width - 1);
      for (int c = 0; c < image.channels; ++c) out.at(x, y, c) = image.at(sx, sy, c);
    }
  }
  return out;
}

Image crop(const Image& image, int width, int height) {
  if (width > image.width || height > image.height || width < 1 || height < 1) {
    throw ShapeError("crop " + std::to_string(width) + "x" +
                     std::to_string(height) + " exceeds image");
  }
  Image out(width, height, image.channels);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int c = 0; c < image.channels; ++c) out.at(x, y, c) = image.at(x, y, c);
    }
  }
  return out;
}

Tensor normalize(const Image& image) {
  Tensor t({1, image.channels, image.height, image.width});
  for (int c = 0; c < image.channels; ++c) {
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) {
        t.at(0, c, y, x) = static_cast<float>(image.at(x, y, c) / 127.5 - 1.0);
      }
    }
  }
  return t;
}

Image denormalize(const Tensor& x) {
  const Shape& s = x.shape();
  if (s.n != 1) throw ShapeError("denormalize expects batch 1, got " + s.str());
  Image out(s.w, s.h, s.c);
  for (int c = 0; c < s.c; ++c) {
    for (int y = 0; y < s.h; ++y) {
      for (int xx = 0; xx < s.w; ++xx) {
        const double v = std::round((x.at(0, c, y, xx) + 1.0) * 127.5);
        out.at(xx, y, c) = static_cast<uint8_t>(std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 255.0));
      }
    }
  }
  return out;
}

Image synthetic_image(int width, int height, uint64_t seed) {
  Rng rng(seed);
  Image out(width, height, 3);
  const double fx = rng.uniform(1.0, 3.0), fy = rng.uniform(1.0, 3.0);
  const double ph = rng.uniform(0.0, 6.28);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = static_cast<double>(x) / width;
      const double v = static_cast<double>(y) / height;
      for (int c = 0; c < 3; ++c) {
        const double base = 128.0 + 70.0 * std::sin(fx * 6.28 * u + ph + c) *
                                        std::cos(fy * 6.28 * v - c);
        const double val = base + 40.0 * (u - v) + 8.0 * rng.normal();
        out.at(x, y, c) = static_cast<uint8_t>(std::clamp(std::round(val), 0.0, 255.0));
      }
    }
  }
  return out;
}

}  // namespace gllc
