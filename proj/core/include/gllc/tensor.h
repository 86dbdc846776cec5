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

#ifndef GLLC_TENSOR_H_
#define GLLC_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gllc {

// Dimensions of a 4-D NCHW array.
struct Shape {
  int n = 1;
  int c = 1;
  int h = 1;
  int w = 1;

  size_t size() const {
    return static_cast<size_t>(n) * c * h * w;
  }
  size_t plane() const { return static_cast<size_t>(h) * w; }
  bool valid() const { return n >= 1 && c >= 1 && h >= 1 && w >= 1; }
  std::string str() const;

  friend bool operator==(const Shape&, const Shape&) = default;
};

// Dense single-precision NCHW tensor, row-major.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape, float fill = 0.0f);
  Tensor(Shape shape, std::vector<float> data);

  const Shape& shape() const { return shape_; }
  size_t size() const { return data_.size(); }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  size_t index(int n, int c, int h, int w) const {
    return ((static_cast<size_t>(n) * shape_.c + c) * shape_.h + h) *
               shape_.w + w;
  }
  float& at(int n, int c, int h, int w) { return data_[index(n, c, h, w)]; }
  float at(int n, int c, int h, int w) const {
    return data_[index(n, c, h, w)];
  }

  // One H×W plane.
  std::span<float> plane(int n, int c) {
    return std::span<float>(data_).subspan(index(n, c, 0, 0), shape_.plane());
  }
  std::span<const float> plane(int n, int c) const {
    return std::span<const float>(data_).subspan(index(n, c, 0, 0),
                                                 shape_.plane());
  }

  bool all_finite() const;

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_{};
  std::vector<float> data_;
};

// Integer symbols (quantized latents), same NCHW layout as Tensor.
struct SymbolTensor {
  Shape shape{};
  std::vector<int32_t> data;

  SymbolTensor() = default;
  explicit SymbolTensor(Shape s) : shape(s), data(s.size(), 0) {}

  size_t index(int n, int c, int h, int w) const {
    return ((static_cast<size_t>(n) * shape.c + c) * shape.h + h) * shape.w +
           w;
  }
  int32_t& at(int n, int c, int h, int w) { return data[index(n, c, h, w)]; }
  int32_t at(int n, int c, int h, int w) const {
    return data[index(n, c, h, w)];
  }
  Tensor to_real() const;

  friend bool operator==(const SymbolTensor&, const SymbolTensor&) = default;
};

// 64-bit FNV-1a over the raw float bits; used for golden-output fixtures.
uint64_t content_hash(const Tensor& t);

}  // namespace gllc

#endif  // GLLC_TENSOR_H_
