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

#ifndef GLLC_NN_H_
#define GLLC_NN_H_

#include <span>
#include <vector>

#include "gllc/tensor.h"

namespace gllc {

inline constexpr float kLeakySlope = 0.01f;
// Positivity floor applied to reparameterized GDN beta/gamma.
inline constexpr float kGdnFloor = 1e-6f;

// Convolution parameters. `kernel` is laid out (out_ch, in_ch, kh, kw) and
// `bias` has out_ch entries. For transposed convolution the same layout is
// used: out_ch is the number of produced channels.
struct ConvSpec {
  Tensor kernel;
  std::vector<float> bias;
  int stride = 1;
  int padding = 0;
  // Extra rows/cols appended to a transposed convolution's output.
  int output_padding = 0;
  // Mask A: the kernel center and every raster-later tap are excluded.
  bool mask_a = false;

  int out_channels() const { return kernel.shape().n; }
  int in_channels() const { return kernel.shape().c; }
  int kernel_h() const { return kernel.shape().h; }
  int kernel_w() const { return kernel.shape().w; }
  // True when tap (ky, kx) participates in the sum.
  bool tap_active(int ky, int kx) const;
  size_t parameter_count() const { return kernel.size() + bias.size(); }
};

int conv_output_size(int in, int kernel, int stride, int padding);
int tconv_output_size(int in, int kernel, int stride, int padding,
                      int output_padding);

Tensor conv2d(const Tensor& x, const ConvSpec& spec);

// Output of conv2d at a single spatial site, all output channels, written to
// `out` (size out_ch). Bit-identical to the corresponding entries of conv2d.
void conv2d_site(const Tensor& x, const ConvSpec& spec, int n, int oy, int ox,
                 std::span<float> out);

// 1×1 convolution applied to one channel vector; `in` has in_ch entries.
void pointwise(const ConvSpec& spec, std::span<const float> in,
               std::span<float> out);

Tensor tconv2d(const Tensor& x, const ConvSpec& spec);

Tensor leaky_relu(const Tensor& x, float slope = kLeakySlope);
void leaky_relu_inplace(Tensor& x, float slope = kLeakySlope);

// Generalized divisive normalization over channels at each site:
//   forward  y_i = x_i / sqrt(beta_i + sum_j gamma_ij x_j^2)
//   inverse  y_i = x_i * sqrt(beta_i + sum_j gamma_ij x_j^2)
// `gamma` is row-major C×C (gamma[i*C + j]). Throws ParamError unless
// beta_i > 0 and gamma_ij >= 0.
Tensor gdn(const Tensor& x, std::span<const float> beta,
           std::span<const float> gamma, bool inverse);

Tensor add(const Tensor& a, const Tensor& b);

float softplus(float v);
// Inverse of softplus for v > 0.
float softplus_inverse(float v);
float sigmoid(float v);

}  // namespace gllc

#endif  // GLLC_NN_H_
