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

#include "gllc/nn.h"

#include <algorithm>
#include <cmath>

#include "gllc/error.h"

namespace gllc {
namespace {

// Output channels accumulated together so each input load is reused.
constexpr int kOcBlock = 4;
constexpr int kTileW = 4;

void check_conv(const Tensor& x, const ConvSpec& spec) {
  const Shape& k = spec.kernel.shape();
  if (!k.valid()) throw ShapeError("conv kernel has invalid shape");
  if (k.c != x.shape().c) {
    throw ShapeError("conv expects " + std::to_string(k.c) +
                     " input channels, got " + std::to_string(x.shape().c));
  }
  if (spec.bias.size() != static_cast<size_t>(k.n)) {
    throw ShapeError("conv bias length does not match output channels");
  }
  if (spec.stride < 1) throw ShapeError("conv stride must be >= 1");
  if (spec.padding < 0 || spec.output_padding < 0) {
    throw ShapeError("conv padding must be non-negative");
  }
  if (spec.mask_a && (k.h % 2 == 0 || k.w % 2 == 0)) {
    throw ShapeError("masked conv requires an odd kernel");
  }
}

// One image of x converted to double with a zero border of `pad`.
std::vector<double> padded_input(const Tensor& x, int n, int pad) {
  const Shape& s = x.shape();
  const int hp = s.h + 2 * pad;
  const int wp = s.w + 2 * pad;
  std::vector<double> buf(static_cast<size_t>(s.c) * hp * wp, 0.0);
  for (int c = 0; c < s.c; ++c) {
    auto src = x.plane(n, c);
    double* dst = buf.data() + static_cast<size_t>(c) * hp * wp;
    for (int y = 0; y < s.h; ++y) {
      const float* row = src.data() + static_cast<size_t>(y) * s.w;
      double* out = dst + static_cast<size_t>(y + pad) * wp + pad;
      for (int xx = 0; xx < s.w; ++xx) out[xx] = row[xx];
    }
  }
  return buf;
}

}  // namespace

bool ConvSpec::tap_active(int ky, int kx) const {
  if (!mask_a) return true;
  const int cy = kernel_h() / 2;
  const int cx = kernel_w() / 2;
  return ky < cy || (ky == cy && kx < cx);
}

int conv_output_size(int in, int kernel, int stride, int padding) {
  const int span = in + 2 * padding - kernel;
  if (span < 0) return 0;
  return span / stride + 1;
}

int tconv_output_size(int in, int kernel, int stride, int padding,
                      int output_padding) {
  return (in - 1) * stride - 2 * padding + kernel + output_padding;
}

// Output tile of NX columns by NO channels accumulated in registers over the
// active taps. Each element sums bias, then taps in (ic, ky, kx) order.
template <int NO, int NX>
void conv_tile(const double* base, std::span<const size_t> tap_off,
               const double* wpack, int s, const float* bias, int nb, int nx,
               float* out, size_t out_plane) {
  double a[NX][NO];
  for (int j = 0; j < NX; ++j) {
    for (int b = 0; b < NO; ++b) a[j][b] = b < nb ? bias[b] : 0.0;
  }
  if (nb == NO && nx == NX) {
    for (size_t t = 0; t < tap_off.size(); ++t) {
      const double* r = base + tap_off[t];
      const double* w = wpack + t * NO;
      for (int j = 0; j < NX; ++j) {
        const double v = r[j * s];
        for (int b = 0; b < NO; ++b) a[j][b] += w[b] * v;
      }
    }
  } else {
    for (size_t t = 0; t < tap_off.size(); ++t) {
      const double* r = base + tap_off[t];
      const double* w = wpack + t * NO;
      for (int j = 0; j < nx; ++j) {
        const double v = r[j * s];
        for (int b = 0; b < nb; ++b) a[j][b] += w[b] * v;
      }
    }
  }
  for (int b = 0; b < nb; ++b) {
    for (int j = 0; j < nx; ++j) out[b * out_plane + j] = static_cast<float>(a[j][b]);
  }
}

Tensor conv2d(const Tensor& x, const ConvSpec& spec) {
  check_conv(x, spec);
  const Shape& xs = x.shape();
  const int oc_n = spec.out_channels();
  const int kh = spec.kernel_h(), kw = spec.kernel_w();
  const int s = spec.stride, p = spec.padding;
  const int oh = conv_output_size(xs.h, kh, s, p);
  const int ow = conv_output_size(xs.w, kw, s, p);
  if (oh < 1 || ow < 1) {
    throw ShapeError("conv output would be empty for input " + xs.str());
  }
  Tensor out({xs.n, oc_n, oh, ow});
  const int hp = xs.h + 2 * p, wp = xs.w + 2 * p;
  const size_t in_plane = static_cast<size_t>(hp) * wp;
  const size_t out_plane = static_cast<size_t>(oh) * ow;
  const auto kernel = spec.kernel.data();

  // Active taps in (ic, ky, kx) order: input offsets and kernel indices.
  std::vector<size_t> tap_off, tap_idx;
  for (int ic = 0; ic < xs.c; ++ic) {
    for (int ky = 0; ky < kh; ++ky) {
      for (int kx = 0; kx < kw; ++kx) {
        if (!spec.tap_active(ky, kx)) continue;
        tap_off.push_back(ic * in_plane + static_cast<size_t>(ky) * wp + kx);
        tap_idx.push_back((static_cast<size_t>(ic) * kh + ky) * kw + kx);
      }
    }
  }
  const size_t per_oc = static_cast<size_t>(xs.c) * kh * kw;
  std::vector<double> wpack(tap_off.size() * kOcBlock);
  for (int n = 0; n < xs.n; ++n) {
    const std::vector<double> xp = padded_input(x, n, p);
    for (int oc0 = 0; oc0 < oc_n; oc0 += kOcBlock) {
      const int nb = std::min(kOcBlock, oc_n - oc0);
      std::fill(wpack.begin(), wpack.end(), 0.0);
      for (size_t t = 0; t < tap_idx.size(); ++t) {
        for (int b = 0; b < nb; ++b) {
          wpack[t * kOcBlock + b] = kernel[(oc0 + b) * per_oc + tap_idx[t]];
        }
      }
      float* dst = out.plane(n, oc0).data();
      for (int oy = 0; oy < oh; ++oy) {
        const double* row = xp.data() + static_cast<size_t>(oy) * s * wp;
        for (int ox = 0; ox < ow; ox += kTileW) {
          conv_tile<kOcBlock, kTileW>(row + static_cast<size_t>(ox) * s,
                                      tap_off, wpack.data(), s,
                                      spec.bias.data() + oc0, nb,
                                      std::min(kTileW, ow - ox),
                                      dst + static_cast<size_t>(oy) * ow + ox,
                                      out_plane);
        }
      }
    }
  }
  return out;
}

void conv2d_site(const Tensor& x, const ConvSpec& spec, int n, int oy, int ox,
                 std::span<float> out) {
  check_conv(x, spec);
  const Shape& xs = x.shape();
  const int kh = spec.kernel_h(), kw = spec.kernel_w();
  const int s = spec.stride, p = spec.padding;
  if (out.size() != static_cast<size_t>(spec.out_channels())) {
    throw ShapeError("conv2d_site output span has wrong length");
  }
  if (oy < 0 || ox < 0 || oy >= conv_output_size(xs.h, kh, s, p) ||
      ox >= conv_output_size(xs.w, kw, s, p)) {
    throw ShapeError("conv2d_site position out of range");
  }
  const auto kernel = spec.kernel.data();
  // Same term order as conv2d, including the zero-padding products.
  for (int oc = 0; oc < spec.out_channels(); ++oc) {
    double acc = spec.bias[oc];
    for (int ic = 0; ic < xs.c; ++ic) {
      auto plane = x.plane(n, ic);
      for (int ky = 0; ky < kh; ++ky) {
        const int iy = oy * s + ky - p;
        for (int kx = 0; kx < kw; ++kx) {
          if (!spec.tap_active(ky, kx)) continue;
          const int ix = ox * s + kx - p;
          double v = 0.0;
          if (iy >= 0 && iy < xs.h && ix >= 0 && ix < xs.w) {
            v = plane[static_cast<size_t>(iy) * xs.w + ix];
          }
          const double wv =
              kernel[((static_cast<size_t>(oc) * xs.c + ic) * kh + ky) * kw +
                     kx];
          acc += wv * v;
        }
      }
    }
    out[oc] = static_cast<float>(acc);
  }
}

void pointwise(const ConvSpec& spec, std::span<const float> in,
               std::span<float> out) {
  if (spec.kernel_h() != 1 || spec.kernel_w() != 1) {
    throw ShapeError("pointwise requires a 1x1 kernel");
  }
  const size_t ic_n = spec.in_channels();
  if (in.size() != ic_n ||
      out.size() != static_cast<size_t>(spec.out_channels())) {
    throw ShapeError("pointwise channel mismatch");
  }
  const auto kernel = spec.kernel.data();
  for (int oc = 0; oc < spec.out_channels(); ++oc) {
    double acc = spec.bias[oc];
    const float* wrow = kernel.data() + oc * ic_n;
    for (size_t ic = 0; ic < ic_n; ++ic) {
      acc += static_cast<double>(wrow[ic]) * static_cast<double>(in[ic]);
    }
    out[oc] = static_cast<float>(acc);
  }
}

Tensor tconv2d(const Tensor& x, const ConvSpec& spec) {
  check_conv(x, spec);
  if (spec.mask_a) throw ShapeError("masked transposed conv is not supported");
  const Shape& xs = x.shape();
  const int oc_n = spec.out_channels();
  const int kh = spec.kernel_h(), kw = spec.kernel_w();
  const int s = spec.stride, p = spec.padding;
  const int oh = tconv_output_size(xs.h, kh, s, p, spec.output_padding);
  const int ow = tconv_output_size(xs.w, kw, s, p, spec.output_padding);
  if (oh < 1 || ow < 1) {
    throw ShapeError("tconv output would be empty for input " + xs.str());
  }
  Tensor out({xs.n, oc_n, oh, ow});
  const size_t out_plane = static_cast<size_t>(oh) * ow;
  const auto kernel = spec.kernel.data();

  std::vector<double> acc(kOcBlock * out_plane);
  std::vector<double> xin(xs.plane());
  for (int n = 0; n < xs.n; ++n) {
    for (int oc0 = 0; oc0 < oc_n; oc0 += kOcBlock) {
      const int nb = std::min(kOcBlock, oc_n - oc0);
      for (int b = 0; b < nb; ++b) {
        std::fill_n(acc.data() + b * out_plane, out_plane,
                    static_cast<double>(spec.bias[oc0 + b]));
      }
      for (int ic = 0; ic < xs.c; ++ic) {
        auto src = x.plane(n, ic);
        std::copy(src.begin(), src.end(), xin.begin());
        for (int ky = 0; ky < kh; ++ky) {
          for (int kx = 0; kx < kw; ++kx) {
            double wv[kOcBlock] = {0, 0, 0, 0};
            for (int b = 0; b < nb; ++b) {
              wv[b] = kernel[((static_cast<size_t>(oc0 + b) * xs.c + ic) * kh +
                              ky) * kw + kx];
            }
            // Input column range whose outputs land inside [0, ow).
            int ix_lo = 0;
            while (ix_lo < xs.w && ix_lo * s - p + kx < 0) ++ix_lo;
            int ix_hi = xs.w;
            while (ix_hi > ix_lo && (ix_hi - 1) * s - p + kx >= ow) --ix_hi;
            for (int iy = 0; iy < xs.h; ++iy) {
              const int oy = iy * s - p + ky;
              if (oy < 0 || oy >= oh) continue;
              const double* row = xin.data() + static_cast<size_t>(iy) * xs.w;
              for (int b = 0; b < nb; ++b) {
                double* arow =
                    acc.data() + b * out_plane + static_cast<size_t>(oy) * ow;
                const double w = wv[b];
                for (int ix = ix_lo; ix < ix_hi; ++ix) {
                  arow[ix * s - p + kx] += w * row[ix];
                }
              }
            }
          }
        }
      }
      for (int b = 0; b < nb; ++b) {
        auto dst = out.plane(n, oc0 + b);
        const double* src = acc.data() + b * out_plane;
        for (size_t i = 0; i < out_plane; ++i) dst[i] = static_cast<float>(src[i]);
      }
    }
  }
  return out;
}

Tensor leaky_relu(const Tensor& x, float slope) {
  Tensor y = x;
  leaky_relu_inplace(y, slope);
  return y;
}

void leaky_relu_inplace(Tensor& x, float slope) {
  if (!(slope > 0.0f && slope < 1.0f)) {
    throw ParamError("leaky relu slope must be in (0, 1)");
  }
  for (float& v : x.data()) v = v >= 0.0f ? v : slope * v;
}

Tensor gdn(const Tensor& x, std::span<const float> beta,
           std::span<const float> gamma, bool inverse) {
  const Shape& s = x.shape();
  const size_t c_n = s.c;
  if (beta.size() != c_n || gamma.size() != c_n * c_n) {
    throw ShapeError("gdn parameters do not match " + std::to_string(c_n) +
                     " channels");
  }
  for (float b : beta) {
    if (!(b > 0.0f)) throw ParamError("gdn beta must be positive");
  }
  for (float g : gamma) {
    if (!(g >= 0.0f)) throw ParamError("gdn gamma must be non-negative");
  }
  Tensor y(s);
  const size_t plane = s.plane();
  std::vector<double> sq(c_n * plane);
  std::vector<double> norm(plane);
  for (int n = 0; n < s.n; ++n) {
    for (size_t j = 0; j < c_n; ++j) {
      auto src = x.plane(n, static_cast<int>(j));
      for (size_t k = 0; k < plane; ++k) {
        const double v = src[k];
        sq[j * plane + k] = v * v;
      }
    }
    for (size_t i = 0; i < c_n; ++i) {
      std::fill(norm.begin(), norm.end(), static_cast<double>(beta[i]));
      for (size_t j = 0; j < c_n; ++j) {
        const double g = gamma[i * c_n + j];
        if (g == 0.0) continue;
        const double* sj = sq.data() + j * plane;
        for (size_t k = 0; k < plane; ++k) norm[k] += g * sj[k];
      }
      auto src = x.plane(n, static_cast<int>(i));
      auto dst = y.plane(n, static_cast<int>(i));
      for (size_t k = 0; k < plane; ++k) {
        const double r = std::sqrt(norm[k]);
        dst[k] = static_cast<float>(inverse ? src[k] * r : src[k] / r);
      }
    }
  }
  return y;
}

Tensor add(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("add shape mismatch " + a.shape().str() + " vs " +
                     b.shape().str());
  }
  Tensor out = a;
  auto o = out.data();
  auto bd = b.data();
  for (size_t i = 0; i < o.size(); ++i) o[i] += bd[i];
  return out;
}

float softplus(float v) {
  if (v > 20.0f) return v;
  if (v < -20.0f) return std::exp(v);
  return std::log1p(std::exp(v));
}

float softplus_inverse(float v) {
  if (!(v > 0.0f)) throw ParamError("softplus_inverse requires v > 0");
  if (v > 20.0f) return v;
  return std::log(std::expm1(v));
}

float sigmoid(float v) {
  return 1.0f / (1.0f + std::exp(-v));
}

}  // namespace gllc
