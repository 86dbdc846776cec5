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

#include "gllc/metrics.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "gllc/error.h"

namespace gllc {
namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kK1 = 0.01;
constexpr double kK2 = 0.03;
constexpr double kMaxVal = 255.0;
constexpr std::array<double, 5> kScaleWeights = {0.0448, 0.2856, 0.3001,
                                                 0.2363, 0.1333};

struct Plane {
  int w = 0;
  int h = 0;
  std::vector<double> v;
  double at(int x, int y) const { return v[static_cast<size_t>(y) * w + x]; }
};

void check_pair(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw ShapeError("image dimensions differ");
  }
  if (a.empty()) throw ShapeError("empty image");
}

std::array<double, kWindow> gaussian_window() {
  std::array<double, kWindow> g{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    const double d = i - (kWindow - 1) / 2.0;
    g[i] = std::exp(-0.5 * d * d / (kSigma * kSigma));
    sum += g[i];
  }
  for (double& v : g) v /= sum;
  return g;
}

// Separable VALID filtering with the Gaussian window.
Plane filter(const Plane& p) {
  static const auto g = gaussian_window();
  const int ow = p.w - kWindow + 1, oh = p.h - kWindow + 1;
  Plane rows{ow, p.h, std::vector<double>(static_cast<size_t>(ow) * p.h)};
  for (int y = 0; y < p.h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * p.at(x + k, y);
      rows.v[static_cast<size_t>(y) * ow + x] = s;
    }
  }
  Plane out{ow, oh, std::vector<double>(static_cast<size_t>(ow) * oh)};
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int k = 0; k < kWindow; ++k) s += g[k] * rows.at(x, y + k);
      out.v[static_cast<size_t>(y) * ow + x] = s;
    }
  }
  return out;
}

Plane product(const Plane& a, const Plane& b) {
  Plane out{a.w, a.h, a.v};
  for (size_t i = 0; i < out.v.size(); ++i) out.v[i] *= b.v[i];
  return out;
}

// Mean SSIM and mean contrast-structure term.
std::pair<double, double> ssim_cs(const Plane& x, const Plane& y) {
  const double c1 = (kK1 * kMaxVal) * (kK1 * kMaxVal);
  const double c2 = (kK2 * kMaxVal) * (kK2 * kMaxVal);
  const Plane mx = filter(x), my = filter(y);
  const Plane xx = filter(product(x, x)), yy = filter(product(y, y));
  const Plane xy = filter(product(x, y));
  double ssim = 0.0, cs = 0.0;
  for (size_t i = 0; i < mx.v.size(); ++i) {
    const double num0 = 2.0 * mx.v[i] * my.v[i];
    const double den0 = mx.v[i] * mx.v[i] + my.v[i] * my.v[i];
    const double lum = (num0 + c1) / (den0 + c1);
    const double c = (2.0 * xy.v[i] - num0 + c2) / (xx.v[i] + yy.v[i] - den0 + c2);
    ssim += lum * c;
    cs += c;
  }
  const double n = static_cast<double>(mx.v.size());
  return {ssim / n, cs / n};
}

// 2×2 average pooling; odd sizes are first extended by mirroring the last
// row/column.
Plane downsample(const Plane& p) {
  const int pw = p.w + (p.w & 1), ph = p.h + (p.h & 1);
  auto src = [&](int x, int y) {
    return p.at(std::min(x, p.w - 1), std::min(y, p.h - 1));
  };
  Plane out{pw / 2, ph / 2, {}};
  out.v.resize(static_cast<size_t>(out.w) * out.h);
  for (int y = 0; y < out.h; ++y) {
    for (int x = 0; x < out.w; ++x) {
      out.v[static_cast<size_t>(y) * out.w + x] =
          0.25 * (src(2 * x, 2 * y) + src(2 * x + 1, 2 * y) +
                  src(2 * x, 2 * y + 1) + src(2 * x + 1, 2 * y + 1));
    }
  }
  return out;
}

Plane channel(const Image& im, int c) {
  Plane p{im.width, im.height, std::vector<double>(static_cast<size_t>(im.width) * im.height)};
  for (int y = 0; y < im.height; ++y) {
    for (int x = 0; x < im.width; ++x) p.v[static_cast<size_t>(y) * im.width + x] = im.at(x, y, c);
  }
  return p;
}

}  // namespace

double mse(const Image& a, const Image& b) {
  check_pair(a, b);
  double s = 0.0;
  for (size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = static_cast<double>(a.pixels[i]) - b.pixels[i];
    s += d * d;
  }
  return s / static_cast<double>(a.pixels.size());
}

double psnr(const Image& a, const Image& b) {
  const double m = mse(a, b);
  if (m == 0.0) return kDbCap;
  return std::min(kDbCap, 10.0 * std::log10(kMaxVal * kMaxVal / m));
}

int ms_ssim_scales(int width, int height) {
  int scales = 0;
  int dim = std::min(width, height);
  while (scales < static_cast<int>(kScaleWeights.size()) && dim >= kWindow) {
    ++scales;
    dim = (dim + 1) / 2;
  }
  return scales;
}

double ms_ssim(const Image& a, const Image& b) {
  check_pair(a, b);
  const int scales = ms_ssim_scales(a.width, a.height);
  if (scales == 0) {
    throw ShapeError("image smaller than the " + std::to_string(kWindow) +
                     "x" + std::to_string(kWindow) + " SSIM window");
  }
  double wsum = 0.0;
  for (int s = 0; s < scales; ++s) wsum += kScaleWeights[s];
  double total = 0.0;
  for (int c = 0; c < a.channels; ++c) {
    Plane x = channel(a, c), y = channel(b, c);
    double value = 1.0;
    for (int s = 0; s < scales; ++s) {
      if (s > 0) {
        x = downsample(x);
        y = downsample(y);
      }
      const auto [ssim, cs] = ssim_cs(x, y);
      const double term = std::max(0.0, s + 1 == scales ? ssim : cs);
      value *= std::pow(term, kScaleWeights[s] / wsum);
    }
    total += value;
  }
  return total / a.channels;
}

double msssim_db(double msssim) {
  if (msssim >= 1.0) return kDbCap;
  return std::min(kDbCap, -10.0 * std::log10(1.0 - msssim));
}

}  // namespace gllc
