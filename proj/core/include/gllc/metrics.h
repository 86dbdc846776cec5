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

#ifndef GLLC_METRICS_H_
#define GLLC_METRICS_H_

#include "gllc/image.h"

namespace gllc {

inline constexpr double kDbCap = 100.0;

double mse(const Image& a, const Image& b);
// 10 log10(255^2 / MSE), capped at 100 dB.
double psnr(const Image& a, const Image& b);

// Five-scale MS-SSIM with an 11×11 Gaussian window (sigma 1.5), K1 = 0.01,
// K2 = 0.03 and the standard scale weights, computed per channel and
// averaged. Images too small for five scales use fewer, with the weights
// renormalized.
double ms_ssim(const Image& a, const Image& b);
// Scales used for an image of the given size.
int ms_ssim_scales(int width, int height);

// -10 log10(1 - msssim), capped at 100 dB.
double msssim_db(double msssim);

}  // namespace gllc

#endif  // GLLC_METRICS_H_
