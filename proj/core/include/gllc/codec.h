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

#ifndef GLLC_CODEC_H_
#define GLLC_CODEC_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gllc/image.h"
#include "gllc/model_config.h"
#include "gllc/range_coder.h"
#include "gllc/tensor.h"
#include "gllc/weights.h"

namespace gllc {

inline constexpr uint8_t kBitstreamVersion = 1;
// g_a downsamples by 16 and h_a by a further 4.
inline constexpr int kPadMultiple = 64;

// Parsed GLLC container.
struct Bitstream {
  uint32_t width = 0;
  uint32_t height = 0;
  uint8_t channels = 3;
  uint64_t fingerprint = 0;
  Alphabet y_alphabet{};
  Alphabet z_alphabet{};
  std::vector<uint8_t> z_payload;
  std::vector<uint8_t> y_payload;

  std::vector<uint8_t> serialize() const;
  // Throws FormatError on bad magic/version, length mismatch or CRC failure.
  static Bitstream parse(std::span<const uint8_t> bytes);
};

// Called once per coded latent element with the table used to code it.
// `site` is the raster index h * W + w of the latent grid.
using TableObserver =
    std::function<void(int site, int channel, const CdfTable& table)>;

struct CompressResult {
  std::vector<uint8_t> bytes;
  SymbolTensor y_hat;
  SymbolTensor z_hat;
  double estimated_y_bits = 0.0;
  double estimated_z_bits = 0.0;
  size_t clamped = 0;
  double bpp = 0.0;
  std::vector<std::string> warnings;
};

struct DecompressResult {
  Image image;
  SymbolTensor y_hat;
  SymbolTensor z_hat;
};

// Latent tensor shapes for a given original image size.
Shape latent_shape(const ModelConfig& cfg, int width, int height);
Shape hyper_latent_shape(const ModelConfig& cfg, int width, int height);

CompressResult compress(const Image& image, const WeightStore& w,
                        const ModelConfig& cfg,
                        const TableObserver& observer = {});

// Entropy-codes given latents without running g_a/h_a. `width`/`height` are
// the original image size recorded in the header.
CompressResult encode_latents(const SymbolTensor& y_hat,
                              const SymbolTensor& z_hat, int width, int height,
                              const WeightStore& w, const ModelConfig& cfg,
                              const TableObserver& observer = {});

DecompressResult decompress(std::span<const uint8_t> bytes,
                            const WeightStore& w, const ModelConfig& cfg,
                            const TableObserver& observer = {});

// Decodes latents only, without g_s.
DecompressResult decode_latents(std::span<const uint8_t> bytes,
                                const WeightStore& w, const ModelConfig& cfg,
                                const TableObserver& observer = {});

}  // namespace gllc

#endif  // GLLC_CODEC_H_
