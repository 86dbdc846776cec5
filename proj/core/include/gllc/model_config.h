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

#ifndef GLLC_MODEL_CONFIG_H_
#define GLLC_MODEL_CONFIG_H_

#include <cstdint>
#include <string>

namespace gllc {

// Component counts of the Gaussian, Laplacian and logistic families.
struct FamilyCounts {
  int gaussian = 3;
  int laplacian = 3;
  int logistic = 3;

  int total() const { return gaussian + laplacian + logistic; }
  int operator[](int family) const {
    return family == 0 ? gaussian : family == 1 ? laplacian : logistic;
  }
  friend bool operator==(const FamilyCounts&, const FamilyCounts&) = default;
};

struct Alphabet {
  int min = -128;
  int max = 127;

  int size() const { return max - min + 1; }
  bool contains(int v) const { return v >= min && v <= max; }
  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

struct ModelConfig {
  int latent_channels = 128;
  int hyper_channels = 128;
  FamilyCounts mixture{};
  int crm_stages = 2;
  Alphabet y_alphabet{};
  Alphabet z_alphabet{};
  double lambda = 0.015;

  // Channels emitted by the entropy-parameter head per latent channel:
  // three family logits plus (weight logit, mean, raw scale) per component.
  int params_per_channel() const { return 3 + 3 * mixture.total(); }

  // Throws ConfigError on any violated invariant.
  void validate() const;
  // 64-bit FNV-1a over a canonical little-endian encoding of every field.
  uint64_t fingerprint() const;

  std::string to_json() const;
  static ModelConfig from_json(const std::string& text);
  static ModelConfig load(const std::string& path);
  void save(const std::string& path) const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace gllc

#endif  // GLLC_MODEL_CONFIG_H_
