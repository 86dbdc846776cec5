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

#ifndef GLLC_WEIGHTS_H_
#define GLLC_WEIGHTS_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gllc/model_config.h"
#include "gllc/tensor.h"

namespace gllc {

// What a named tensor holds; selects the initializer.
enum class ParamKind {
  kConvWeight,
  kBias,
  kGdnBeta,   // raw, effective = softplus(raw) + floor
  kGdnGamma,  // raw, effective = softplus(raw) + floor
  kFactorizedKnots,
};

struct ParamSpec {
  std::string name;
  Shape shape;
  ParamKind kind;
  // Conv weights: std = gain / sqrt(fan_in) under init_random.
  float gain = 1.0f;
  // Conv weights: taps counted in fan_in (mask A uses fewer).
  int active_taps = 0;
};

// Every tensor the network graph reads for `cfg`, in a stable order.
std::vector<ParamSpec> weight_schema(const ModelConfig& cfg);

// Named tensors plus the fingerprint of the config they were built for.
// Immutable in normal use; mutation is allowed for tools that refit parts
// (e.g. the factorized hyper model) before saving.
class WeightStore {
 public:
  WeightStore() = default;
  explicit WeightStore(uint64_t fingerprint) : fingerprint_(fingerprint) {}

  uint64_t fingerprint() const { return fingerprint_; }

  bool contains(const std::string& name) const;
  // Throws ConfigError when the name is missing.
  const Tensor& get(const std::string& name) const;
  void set(const std::string& name, Tensor t);

  const std::map<std::string, Tensor>& tensors() const { return tensors_; }
  size_t parameter_count() const;

  // Throws ConfigError on missing/extra names, wrong dims or a fingerprint
  // that does not match `cfg`.
  void validate(const ModelConfig& cfg) const;

  friend bool operator==(const WeightStore&, const WeightStore&) = default;

 private:
  uint64_t fingerprint_ = 0;
  std::map<std::string, Tensor> tensors_;
};

// Deterministic in (cfg, seed).
WeightStore init_random(const ModelConfig& cfg, uint64_t seed);
// Every tensor zero except the factorized knots, which stay a valid CDF.
WeightStore init_zero(const ModelConfig& cfg);

// GLWS container, see README for the layout.
std::vector<uint8_t> serialize_weights(const WeightStore& w);
WeightStore parse_weights(std::span<const uint8_t> bytes);
void save_weights(const WeightStore& w, const std::string& path);
WeightStore load_weights(const std::string& path);
// load_weights followed by validate(cfg).
WeightStore load_weights(const std::string& path, const ModelConfig& cfg);

}  // namespace gllc

#endif  // GLLC_WEIGHTS_H_
