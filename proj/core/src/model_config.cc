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

#include "gllc/model_config.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "gllc/error.h"
#include "json.hpp"

namespace gllc {

using nlohmann::json;

void ModelConfig::validate() const {
  if (latent_channels != 128 && latent_channels != 256) {
    throw ConfigError("latent_channels must be 128 or 256, got " +
                      std::to_string(latent_channels));
  }
  if (hyper_channels < 1) throw ConfigError("hyper_channels must be >= 1");
  if (mixture.gaussian < 0 || mixture.laplacian < 0 || mixture.logistic < 0 ||
      mixture.total() < 1) {
    throw ConfigError("mixture counts must be non-negative with K+M+N >= 1");
  }
  if (crm_stages != 2 && crm_stages != 3) {
    throw ConfigError("crm_stages must be 2 or 3");
  }
  for (const Alphabet* a : {&y_alphabet, &z_alphabet}) {
    if (a->min >= a->max) throw ConfigError("alphabet requires min < max");
    if (a->min < INT16_MIN || a->max > INT16_MAX) {
      throw ConfigError("alphabet bounds must fit in 16 bits");
    }
  }
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be non-negative");
}

uint64_t ModelConfig::fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 0x100000001b3ull;
    }
  };
  auto mix_i32 = [&](int v) { mix(static_cast<uint32_t>(v), 4); };
  mix_i32(latent_channels);
  mix_i32(hyper_channels);
  mix_i32(mixture.gaussian);
  mix_i32(mixture.laplacian);
  mix_i32(mixture.logistic);
  mix_i32(crm_stages);
  mix_i32(y_alphabet.min);
  mix_i32(y_alphabet.max);
  mix_i32(z_alphabet.min);
  mix_i32(z_alphabet.max);
  uint64_t bits;
  std::memcpy(&bits, &lambda, sizeof(bits));
  mix(bits, 8);
  return h;
}

std::string ModelConfig::to_json() const {
  json j;
  j["latent_channels"] = latent_channels;
  j["hyper_channels"] = hyper_channels;
  j["mixture"] = {{"K", mixture.gaussian},
                  {"M", mixture.laplacian},
                  {"N", mixture.logistic}};
  j["crm_stages"] = crm_stages;
  j["y_alphabet"] = {y_alphabet.min, y_alphabet.max};
  j["z_alphabet"] = {z_alphabet.min, z_alphabet.max};
  j["lambda"] = lambda;
  return j.dump(2);
}

ModelConfig ModelConfig::from_json(const std::string& text) {
  ModelConfig cfg;
  try {
    const json j = json::parse(text);
    cfg.latent_channels = j.value("latent_channels", cfg.latent_channels);
    cfg.hyper_channels = j.value("hyper_channels", cfg.latent_channels);
    if (j.contains("mixture")) {
      const json& m = j["mixture"];
      cfg.mixture.gaussian = m.value("K", cfg.mixture.gaussian);
      cfg.mixture.laplacian = m.value("M", cfg.mixture.laplacian);
      cfg.mixture.logistic = m.value("N", cfg.mixture.logistic);
    }
    cfg.crm_stages = j.value("crm_stages", cfg.crm_stages);
    if (j.contains("y_alphabet")) {
      cfg.y_alphabet = {j["y_alphabet"].at(0).get<int>(),
                        j["y_alphabet"].at(1).get<int>()};
    }
    if (j.contains("z_alphabet")) {
      cfg.z_alphabet = {j["z_alphabet"].at(0).get<int>(),
                        j["z_alphabet"].at(1).get<int>()};
    }
    cfg.lambda = j.value("lambda", cfg.lambda);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad model config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ModelConfig ModelConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

void ModelConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot create " + path);
  out << to_json() << "\n";
}

}  // namespace gllc
