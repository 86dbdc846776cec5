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

#include "gllc/weights.h"

#include <cmath>
#include <cstring>
#include <set>

#include "gllc/bytes.h"
#include "gllc/entropy.h"
#include "gllc/error.h"
#include "gllc/nn.h"
#include "rng.h"

namespace gllc {
namespace {

constexpr char kMagic[4] = {'G', 'L', 'W', 'S'};
constexpr uint16_t kVersion = 1;
constexpr uint8_t kDtypeReal32 = 0;

class SchemaBuilder {
 public:
  explicit SchemaBuilder(std::vector<ParamSpec>& out) : out_(out) {}

  void conv(const std::string& name, int out, int in, int k, float gain,
            int active_taps = 0) {
    out_.push_back({name + ".weight", {out, in, k, k}, ParamKind::kConvWeight,
                    gain, active_taps > 0 ? active_taps : k * k});
    out_.push_back({name + ".bias", {1, out, 1, 1}, ParamKind::kBias});
  }
  void gdn(const std::string& name, int c) {
    out_.push_back({name + ".beta", {1, c, 1, 1}, ParamKind::kGdnBeta});
    out_.push_back({name + ".gamma", {1, 1, c, c}, ParamKind::kGdnGamma});
  }
  void residual_block(const std::string& name, int c) {
    conv(name + ".conv_a", c, c, 3, 1.4f);
    conv(name + ".conv_b", c, c, 3, 0.3f);
  }
  void crm(const std::string& name, int c, int stages) {
    for (int k = 0; k < stages; ++k) residual_block(name + ".rb" + std::to_string(k), c);
  }
  void attention(const std::string& name, int c) {
    residual_block(name + ".trunk", c);
    conv(name + ".trunk_out", c, c, 1, 0.5f);
    residual_block(name + ".mask", c);
    conv(name + ".mask_out", c, c, 1, 1.0f);
  }

 private:
  std::vector<ParamSpec>& out_;
};

uint64_t name_hash(const std::string& s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Discretized zero-mean logistic prior used before any hyper fit.
FactorizedModel default_factorized(const ModelConfig& cfg) {
  const Alphabet a = cfg.z_alphabet;
  const uint32_t total = 1u << FactorizedModel::kKnotBits;
  std::vector<double> pmf(a.size());
  for (int s = a.min; s <= a.max; ++s) {
    const double lo = s == a.min ? -INFINITY : s - 0.5;
    const double hi = s == a.max ? INFINITY : s + 0.5;
    pmf[s - a.min] = family_interval(Family::kLogistic, lo, hi, 0.0, 1.0);
  }
  std::vector<uint32_t> freq(a.size(), 1);
  uint32_t rest = total - a.size();
  uint32_t assigned = 0;
  for (size_t i = 0; i < pmf.size(); ++i) {
    freq[i] += static_cast<uint32_t>(std::floor(pmf[i] * rest));
    assigned += freq[i];
  }
  freq[a.contains(0) ? -a.min : 0] += total - assigned;
  return FactorizedModel::from_frequencies(
      a, std::vector<std::vector<uint32_t>>(cfg.hyper_channels, freq));
}

}  // namespace

std::vector<ParamSpec> weight_schema(const ModelConfig& cfg) {
  cfg.validate();
  const int cy = cfg.latent_channels;
  const int cz = cfg.hyper_channels;
  std::vector<ParamSpec> specs;
  SchemaBuilder b(specs);

  b.conv("ga.conv0", cy, 3, 3, 1.0f);
  b.gdn("ga.gdn0", cy);
  b.crm("ga.crm0", cy, cfg.crm_stages);
  b.attention("ga.attn0", cy);
  b.conv("ga.conv1", cy, cy, 3, 1.0f);
  b.gdn("ga.gdn1", cy);
  b.crm("ga.crm1", cy, cfg.crm_stages);
  b.conv("ga.conv2", cy, cy, 3, 1.0f);
  b.gdn("ga.gdn2", cy);
  b.crm("ga.crm2", cy, cfg.crm_stages);
  b.attention("ga.attn1", cy);
  b.conv("ga.conv3", cy, cy, 3, 4.0f);

  // Transposed kernels scatter each input into roughly k*k/stride^2 outputs.
  b.conv("gs.tconv0", cy, cy, 3, 2.0f);
  b.gdn("gs.igdn0", cy);
  b.attention("gs.attn0", cy);
  b.crm("gs.crm0", cy, cfg.crm_stages);
  b.conv("gs.tconv1", cy, cy, 3, 2.0f);
  b.gdn("gs.igdn1", cy);
  b.crm("gs.crm1", cy, cfg.crm_stages);
  b.conv("gs.tconv2", cy, cy, 3, 2.0f);
  b.gdn("gs.igdn2", cy);
  b.attention("gs.attn1", cy);
  b.crm("gs.crm2", cy, cfg.crm_stages);
  b.conv("gs.tconv3", 3, cy, 3, 1.0f);

  b.conv("ha.conv0", cz, cy, 3, 1.4f);
  b.conv("ha.conv1", cz, cz, 3, 1.0f);
  b.conv("hs.tconv0", cy, cz, 3, 2.0f);
  b.conv("hs.tconv1", 2 * cy, cy, 3, 2.0f);

  // Mask A on 5x5 keeps 12 taps.
  b.conv("cm.conv", 2 * cy, cy, 5, 1.0f, 12);
  b.conv("head.conv0", 4 * cy, 4 * cy, 1, 1.4f);
  b.conv("head.conv1", 4 * cy, 4 * cy, 1, 1.4f);
  b.conv("head.conv2", cfg.params_per_channel() * cy, 4 * cy, 1, 1.0f);

  specs.push_back({"factorized.knots", {1, cz, 1, cfg.z_alphabet.size() + 1},
                   ParamKind::kFactorizedKnots});
  return specs;
}

bool WeightStore::contains(const std::string& name) const {
  return tensors_.count(name) != 0;
}

const Tensor& WeightStore::get(const std::string& name) const {
  auto it = tensors_.find(name);
  if (it == tensors_.end()) throw ConfigError("missing weight tensor " + name);
  return it->second;
}

void WeightStore::set(const std::string& name, Tensor t) {
  tensors_[name] = std::move(t);
}

size_t WeightStore::parameter_count() const {
  size_t n = 0;
  for (const auto& [name, t] : tensors_) n += t.size();
  return n;
}

void WeightStore::validate(const ModelConfig& cfg) const {
  if (fingerprint_ != cfg.fingerprint()) {
    throw ConfigError("weight fingerprint does not match model config");
  }
  const auto schema = weight_schema(cfg);
  std::set<std::string> expected;
  for (const auto& spec : schema) {
    expected.insert(spec.name);
    auto it = tensors_.find(spec.name);
    if (it == tensors_.end()) {
      throw ConfigError("missing weight tensor " + spec.name);
    }
    if (it->second.shape() != spec.shape) {
      throw ConfigError("weight tensor " + spec.name + " has dims " +
                        it->second.shape().str() + ", expected " +
                        spec.shape.str());
    }
    if (!it->second.all_finite()) {
      throw ConfigError("weight tensor " + spec.name + " is not finite");
    }
  }
  for (const auto& [name, t] : tensors_) {
    if (!expected.count(name)) throw ConfigError("unexpected weight tensor " + name);
  }
  // Throws if the stored knots are not a valid CDF.
  FactorizedModel::from_tensor(get("factorized.knots"), cfg.z_alphabet);
}

WeightStore init_random(const ModelConfig& cfg, uint64_t seed) {
  WeightStore w(cfg.fingerprint());
  const float beta_raw = softplus_inverse(1.0f - kGdnFloor);
  const float gamma_diag = softplus_inverse(0.1f);
  const float gamma_off = -15.0f;
  for (const auto& spec : weight_schema(cfg)) {
    Tensor t(spec.shape);
    auto d = t.data();
    switch (spec.kind) {
      case ParamKind::kConvWeight: {
        Rng rng(seed ^ name_hash(spec.name));
        const double fan_in = static_cast<double>(spec.shape.c) * spec.active_taps;
        const double std = spec.gain / std::sqrt(fan_in);
        for (float& v : d) v = static_cast<float>(std * rng.normal());
        break;
      }
      case ParamKind::kBias:
        break;
      case ParamKind::kGdnBeta:
        std::fill(d.begin(), d.end(), beta_raw);
        break;
      case ParamKind::kGdnGamma: {
        const int c = spec.shape.w;
        for (int i = 0; i < c; ++i) {
          for (int j = 0; j < c; ++j) d[i * c + j] = i == j ? gamma_diag : gamma_off;
        }
        break;
      }
      case ParamKind::kFactorizedKnots:
        t = default_factorized(cfg).to_tensor();
        break;
    }
    w.set(spec.name, std::move(t));
  }
  return w;
}

WeightStore init_zero(const ModelConfig& cfg) {
  WeightStore w(cfg.fingerprint());
  for (const auto& spec : weight_schema(cfg)) {
    if (spec.kind == ParamKind::kFactorizedKnots) {
      w.set(spec.name,
            FactorizedModel::uniform(cfg.hyper_channels, cfg.z_alphabet).to_tensor());
    } else {
      w.set(spec.name, Tensor(spec.shape));
    }
  }
  return w;
}

std::vector<uint8_t> serialize_weights(const WeightStore& w) {
  ByteWriter out;
  out.bytes({reinterpret_cast<const uint8_t*>(kMagic), 4});
  out.u16(kVersion);
  out.u64(w.fingerprint());
  out.u32(static_cast<uint32_t>(w.tensors().size()));
  for (const auto& [name, t] : w.tensors()) {
    if (name.size() > UINT16_MAX) throw FormatError("tensor name too long");
    out.u16(static_cast<uint16_t>(name.size()));
    out.str(name);
    out.u8(kDtypeReal32);
    out.u8(4);
    const Shape& s = t.shape();
    for (int d : {s.n, s.c, s.h, s.w}) out.u32(static_cast<uint32_t>(d));
    for (float v : t.data()) out.f32(v);
  }
  out.u32(crc32(out.buffer()));
  return out.take();
}

WeightStore parse_weights(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 + 2 + 8 + 4 + 4) throw FormatError("weight file too short");
  const auto body = bytes.first(bytes.size() - 4);
  ByteReader tail(bytes.last(4));
  if (crc32(body) != tail.u32()) throw FormatError("weight file CRC mismatch");

  ByteReader in(body);
  if (std::memcmp(in.bytes(4).data(), kMagic, 4) != 0) {
    throw FormatError("not a GLWS weight file");
  }
  const uint16_t version = in.u16();
  if (version != kVersion) {
    throw FormatError("unsupported weight file version " + std::to_string(version));
  }
  WeightStore w(in.u64());
  const uint32_t count = in.u32();
  for (uint32_t i = 0; i < count; ++i) {
    const std::string name = in.str(in.u16());
    if (in.u8() != kDtypeReal32) throw FormatError("unsupported dtype for " + name);
    const int ndim = in.u8();
    if (ndim < 1 || ndim > 4) throw FormatError("bad rank for " + name);
    int dims[4] = {1, 1, 1, 1};
    for (int d = 4 - ndim; d < 4; ++d) {
      const uint32_t v = in.u32();
      if (v == 0 || v > (1u << 28)) throw FormatError("bad dims for " + name);
      dims[d] = static_cast<int>(v);
    }
    const Shape shape{dims[0], dims[1], dims[2], dims[3]};
    if (shape.size() * 4 > in.remaining()) throw FormatError("truncated tensor " + name);
    std::vector<float> data(shape.size());
    for (float& v : data) v = in.f32();
    if (w.contains(name)) throw FormatError("duplicate tensor " + name);
    w.set(name, Tensor(shape, std::move(data)));
  }
  if (in.remaining() != 0) throw FormatError("trailing bytes in weight file");
  return w;
}

void save_weights(const WeightStore& w, const std::string& path) {
  write_file(path, serialize_weights(w));
}

WeightStore load_weights(const std::string& path) {
  return parse_weights(read_file(path));
}

WeightStore load_weights(const std::string& path, const ModelConfig& cfg) {
  WeightStore w = load_weights(path);
  w.validate(cfg);
  return w;
}

}  // namespace gllc
