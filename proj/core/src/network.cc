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

#include "gllc/network.h"

#include <algorithm>
#include <cmath>

#include "gllc/error.h"

namespace gllc {
namespace {

ConvSpec load_conv(const WeightStore& w, const std::string& name, int stride,
                   int padding, int output_padding = 0, bool mask_a = false) {
  ConvSpec spec;
  spec.kernel = w.get(name + ".weight");
  const Tensor& bias = w.get(name + ".bias");
  spec.bias.assign(bias.data().begin(), bias.data().end());
  if (spec.bias.size() != static_cast<size_t>(spec.out_channels())) {
    throw ConfigError("bias of " + name + " does not match its kernel");
  }
  spec.stride = stride;
  spec.padding = padding;
  spec.output_padding = output_padding;
  spec.mask_a = mask_a;
  return spec;
}

// 3×3, stride 2, pad 1: exact halving for even sizes.
ConvSpec load_down(const WeightStore& w, const std::string& name) {
  return load_conv(w, name, 2, 1);
}

// 3×3 transposed, stride 2, pad 1, output pad 1: exact doubling.
ConvSpec load_up(const WeightStore& w, const std::string& name) {
  return load_conv(w, name, 2, 1, 1);
}

void require_channels(const Tensor& x, int c, const char* what) {
  if (x.shape().c != c) {
    throw ShapeError(std::string(what) + " expects " + std::to_string(c) +
                     " channels, got " + std::to_string(x.shape().c));
  }
}

// Softmax over the entries of `logits` selected by `active`.
void masked_softmax(std::span<const double> logits, std::span<const bool> active,
                    std::span<double> out) {
  double mx = -INFINITY;
  for (size_t i = 0; i < logits.size(); ++i) {
    if (active[i]) mx = std::max(mx, logits[i]);
  }
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = active[i] ? std::exp(logits[i] - mx) : 0.0;
    sum += out[i];
  }
  for (double& v : out) v /= sum;
}

// Double-precision softplus, stable for large |v|.
double softplus_d(double v) {
  return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

void softmax(std::span<const double> logits, std::span<double> out) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
}

}  // namespace

GdnLayer GdnLayer::from_store(const WeightStore& w, const std::string& prefix,
                              bool inverse) {
  GdnLayer g;
  g.inverse = inverse;
  for (float v : w.get(prefix + ".beta").data()) g.beta.push_back(softplus(v) + kGdnFloor);
  for (float v : w.get(prefix + ".gamma").data()) g.gamma.push_back(softplus(v) + kGdnFloor);
  return g;
}

Tensor GdnLayer::forward(const Tensor& x) const {
  return gdn(x, beta, gamma, inverse);
}

ResidualBlock ResidualBlock::from_store(const WeightStore& w,
                                        const std::string& prefix) {
  return {load_conv(w, prefix + ".conv_a", 1, 1),
          load_conv(w, prefix + ".conv_b", 1, 1)};
}

Tensor ResidualBlock::branch(const Tensor& x) const {
  Tensor t = conv2d(x, conv_a);
  leaky_relu_inplace(t);
  t = conv2d(t, conv_b);
  leaky_relu_inplace(t);
  return t;
}

Tensor ResidualBlock::forward(const Tensor& x) const {
  return add(x, branch(x));
}

size_t ResidualBlock::parameter_count() const {
  return conv_a.parameter_count() + conv_b.parameter_count();
}

Crm Crm::from_store(const WeightStore& w, const std::string& prefix,
                    int stages) {
  if (stages != 2 && stages != 3) throw ConfigError("CRM stages must be 2 or 3");
  Crm crm;
  for (int k = 0; k < stages; ++k) {
    crm.blocks.push_back(
        ResidualBlock::from_store(w, prefix + ".rb" + std::to_string(k)));
  }
  return crm;
}

Tensor Crm::forward(const Tensor& x) const {
  Tensor h = x;
  Tensor branches(x.shape());
  for (const auto& rb : blocks) {
    Tensor r = rb.branch(h);
    h = add(h, r);
    branches = add(branches, r);
  }
  return add(x, branches);
}

size_t Crm::parameter_count() const {
  size_t n = 0;
  for (const auto& rb : blocks) n += rb.parameter_count();
  return n;
}

Attention Attention::from_store(const WeightStore& w,
                                const std::string& prefix) {
  return {ResidualBlock::from_store(w, prefix + ".trunk"),
          load_conv(w, prefix + ".trunk_out", 1, 0),
          ResidualBlock::from_store(w, prefix + ".mask"),
          load_conv(w, prefix + ".mask_out", 1, 0)};
}

Tensor Attention::trunk(const Tensor& x) const {
  return conv2d(trunk_block.forward(x), trunk_out);
}

Tensor Attention::mask_logits(const Tensor& x) const {
  return conv2d(mask_block.forward(x), mask_out);
}

Tensor Attention::forward(const Tensor& x) const {
  const Tensor t = trunk(x);
  const Tensor m = mask_logits(x);
  Tensor out = x;
  auto o = out.data();
  auto td = t.data();
  auto md = m.data();
  for (size_t i = 0; i < o.size(); ++i) o[i] += td[i] * sigmoid(md[i]);
  return out;
}

Tensor crm_forward(const Tensor& x, const WeightStore& w,
                   const std::string& prefix, int stages) {
  return Crm::from_store(w, prefix, stages).forward(x);
}

Tensor attention_forward(const Tensor& x, const WeightStore& w,
                         const std::string& prefix) {
  return Attention::from_store(w, prefix).forward(x);
}

Network::Network(const WeightStore& w, const ModelConfig& cfg) : cfg_(cfg) {
  w.validate(cfg);
  const int stages = cfg.crm_stages;
  for (int i = 0; i < 4; ++i) ga_conv_.push_back(load_down(w, "ga.conv" + std::to_string(i)));
  for (int i = 0; i < 3; ++i) {
    ga_gdn_.push_back(GdnLayer::from_store(w, "ga.gdn" + std::to_string(i), false));
    ga_crm_.push_back(Crm::from_store(w, "ga.crm" + std::to_string(i), stages));
  }
  for (int i = 0; i < 2; ++i) ga_attn_.push_back(Attention::from_store(w, "ga.attn" + std::to_string(i)));

  for (int i = 0; i < 4; ++i) gs_conv_.push_back(load_up(w, "gs.tconv" + std::to_string(i)));
  for (int i = 0; i < 3; ++i) {
    gs_gdn_.push_back(GdnLayer::from_store(w, "gs.igdn" + std::to_string(i), true));
    gs_crm_.push_back(Crm::from_store(w, "gs.crm" + std::to_string(i), stages));
  }
  for (int i = 0; i < 2; ++i) gs_attn_.push_back(Attention::from_store(w, "gs.attn" + std::to_string(i)));

  ha_conv_ = {load_down(w, "ha.conv0"), load_down(w, "ha.conv1")};
  hs_conv_ = {load_up(w, "hs.tconv0"), load_up(w, "hs.tconv1")};
  context_conv_ = load_conv(w, "cm.conv", 1, 2, 0, true);
  for (int i = 0; i < 3; ++i) {
    head_conv_.push_back(load_conv(w, "head.conv" + std::to_string(i), 1, 0));
  }
}

Tensor Network::analysis(const Tensor& x) const {
  require_channels(x, 3, "analysis transform");
  const Shape& s = x.shape();
  if (s.h % 16 != 0 || s.w % 16 != 0) {
    throw ShapeError("analysis transform needs dims divisible by 16, got " + s.str());
  }
  Tensor t = ga_gdn_[0].forward(conv2d(x, ga_conv_[0]));
  t = ga_crm_[0].forward(t);
  t = ga_attn_[0].forward(t);
  t = ga_gdn_[1].forward(conv2d(t, ga_conv_[1]));
  t = ga_crm_[1].forward(t);
  t = ga_gdn_[2].forward(conv2d(t, ga_conv_[2]));
  t = ga_crm_[2].forward(t);
  t = ga_attn_[1].forward(t);
  return conv2d(t, ga_conv_[3]);
}

Tensor Network::synthesis(const Tensor& y_hat) const {
  require_channels(y_hat, cfg_.latent_channels, "synthesis transform");
  Tensor t = gs_gdn_[0].forward(tconv2d(y_hat, gs_conv_[0]));
  t = gs_attn_[0].forward(t);
  t = gs_crm_[0].forward(t);
  t = gs_gdn_[1].forward(tconv2d(t, gs_conv_[1]));
  t = gs_crm_[1].forward(t);
  t = gs_gdn_[2].forward(tconv2d(t, gs_conv_[2]));
  t = gs_attn_[1].forward(t);
  t = gs_crm_[2].forward(t);
  return tconv2d(t, gs_conv_[3]);
}

Tensor Network::hyper_analysis(const Tensor& y) const {
  require_channels(y, cfg_.latent_channels, "hyper analysis");
  if (y.shape().h % 4 != 0 || y.shape().w % 4 != 0) {
    throw ShapeError("hyper analysis needs latent dims divisible by 4");
  }
  Tensor t = conv2d(y, ha_conv_[0]);
  leaky_relu_inplace(t);
  return conv2d(t, ha_conv_[1]);
}

Tensor Network::hyper_synthesis(const Tensor& z_hat) const {
  require_channels(z_hat, cfg_.hyper_channels, "hyper synthesis");
  Tensor t = tconv2d(z_hat, hs_conv_[0]);
  leaky_relu_inplace(t);
  return tconv2d(t, hs_conv_[1]);
}

Tensor Network::context(const Tensor& y_hat) const {
  require_channels(y_hat, cfg_.latent_channels, "context model");
  const Shape& s = y_hat.shape();
  Tensor out({s.n, 2 * cfg_.latent_channels, s.h, s.w});
  std::vector<float> site(2 * cfg_.latent_channels);
  for (int n = 0; n < s.n; ++n) {
    for (int h = 0; h < s.h; ++h) {
      for (int w = 0; w < s.w; ++w) {
        context_site(y_hat, n, h, w, site);
        for (size_t c = 0; c < site.size(); ++c) {
          out.at(n, static_cast<int>(c), h, w) = site[c];
        }
      }
    }
  }
  return out;
}

void Network::context_site(const Tensor& y_hat, int n, int h, int w,
                           std::span<float> out) const {
  conv2d_site(y_hat, context_conv_, n, h, w, out);
}

void Network::head_site(std::span<const float> ctx,
                        std::span<const float> hyper,
                        std::span<float> out) const {
  const size_t half = 2 * cfg_.latent_channels;
  if (ctx.size() != half || hyper.size() != half) {
    throw ShapeError("entropy head expects 2*C_y context and hyper features");
  }
  std::vector<float> in(2 * half);
  std::copy(ctx.begin(), ctx.end(), in.begin());
  std::copy(hyper.begin(), hyper.end(), in.begin() + half);
  std::vector<float> h0(head_conv_[0].out_channels());
  std::vector<float> h1(head_conv_[1].out_channels());
  pointwise(head_conv_[0], in, h0);
  for (float& v : h0) v = v >= 0.0f ? v : kLeakySlope * v;
  pointwise(head_conv_[1], h0, h1);
  for (float& v : h1) v = v >= 0.0f ? v : kLeakySlope * v;
  pointwise(head_conv_[2], h1, out);
}

// Raw head layout is parameter-major: parameter j of latent channel c sits at
// j * C_y + c. Per channel: 3 family logits, then for each family its weight
// logits, means and raw scales.
void Network::site_params(std::span<const float> raw,
                          std::span<GllmmParams> out) const {
  const int cy = cfg_.latent_channels;
  if (raw.size() != head_output_channels() || out.size() != static_cast<size_t>(cy)) {
    throw ShapeError("site_params buffer size mismatch");
  }
  const FamilyCounts& counts = cfg_.mixture;
  const bool active[kNumFamilies] = {counts.gaussian > 0, counts.laplacian > 0,
                                     counts.logistic > 0};
  auto at = [&](int j, int c) { return static_cast<double>(raw[static_cast<size_t>(j) * cy + c]); };
  std::vector<double> logits, weights;
  for (int c = 0; c < cy; ++c) {
    GllmmParams& p = out[c];
    double fl[kNumFamilies];
    for (int f = 0; f < kNumFamilies; ++f) fl[f] = at(f, c);
    masked_softmax(fl, active, p.family_prob);
    int base = 3;
    for (int f = 0; f < kNumFamilies; ++f) {
      const int k = counts[f];
      auto& comps = p.components[f];
      comps.resize(k);
      if (k == 0) continue;
      logits.resize(k);
      weights.resize(k);
      for (int j = 0; j < k; ++j) logits[j] = at(base + j, c);
      softmax(logits, weights);
      for (int j = 0; j < k; ++j) {
        comps[j].weight = weights[j];
        comps[j].mean = at(base + k + j, c);
        comps[j].scale = softplus_d(at(base + 2 * k + j, c)) + 1e-9;
      }
      base += 3 * k;
    }
  }
}

GllmmField Network::entropy_parameters(const Tensor& ctx,
                                       const Tensor& hyper) const {
  const int cy = cfg_.latent_channels;
  require_channels(ctx, 2 * cy, "entropy parameters (context)");
  require_channels(hyper, 2 * cy, "entropy parameters (hyper)");
  const Shape& s = ctx.shape();
  if (hyper.shape() != s) {
    throw ShapeError("context and hyper features are not aligned: " +
                     s.str() + " vs " + hyper.shape().str());
  }
  GllmmField field;
  field.shape = {s.n, cy, s.h, s.w};
  field.params.resize(field.shape.size());
  std::vector<float> c_site(2 * cy), h_site(2 * cy), raw(head_output_channels());
  std::vector<GllmmParams> site(cy);
  for (int n = 0; n < s.n; ++n) {
    for (int h = 0; h < s.h; ++h) {
      for (int w = 0; w < s.w; ++w) {
        for (int c = 0; c < 2 * cy; ++c) {
          c_site[c] = ctx.at(n, c, h, w);
          h_site[c] = hyper.at(n, c, h, w);
        }
        head_site(c_site, h_site, raw);
        site_params(raw, site);
        for (int c = 0; c < cy; ++c) {
          field.params[((static_cast<size_t>(n) * cy + c) * s.h + h) * s.w + w] = site[c];
        }
      }
    }
  }
  return field;
}

Tensor analysis_transform(const Tensor& x, const WeightStore& w,
                          const ModelConfig& cfg) {
  return Network(w, cfg).analysis(x);
}

Tensor synthesis_transform(const Tensor& y_hat, const WeightStore& w,
                           const ModelConfig& cfg) {
  return Network(w, cfg).synthesis(y_hat);
}

Tensor hyper_analysis(const Tensor& y, const WeightStore& w,
                      const ModelConfig& cfg) {
  return Network(w, cfg).hyper_analysis(y);
}

Tensor hyper_synthesis(const Tensor& z_hat, const WeightStore& w,
                       const ModelConfig& cfg) {
  return Network(w, cfg).hyper_synthesis(z_hat);
}

Tensor context_model(const Tensor& y_hat, const WeightStore& w,
                     const ModelConfig& cfg) {
  return Network(w, cfg).context(y_hat);
}

GllmmField entropy_parameters(const Tensor& ctx, const Tensor& hyper,
                              const WeightStore& w, const ModelConfig& cfg) {
  return Network(w, cfg).entropy_parameters(ctx, hyper);
}

}  // namespace gllc
