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

#ifndef GLLC_NETWORK_H_
#define GLLC_NETWORK_H_

#include <span>
#include <string>
#include <vector>

#include "gllc/entropy.h"
#include "gllc/model_config.h"
#include "gllc/nn.h"
#include "gllc/tensor.h"
#include "gllc/weights.h"

namespace gllc {

// Reparameterized GDN/IGDN layer.
struct GdnLayer {
  std::vector<float> beta;
  std::vector<float> gamma;
  bool inverse = false;

  static GdnLayer from_store(const WeightStore& w, const std::string& prefix,
                             bool inverse);
  Tensor forward(const Tensor& x) const;
};

// x + lrelu(conv_b(lrelu(conv_a(x)))), both 3×3 stride 1.
struct ResidualBlock {
  ConvSpec conv_a;
  ConvSpec conv_b;

  static ResidualBlock from_store(const WeightStore& w,
                                  const std::string& prefix);
  // The residual branch alone.
  Tensor branch(const Tensor& x) const;
  Tensor forward(const Tensor& x) const;
  size_t parameter_count() const;
};

// Concatenated residual module: `stages` residual blocks in series and an
// outer shortcut. The output is x + sum_k r_k(h_{k-1}), with h_0 = x,
// h_k = h_{k-1} + r_k(h_{k-1}), so every branch zero gives exactly x.
struct Crm {
  std::vector<ResidualBlock> blocks;

  static Crm from_store(const WeightStore& w, const std::string& prefix,
                        int stages);
  Tensor forward(const Tensor& x) const;
  size_t parameter_count() const;
};

// Simplified attention: x + trunk(x) * sigmoid(mask(x)), where each branch is
// a residual block followed by a 1×1 convolution.
struct Attention {
  ResidualBlock trunk_block;
  ConvSpec trunk_out;
  ResidualBlock mask_block;
  ConvSpec mask_out;

  static Attention from_store(const WeightStore& w, const std::string& prefix);
  Tensor trunk(const Tensor& x) const;
  Tensor mask_logits(const Tensor& x) const;
  Tensor forward(const Tensor& x) const;
};

Tensor crm_forward(const Tensor& x, const WeightStore& w,
                   const std::string& prefix, int stages);
Tensor attention_forward(const Tensor& x, const WeightStore& w,
                         const std::string& prefix);

// Forward-only graphs of the codec built once from a validated WeightStore.
//
//   g_a: conv↓+GDN, CRM, attn, conv↓+GDN, CRM, conv↓+GDN, CRM, attn, conv↓
//   g_s: tconv↑+IGDN, attn, CRM, tconv↑+IGDN, CRM, tconv↑+IGDN, attn, CRM,
//        tconv↑
//   h_a: conv↓, lrelu, conv↓          h_s: tconv↑, lrelu, tconv↑
//   c_m: 5×5 mask-A conv to 2·C_y channels
//   head: concat(c_m, h_s) → 1×1, lrelu, 1×1, lrelu, 1×1
class Network {
 public:
  Network(const WeightStore& w, const ModelConfig& cfg);

  const ModelConfig& config() const { return cfg_; }

  Tensor analysis(const Tensor& x) const;
  Tensor synthesis(const Tensor& y_hat) const;
  Tensor hyper_analysis(const Tensor& y) const;
  Tensor hyper_synthesis(const Tensor& z_hat) const;

  // Full context tensor; causal, so entries at a raster site only depend on
  // strictly earlier sites.
  Tensor context(const Tensor& y_hat) const;
  // Context features (2·C_y) at one site; identical to context() there.
  void context_site(const Tensor& y_hat, int n, int h, int w,
                    std::span<float> out) const;

  // Raw head output (params_per_channel·C_y values) for one site.
  void head_site(std::span<const float> ctx, std::span<const float> hyper,
                 std::span<float> out) const;
  // Decodes raw head output into per-channel mixture parameters.
  void site_params(std::span<const float> raw,
                   std::span<GllmmParams> out) const;

  GllmmField entropy_parameters(const Tensor& ctx, const Tensor& hyper) const;

  size_t head_input_channels() const { return 4 * cfg_.latent_channels; }
  size_t head_output_channels() const {
    return static_cast<size_t>(cfg_.params_per_channel()) *
           cfg_.latent_channels;
  }

 private:
  ModelConfig cfg_;

  std::vector<ConvSpec> ga_conv_;
  std::vector<GdnLayer> ga_gdn_;
  std::vector<Crm> ga_crm_;
  std::vector<Attention> ga_attn_;

  std::vector<ConvSpec> gs_conv_;
  std::vector<GdnLayer> gs_gdn_;
  std::vector<Crm> gs_crm_;
  std::vector<Attention> gs_attn_;

  std::vector<ConvSpec> ha_conv_;
  std::vector<ConvSpec> hs_conv_;
  ConvSpec context_conv_;
  std::vector<ConvSpec> head_conv_;
};

// Free-function forms of the graph entry points.
Tensor analysis_transform(const Tensor& x, const WeightStore& w,
                          const ModelConfig& cfg);
Tensor synthesis_transform(const Tensor& y_hat, const WeightStore& w,
                           const ModelConfig& cfg);
Tensor hyper_analysis(const Tensor& y, const WeightStore& w,
                      const ModelConfig& cfg);
Tensor hyper_synthesis(const Tensor& z_hat, const WeightStore& w,
                       const ModelConfig& cfg);
Tensor context_model(const Tensor& y_hat, const WeightStore& w,
                     const ModelConfig& cfg);
GllmmField entropy_parameters(const Tensor& ctx, const Tensor& hyper,
                              const WeightStore& w, const ModelConfig& cfg);

}  // namespace gllc

#endif  // GLLC_NETWORK_H_
