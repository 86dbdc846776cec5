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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include "gllc/error.h"
#include "gllc/model_config.h"
#include "gllc/network.h"
#include "gllc/weights.h"

namespace gllc {
namespace {

Tensor random_tensor(Shape s, uint64_t seed, float scale = 1.0f) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> nd(0.0f, scale);
  Tensor t(s);
  for (float& v : t.data()) v = nd(rng);
  return t;
}

class NetworkFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    weights_ = new WeightStore(init_random(ModelConfig{}, 1));
    net_ = new Network(*weights_, ModelConfig{});
  }
  static void TearDownTestSuite() {
    delete net_;
    delete weights_;
  }
  static WeightStore* weights_;
  static Network* net_;
};
WeightStore* NetworkFixture::weights_ = nullptr;
Network* NetworkFixture::net_ = nullptr;

TEST(ModelConfig, DefaultsValidate) {
  ModelConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.params_per_channel(), 30);
}

TEST(ModelConfig, RejectsBadValues) {
  auto bad = [](auto mutate) {
    ModelConfig cfg;
    mutate(cfg);
    EXPECT_THROW(cfg.validate(), ConfigError);
  };
  bad([](ModelConfig& c) { c.latent_channels = 64; });
  bad([](ModelConfig& c) { c.hyper_channels = 0; });
  bad([](ModelConfig& c) { c.mixture = {0, 0, 0}; });
  bad([](ModelConfig& c) { c.mixture.gaussian = -1; });
  bad([](ModelConfig& c) { c.crm_stages = 4; });
  bad([](ModelConfig& c) { c.y_alphabet = {5, 5}; });
  bad([](ModelConfig& c) { c.z_alphabet = {-40000, 10}; });
  bad([](ModelConfig& c) { c.lambda = -1.0; });
}

TEST(ModelConfig, JsonRoundTrip) {
  ModelConfig cfg;
  cfg.latent_channels = 256;
  cfg.mixture = {2, 0, 1};
  cfg.crm_stages = 3;
  cfg.lambda = 0.0032;
  cfg.z_alphabet = {-64, 63};
  const ModelConfig back = ModelConfig::from_json(cfg.to_json());
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(back.fingerprint(), cfg.fingerprint());
  EXPECT_THROW(ModelConfig::from_json("{not json"), ConfigError);
}

TEST(ModelConfig, SaveLoad) {
  const auto path = std::filesystem::temp_directory_path() / "gllc_test_cfg.json";
  ModelConfig cfg;
  cfg.hyper_channels = 96;
  cfg.save(path.string());
  EXPECT_EQ(ModelConfig::load(path.string()), cfg);
  std::filesystem::remove(path);
  EXPECT_THROW(ModelConfig::load("/nonexistent/cfg.json"), IoError);
}

TEST(ModelConfig, FingerprintSeesEveryField) {
  std::set<uint64_t> seen;
  const ModelConfig base;
  seen.insert(base.fingerprint());
  std::vector<ModelConfig> variants(8, base);
  variants[0].latent_channels = 256;
  variants[1].hyper_channels = 64;
  variants[2].mixture.laplacian = 2;
  variants[3].crm_stages = 3;
  variants[4].y_alphabet.min = -127;
  variants[5].z_alphabet.max = 126;
  variants[6].lambda = 0.0016;
  variants[7].mixture = {3, 3, 2};
  for (const ModelConfig& v : variants) seen.insert(v.fingerprint());
  EXPECT_EQ(seen.size(), 9u);
  EXPECT_EQ(base.fingerprint(), ModelConfig{}.fingerprint());
}

TEST(Schema, NamesAreUniqueAndCoverStages) {
  const auto schema = weight_schema(ModelConfig{});
  std::set<std::string> names;
  for (const ParamSpec& p : schema) EXPECT_TRUE(names.insert(p.name).second) << p.name;
  for (const char* n : {"ga.conv0.weight", "gs.tconv3.weight", "ha.conv1.weight",
                        "hs.tconv1.weight", "cm.conv.weight", "head.conv2.weight",
                        "factorized.knots"}) {
    EXPECT_TRUE(names.count(n)) << n;
  }
}

TEST(Init, DeterministicPerSeed) {
  ModelConfig cfg;
  const WeightStore a = init_random(cfg, 7);
  const WeightStore b = init_random(cfg, 7);
  const WeightStore c = init_random(cfg, 8);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_NO_THROW(a.validate(cfg));
  EXPECT_EQ(a.fingerprint(), cfg.fingerprint());
}

TEST(Weights, SerializeRoundTripAndCorruption) {
  ModelConfig cfg;
  const WeightStore w = init_random(cfg, 3);
  std::vector<uint8_t> bytes = serialize_weights(w);
  ASSERT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "GLWS");
  EXPECT_TRUE(parse_weights(bytes) == w);
  bytes[bytes.size() / 2] ^= 0x10;
  EXPECT_THROW(parse_weights(bytes), FormatError);
  EXPECT_THROW(parse_weights(std::vector<uint8_t>(8, 0)), FormatError);
}

TEST(Weights, FileMismatchIsConfigError) {
  ModelConfig cfg;
  const auto path = std::filesystem::temp_directory_path() / "gllc_test_weights.glws";
  save_weights(init_random(cfg, 2), path.string());
  EXPECT_NO_THROW(load_weights(path.string(), cfg));
  ModelConfig other = cfg;
  other.lambda = 0.03;
  EXPECT_THROW(load_weights(path.string(), other), ConfigError);
  other = cfg;
  other.latent_channels = 256;
  EXPECT_THROW(load_weights(path.string(), other), ConfigError);
  std::filesystem::remove(path);
}

TEST(Weights, MissingTensorIsConfigError) {
  ModelConfig cfg;
  WeightStore w(cfg.fingerprint());
  EXPECT_THROW(w.get("ga.conv0.weight"), ConfigError);
  EXPECT_THROW(w.validate(cfg), ConfigError);
}

TEST(Init, GoldenContentHashes) {
  const WeightStore w = init_random(ModelConfig{}, 1);
  EXPECT_EQ(content_hash(w.get("cm.conv.weight")), 14559940708215086692ull);
  EXPECT_EQ(content_hash(w.get("ga.conv0.weight")), 7447915325069207964ull);
  EXPECT_EQ(ModelConfig{}.fingerprint(), 15186219761246298924ull);
}

TEST(Blocks, ZeroInitIsIdentity) {
  for (int stages : {2, 3}) {
    ModelConfig cfg;
    cfg.crm_stages = stages;
    const WeightStore zero = init_zero(cfg);
    const Tensor x = random_tensor({1, cfg.latent_channels, 4, 4}, 11);
    EXPECT_EQ(crm_forward(x, zero, "gs.crm2", stages), x);
    EXPECT_EQ(attention_forward(x, zero, "ga.attn0"), x);
  }
}

TEST(Blocks, CrmParametersScaleWithStages) {
  ModelConfig cfg;
  const WeightStore w2 = init_random(cfg, 4);
  cfg.crm_stages = 3;
  const WeightStore w3 = init_random(cfg, 4);
  const size_t p2 = Crm::from_store(w2, "ga.crm0", 2).parameter_count();
  const size_t p3 = Crm::from_store(w3, "ga.crm0", 3).parameter_count();
  EXPECT_EQ(p3 * 2, p2 * 3);
  const size_t c = ModelConfig{}.latent_channels;
  EXPECT_EQ(p2, 2 * 2 * (c * c * 9 + c));
}

TEST(Blocks, CrmSumsStageBranches) {
  ModelConfig cfg;
  const WeightStore w = init_random(cfg, 6);
  const Crm crm = Crm::from_store(w, "ga.crm1", 2);
  const Tensor x = random_tensor({1, cfg.latent_channels, 3, 3}, 12, 0.5f);
  const Tensor h1 = crm.blocks[0].forward(x);
  const Tensor b2 = crm.blocks[1].branch(h1);
  const Tensor b1 = crm.blocks[0].branch(x);
  const Tensor got = crm.forward(x);
  for (size_t i = 0; i < x.size(); ++i) {
    EXPECT_NEAR(got.data()[i], x.data()[i] + b1.data()[i] + b2.data()[i], 1e-5f);
  }
}

TEST_F(NetworkFixture, ShapeLaw) {
  const ModelConfig& cfg = net_->config();
  const Tensor x = random_tensor({1, 3, 64, 128}, 13, 0.5f);
  const Tensor y = net_->analysis(x);
  EXPECT_EQ(y.shape(), (Shape{1, cfg.latent_channels, 4, 8}));
  const Tensor z = net_->hyper_analysis(y);
  EXPECT_EQ(z.shape(), (Shape{1, cfg.hyper_channels, 1, 2}));
  EXPECT_EQ(net_->hyper_synthesis(z).shape(), (Shape{1, 2 * cfg.latent_channels, 4, 8}));
  EXPECT_EQ(net_->synthesis(y).shape(), x.shape());
  EXPECT_THROW(net_->analysis(random_tensor({1, 3, 60, 64}, 1)), ShapeError);
}

TEST_F(NetworkFixture, ContextIsCausalAndSiteExact) {
  const int c = net_->config().latent_channels;
  Tensor y({1, c, 4, 5});
  std::mt19937_64 rng(14);
  for (float& v : y.data()) v = static_cast<float>(static_cast<int>(rng() % 9) - 4);
  const Tensor ctx = net_->context(y);
  ASSERT_EQ(ctx.shape(), (Shape{1, 2 * c, 4, 5}));
  std::vector<float> site(2 * c);
  for (int h = 0; h < 4; ++h) {
    for (int w = 0; w < 5; ++w) {
      net_->context_site(y, 0, h, w, site);
      for (int k = 0; k < 2 * c; ++k) ASSERT_EQ(site[k], ctx.at(0, k, h, w));
    }
  }
  Tensor perturbed = y;
  for (int k = 0; k < c; ++k) perturbed.at(0, k, 2, 3) += 3.0f;
  perturbed.at(0, 0, 3, 0) -= 2.0f;
  const Tensor ctx2 = net_->context(perturbed);
  for (int k = 0; k < 2 * c; ++k) {
    for (int h = 0; h < 4; ++h) {
      for (int w = 0; w < 5; ++w) {
        if (h * 5 + w <= 2 * 5 + 3) {
          ASSERT_EQ(ctx2.at(0, k, h, w), ctx.at(0, k, h, w));
        }
      }
    }
  }
}

TEST_F(NetworkFixture, SiteParamsAreNormalized) {
  const int c = net_->config().latent_channels;
  std::vector<float> ctx(2 * c), hyper(2 * c), raw(net_->head_output_channels());
  std::mt19937_64 rng(15);
  std::normal_distribution<float> nd(0.0f, 2.0f);
  for (float& v : ctx) v = nd(rng);
  for (float& v : hyper) v = nd(rng);
  net_->head_site(ctx, hyper, raw);
  std::vector<GllmmParams> params(c);
  net_->site_params(raw, params);
  for (const GllmmParams& p : params) {
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.counts(), net_->config().mixture);
  }
}

TEST(NetworkFamilies, AbsentFamiliesCarryNoMass) {
  ModelConfig cfg;
  cfg.mixture = {2, 0, 1};
  const WeightStore w = init_random(cfg, 9);
  const Network net(w, cfg);
  std::vector<float> raw(net.head_output_channels());
  std::mt19937_64 rng(16);
  std::normal_distribution<float> nd(0.0f, 3.0f);
  for (float& v : raw) v = nd(rng);
  std::vector<GllmmParams> params(cfg.latent_channels);
  net.site_params(raw, params);
  for (const GllmmParams& p : params) {
    EXPECT_EQ(p.family_prob[1], 0.0);
    EXPECT_TRUE(p.components[1].empty());
    EXPECT_EQ(p.components[0].size(), 2u);
    EXPECT_NO_THROW(p.validate());
  }
}

TEST(NetworkFamilies, MismatchedWeightsRejected) {
  ModelConfig cfg;
  const WeightStore w = init_random(cfg, 9);
  cfg.mixture = {3, 0, 0};
  EXPECT_THROW(Network(w, cfg), ConfigError);
}

}  // namespace
}  // namespace gllc
