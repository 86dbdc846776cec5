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
#include <sstream>

#include "gllc/error.h"
#include "gllc/fitting.h"

namespace gllc {
namespace {

// Entropy in bits of round(N(0, sigma)).
double rounded_gaussian_entropy(double sigma) {
  double h = 0.0;
  for (int k = -200; k <= 200; ++k) {
    const double p = 0.5 * (std::erfc(-(k + 0.5) / (sigma * std::sqrt(2.0))) -
                            std::erfc(-(k - 0.5) / (sigma * std::sqrt(2.0))));
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

FitConfig quick(FamilyCounts counts) {
  FitConfig fc;
  fc.counts = counts;
  fc.restarts = 3;
  return fc;
}

TEST(FitConfig, ValidateRejects) {
  FitConfig fc;
  EXPECT_NO_THROW(fc.validate());
  fc.counts = {0, 0, 0};
  EXPECT_THROW(fc.validate(), ConfigError);
  fc = FitConfig{};
  fc.restarts = 0;
  EXPECT_THROW(fc.validate(), ConfigError);
  fc = FitConfig{};
  fc.step_size = -1.0;
  EXPECT_THROW(fc.validate(), ConfigError);
}

TEST(FitMixture, AllZeroSamplesCollapse) {
  const std::vector<int32_t> zeros(5000, 0);
  const FitResult r = fit_mixture(zeros, quick({3, 0, 0}));
  EXPECT_LE(r.bits_per_symbol, 0.01);
  EXPECT_GE(discretized_pmf(r.params, Alphabet{}).at(0), 0.999);
  EXPECT_NO_THROW(r.params.validate());
}

TEST(FitMixture, GaussianSourceNearEntropy) {
  const auto samples = generate_source({"gaussian", 20000, 3});
  const FitResult r = fit_mixture(samples, quick({3, 0, 0}));
  EXPECT_NEAR(r.bits_per_symbol, rounded_gaussian_entropy(3.0), 0.02);
  EXPECT_GE(r.bits_per_symbol, histogram_entropy(samples) - 1e-9);
}

TEST(FitMixture, LaplaceFamilyNotWorseOnLaplaceData) {
  const auto samples = generate_source({"laplacian", 20000, 4});
  const double gmm = fit_mixture(samples, quick({3, 0, 0})).bits_per_symbol;
  const double glamm = fit_mixture(samples, quick({3, 3, 0})).bits_per_symbol;
  EXPECT_LE(glamm, gmm + 0.005);
}

TEST(FitMixture, AcceptedNllIsMonotone) {
  const auto samples = generate_source({"logistic", 10000, 5});
  const FitResult r = fit_mixture(samples, quick({1, 1, 1}));
  ASSERT_EQ(r.accepted_nll.size(), 3u);
  for (const auto& trace : r.accepted_nll) {
    ASSERT_FALSE(trace.empty());
    for (size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
  }
  EXPECT_GE(r.restart, 0);
  EXPECT_LT(r.restart, 3);
}

TEST(FitMixture, Reproducible) {
  const auto samples = generate_source({"mixed", 8000, 6});
  const FitResult a = fit_mixture(samples, quick({2, 2, 2}));
  const FitResult b = fit_mixture(samples, quick({2, 2, 2}));
  EXPECT_EQ(a.bits_per_symbol, b.bits_per_symbol);
  EXPECT_EQ(a.accepted_nll, b.accepted_nll);
  for (int f = 0; f < kNumFamilies; ++f) {
    ASSERT_EQ(a.params.components[f].size(), b.params.components[f].size());
    for (size_t k = 0; k < a.params.components[f].size(); ++k) {
      EXPECT_EQ(a.params.components[f][k].mean, b.params.components[f][k].mean);
      EXPECT_EQ(a.params.components[f][k].scale, b.params.components[f][k].scale);
    }
  }
}

TEST(FitMixture, EmptySampleSetRejected) {
  EXPECT_THROW(fit_mixture(std::vector<int32_t>{}, quick({1, 0, 0})), Error);
}

TEST(MeanBits, MatchesPmf) {
  const GllmmParams p = GllmmParams::single(Family::kLaplacian, 0.0, 2.0);
  const std::vector<int32_t> s = {0, 1, -3};
  const Pmf pmf = discretized_pmf(p, Alphabet{});
  const double want = -(std::log2(pmf.at(0)) + std::log2(pmf.at(1)) + std::log2(pmf.at(-3))) / 3;
  EXPECT_NEAR(mean_bits(p, s, Alphabet{}), want, 1e-12);
}

TEST(HistogramEntropy, KnownValues) {
  EXPECT_DOUBLE_EQ(histogram_entropy(std::vector<int32_t>{1, 1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(histogram_entropy(std::vector<int32_t>{1, 2, 3, 4}), 2.0);
}

TEST(FitFactorized, AllZeroChannel) {
  const FactorizedModel m = fit_factorized({std::vector<int32_t>(100000, 0)}, Alphabet{});
  const Pmf pmf = factorized_pmf(m, 0);
  EXPECT_GE(pmf.at(0), 0.99);
  // Laplace smoothing: (n + 1) / (n + alphabet size), up to one reserved grid
  // unit per bin.
  EXPECT_NEAR(pmf.at(0), 100001.0 / 100256.0, 256.0 / (1 << 24));
  for (double v : pmf.prob) EXPECT_GT(v, 0.0);
}

TEST(FitFactorized, UniformSource) {
  std::mt19937_64 rng(7);
  std::vector<int32_t> s(100000);
  for (int32_t& v : s) v = static_cast<int32_t>(rng() % 5) - 2;
  const Pmf pmf = factorized_pmf(fit_factorized({s}, Alphabet{}), 0);
  for (int k = -2; k <= 2; ++k) EXPECT_NEAR(pmf.at(k), 0.2, 0.01);
  EXPECT_NEAR(pmf.sum(), 1.0, 1e-12);
}

TEST(FitFactorized, EmptyChannelIsUniform) {
  const Alphabet a{-3, 3};
  const FactorizedModel m = fit_factorized({{}, {1, 1}}, a);
  const Pmf pmf = factorized_pmf(m, 0);
  for (double p : pmf.prob) EXPECT_NEAR(p, 1.0 / 7.0, 1e-6);
}

TEST(Sources, NamesAndDeterminism) {
  for (const std::string& n : source_names()) {
    const auto a = generate_source({n, 1000, 9});
    EXPECT_EQ(a, generate_source({n, 1000, 9})) << n;
    EXPECT_EQ(a.size(), 1000u);
    for (int32_t v : a) {
      EXPECT_GE(v, -128);
      EXPECT_LE(v, 128);
    }
  }
  EXPECT_THROW(generate_source({"cauchy", 10, 1}), ConfigError);
}

TEST(Families, NamedConfigurations) {
  EXPECT_EQ(family_config("GMM").counts, (FamilyCounts{3, 0, 0}));
  EXPECT_EQ(family_config("GLaMM").counts, (FamilyCounts{3, 3, 0}));
  EXPECT_EQ(family_config("GLoMM").counts, (FamilyCounts{3, 0, 3}));
  EXPECT_EQ(family_config("GLLMM").counts, (FamilyCounts{3, 3, 3}));
  EXPECT_THROW(family_config("XMM"), ConfigError);
}

TEST(Ablation, CsvLayout) {
  FitConfig base;
  base.restarts = 1;
  base.max_iterations = 200;
  const auto rows = ablation_run({{"gaussian", 2000, 1}, {"logistic", 2000, 2}},
                                 {"GMM", "GLoMM"}, base);
  ASSERT_EQ(rows.size(), 4u);
  const std::string csv = ablation_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "family,K,M,N,bits_per_symbol,n_samples,seed");
  int count = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++count;
  }
  EXPECT_EQ(count, 4);
  EXPECT_NE(csv.find("GLoMM,3,0,3,"), std::string::npos);
}

TEST(Samples, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "gllc_samples.txt";
  const std::vector<int32_t> s = {0, -5, 17, 128, -128};
  write_samples(path.string(), s);
  EXPECT_EQ(read_samples(path.string()), s);
  std::filesystem::remove(path);
  EXPECT_THROW(read_samples("/nonexistent/samples.txt"), IoError);
}

}  // namespace
}  // namespace gllc
