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

#ifndef GLLC_FITTING_H_
#define GLLC_FITTING_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gllc/entropy.h"
#include "gllc/model_config.h"

namespace gllc {

struct FitConfig {
  FamilyCounts counts{};
  int restarts = 5;
  int max_iterations = 3000;
  double step_size = 0.05;
  uint64_t seed = 1;
  // Stop once a 100-step window improves the NLL by less than this
  // (bits/symbol).
  double tolerance = 1e-7;
  Alphabet alphabet{};

  void validate() const;
};

struct FitResult {
  GllmmParams params;
  double bits_per_symbol = 0.0;
  int iterations = 0;
  int restart = 0;
  // Per restart: NLL (bits/symbol) after each accepted step, starting with
  // the initialization.
  std::vector<std::vector<double>> accepted_nll;
};

// Mean -log2 P(sample) under discretized_pmf(params, alphabet).
double mean_bits(const GllmmParams& params, std::span<const int32_t> samples,
                 Alphabet alphabet);

// Maximum-likelihood fit of one shared discretized mixture to the samples,
// by multi-restart Adam on (family logits, weight logits, means, softplus
// scales). Requires >= 100 samples inside cfg.alphabet.
FitResult fit_mixture(std::span<const int32_t> samples, const FitConfig& cfg);

// Per-channel closed-form fit: Laplace (+1) smoothed frequencies, integrated
// into knots. Empty channels fall back to uniform.
FactorizedModel fit_factorized(
    const std::vector<std::vector<int32_t>>& samples_per_channel,
    Alphabet alphabet);

// Empirical entropy of the sample histogram, bits/symbol.
double histogram_entropy(std::span<const int32_t> samples);

// Named synthetic sources, rounded and clamped to [-128, 127]:
//   gaussian  N(0, 3)       laplacian  Laplace(0, 2)    logistic  Logistic(0, 1.5)
//   mixed     equal thirds of N(0, 3), Laplace(0, 12) and Logistic(0, 1)
struct SourceSpec {
  std::string name;
  size_t n = 50000;
  uint64_t seed = 1;
};

std::vector<int32_t> generate_source(const SourceSpec& spec);
std::vector<std::string> source_names();

struct FamilyConfig {
  std::string name;
  FamilyCounts counts;
};

// GMM, GLaMM, GLoMM, GLLMM (three components per present family). Throws
// ConfigError for any other name.
FamilyConfig family_config(const std::string& name);

struct AblationRow {
  std::string source;
  std::string family;
  FamilyCounts counts;
  double bits_per_symbol = 0.0;
  size_t n_samples = 0;
  uint64_t seed = 0;
};

std::vector<AblationRow> ablation_run(const std::vector<SourceSpec>& sources,
                                      const std::vector<std::string>& families,
                                      const FitConfig& base);

// Header `family,K,M,N,bits_per_symbol,n_samples,seed`.
std::string ablation_csv(const std::vector<AblationRow>& rows);

// Little-endian int32 sample files.
std::vector<int32_t> read_samples(const std::string& path);
void write_samples(const std::string& path, std::span<const int32_t> samples);

}  // namespace gllc

#endif  // GLLC_FITTING_H_
