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

#ifndef GLLC_ENTROPY_H_
#define GLLC_ENTROPY_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gllc/model_config.h"
#include "gllc/tensor.h"

namespace gllc {

enum class Family : int { kGaussian = 0, kLaplacian = 1, kLogistic = 2 };
inline constexpr int kNumFamilies = 3;

// `scale` is the family's natural scale: standard deviation for the
// Gaussian, b for the Laplacian, s for the logistic.
struct MixtureComponent {
  double weight = 0.0;
  double mean = 0.0;
  double scale = 1.0;
};

// Mixture parameters of one symbol: family probabilities and, per family,
// its weighted components.
struct GllmmParams {
  std::array<double, kNumFamilies> family_prob{};
  std::array<std::vector<MixtureComponent>, kNumFamilies> components;

  FamilyCounts counts() const;
  // Throws ParamError unless the probabilities are normalized, every scale is
  // positive and empty families carry no mass.
  void validate(double tol = 1e-6) const;

  static GllmmParams single(Family f, double mean, double scale);
  // Equal family probabilities, one component each, shared mean/scale.
  static GllmmParams uniform_families(double mean, double scale);
};

// Parameters for every latent element, laid out like the latent tensor.
struct GllmmField {
  Shape shape{};
  std::vector<GllmmParams> params;

  const GllmmParams& at(int n, int c, int h, int w) const {
    return params[((static_cast<size_t>(n) * shape.c + c) * shape.h + h) *
                      shape.w + w];
  }
};

double family_cdf(Family f, double x, double mean, double scale);
double family_pdf(Family f, double x, double mean, double scale);
// Mass of (lo, hi] under one component; lo/hi may be ±infinity. Evaluated on
// whichever tail keeps the difference well conditioned.
double family_interval(Family f, double lo, double hi, double mean,
                       double scale);

double mixture_cdf(const GllmmParams& p, double x);
double mixture_interval(const GllmmParams& p, double lo, double hi);

// Probabilities over the integer alphabet [min_symbol, max_symbol].
struct Pmf {
  int min_symbol = 0;
  std::vector<double> prob;

  int max_symbol() const {
    return min_symbol + static_cast<int>(prob.size()) - 1;
  }
  bool contains(int s) const { return s >= min_symbol && s <= max_symbol(); }
  double at(int s) const { return prob[s - min_symbol]; }
  double sum() const;
};

// Discretized mixture: interior bins get c(s+1/2) - c(s-1/2); the two edge
// bins absorb the tails.
Pmf discretized_pmf(const GllmmParams& p, Alphabet alphabet);

// Per-channel piecewise-linear CDF with knots at s ± 1/2 for every symbol of
// the alphabet. Knot values live on a 2^-24 grid so bin differences and
// their sums are exact in double precision.
class FactorizedModel {
 public:
  static constexpr int kKnotBits = 24;

  FactorizedModel() = default;
  // Throws ParamError unless every channel's knots start at 0, end at 1 and
  // increase strictly.
  FactorizedModel(Alphabet alphabet, std::vector<std::vector<double>> knots);

  // Equal mass per symbol.
  static FactorizedModel uniform(int channels, Alphabet alphabet);
  // Integer bin frequencies summing to 2^kKnotBits, each >= 1.
  static FactorizedModel from_frequencies(
      Alphabet alphabet, const std::vector<std::vector<uint32_t>>& freqs);

  bool fitted() const { return !knots_.empty(); }
  int channels() const { return static_cast<int>(knots_.size()); }
  Alphabet alphabet() const { return alphabet_; }
  std::span<const double> knots(int channel) const { return knots_[channel]; }
  double cdf(int channel, double x) const;

  // Stored as (1, channels, 1, alphabet+1).
  Tensor to_tensor() const;
  static FactorizedModel from_tensor(const Tensor& t, Alphabet alphabet);

 private:
  Alphabet alphabet_{};
  std::vector<std::vector<double>> knots_;
};

// Throws StateError for an unfitted model.
Pmf factorized_pmf(const FactorizedModel& model, int channel);

struct Quantized {
  SymbolTensor symbols;
  size_t clamped = 0;
};

// Round half away from zero, then clamp into `alphabet`.
Quantized quantize(const Tensor& y, Alphabet alphabet);

// y + u with u i.i.d. uniform on the open interval (-1/2, 1/2).
Tensor add_uniform_noise(const Tensor& y, uint64_t seed);

inline constexpr double kPmfFloor = 1.0 / 65536.0;

// Sum of -log2 max(P(s), 2^-16). Throws std::logic_error when a symbol is
// outside its pmf.
double estimate_rate(std::span<const int32_t> symbols,
                     std::span<const Pmf> pmfs);
// Same, with a single pmf shared by every symbol.
double estimate_rate(std::span<const int32_t> symbols, const Pmf& pmf);
double symbol_bits(const Pmf& pmf, int symbol);

// lambda * D + (rate_y + rate_z) / num_pixels.
double rd_loss(double distortion, double rate_y_bits, double rate_z_bits,
               double lambda, long long num_pixels);

}  // namespace gllc

#endif  // GLLC_ENTROPY_H_
