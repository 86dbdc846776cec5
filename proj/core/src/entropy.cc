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

#include "gllc/entropy.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gllc/error.h"
#include "rng.h"

namespace gllc {
namespace {

double standard_cdf(Family f, double z) {
  switch (f) {
    case Family::kGaussian:
      return 0.5 * std::erfc(-z * std::numbers::sqrt2 * 0.5);
    case Family::kLaplacian:
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    case Family::kLogistic:
      return 1.0 / (1.0 + std::exp(-z));
  }
  return 0.0;
}

double standard_pdf(Family f, double z) {
  switch (f) {
    case Family::kGaussian:
      return std::exp(-0.5 * z * z) * (0.5 * std::numbers::inv_sqrtpi *
                                       std::numbers::sqrt2);
    case Family::kLaplacian:
      return 0.5 * std::exp(-std::abs(z));
    case Family::kLogistic: {
      const double e = std::exp(-std::abs(z));
      return e / ((1.0 + e) * (1.0 + e));
    }
  }
  return 0.0;
}

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ParamError("distribution scale must be positive and finite");
  }
}

}  // namespace

FamilyCounts GllmmParams::counts() const {
  return {static_cast<int>(components[0].size()),
          static_cast<int>(components[1].size()),
          static_cast<int>(components[2].size())};
}

void GllmmParams::validate(double tol) const {
  double total = 0.0;
  for (int f = 0; f < kNumFamilies; ++f) {
    const double p = family_prob[f];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ParamError("family probability must be non-negative");
    }
    total += p;
    if (components[f].empty()) {
      if (p > tol) throw ParamError("empty family carries probability mass");
      continue;
    }
    double wsum = 0.0;
    for (const auto& c : components[f]) {
      if (!(c.weight >= 0.0)) throw ParamError("component weight is negative");
      if (!std::isfinite(c.mean)) throw ParamError("component mean not finite");
      check_scale(c.scale);
      wsum += c.weight;
    }
    if (std::abs(wsum - 1.0) > tol) {
      throw ParamError("component weights do not sum to 1");
    }
  }
  if (std::abs(total - 1.0) > tol) {
    throw ParamError("family probabilities do not sum to 1");
  }
}

GllmmParams GllmmParams::single(Family f, double mean, double scale) {
  GllmmParams p;
  p.family_prob[static_cast<int>(f)] = 1.0;
  p.components[static_cast<int>(f)].push_back({1.0, mean, scale});
  return p;
}

GllmmParams GllmmParams::uniform_families(double mean, double scale) {
  GllmmParams p;
  for (int f = 0; f < kNumFamilies; ++f) {
    p.family_prob[f] = 1.0 / 3.0;
    p.components[f].push_back({1.0, mean, scale});
  }
  return p;
}

double family_cdf(Family f, double x, double mean, double scale) {
  check_scale(scale);
  return standard_cdf(f, (x - mean) / scale);
}

double family_pdf(Family f, double x, double mean, double scale) {
  check_scale(scale);
  return standard_pdf(f, (x - mean) / scale) / scale;
}

double family_interval(Family f, double lo, double hi, double mean,
                       double scale) {
  check_scale(scale);
  if (!(hi > lo)) return 0.0;
  const double zl = (lo - mean) / scale;
  const double zh = (hi - mean) / scale;
  double m;
  if (zl >= 0.0) {
    // Upper tail: the families are symmetric, so S(z) = F(-z).
    m = standard_cdf(f, -zl) - standard_cdf(f, -zh);
  } else {
    m = standard_cdf(f, zh) - standard_cdf(f, zl);
  }
  return std::max(m, 0.0);
}

double mixture_cdf(const GllmmParams& p, double x) {
  double c = 0.0;
  for (int f = 0; f < kNumFamilies; ++f) {
    if (p.family_prob[f] == 0.0) continue;
    double fc = 0.0;
    for (const auto& comp : p.components[f]) {
      fc += comp.weight * family_cdf(static_cast<Family>(f), x, comp.mean,
                                     comp.scale);
    }
    c += p.family_prob[f] * fc;
  }
  return c;
}

double mixture_interval(const GllmmParams& p, double lo, double hi) {
  double m = 0.0;
  for (int f = 0; f < kNumFamilies; ++f) {
    if (p.family_prob[f] == 0.0) continue;
    double fm = 0.0;
    for (const auto& comp : p.components[f]) {
      fm += comp.weight * family_interval(static_cast<Family>(f), lo, hi,
                                          comp.mean, comp.scale);
    }
    m += p.family_prob[f] * fm;
  }
  return m;
}

double Pmf::sum() const {
  double s = 0.0;
  for (double v : prob) s += v;
  return s;
}

Pmf discretized_pmf(const GllmmParams& p, Alphabet alphabet) {
  p.validate();
  if (alphabet.max < alphabet.min) throw ParamError("empty alphabet");
  Pmf pmf;
  pmf.min_symbol = alphabet.min;
  const size_t n = alphabet.size();
  pmf.prob.assign(n, 0.0);
  // Same arithmetic as mixture_interval per bin, with each interior boundary
  // evaluated once per component: tail[k] is F(z) below the mean and
  // F(-z) at or above it.
  std::vector<double> fm(n), tail(n + 1), z(n + 1);
  for (int f = 0; f < kNumFamilies; ++f) {
    if (p.family_prob[f] == 0.0) continue;
    const Family fam = static_cast<Family>(f);
    std::fill(fm.begin(), fm.end(), 0.0);
    for (const auto& c : p.components[f]) {
      z[0] = -INFINITY;
      z[n] = INFINITY;
      tail[0] = 0.0;
      tail[n] = 0.0;
      for (size_t k = 1; k < n; ++k) {
        z[k] = (alphabet.min + static_cast<double>(k) - 0.5 - c.mean) / c.scale;
        tail[k] = z[k] >= 0.0 ? standard_cdf(fam, -z[k]) : standard_cdf(fam, z[k]);
      }
      for (size_t i = 0; i < n; ++i) {
        const double zl = z[i], zh = z[i + 1];
        double m;
        if (zl >= 0.0) {
          m = tail[i] - tail[i + 1];
        } else if (zh < 0.0) {
          m = tail[i + 1] - tail[i];
        } else {
          m = (std::isinf(zh) ? 1.0 : standard_cdf(fam, zh)) - tail[i];
        }
        fm[i] += c.weight * std::max(m, 0.0);
      }
    }
    for (size_t i = 0; i < n; ++i) pmf.prob[i] += p.family_prob[f] * fm[i];
  }
  return pmf;
}

FactorizedModel::FactorizedModel(Alphabet alphabet,
                                 std::vector<std::vector<double>> knots)
    : alphabet_(alphabet), knots_(std::move(knots)) {
  if (alphabet.min >= alphabet.max) throw ParamError("bad factorized alphabet");
  if (knots_.empty()) throw ParamError("factorized model needs >= 1 channel");
  const size_t n = alphabet.size() + 1;
  for (const auto& k : knots_) {
    if (k.size() != n) throw ParamError("factorized knot count mismatch");
    if (k.front() != 0.0 || k.back() != 1.0) {
      throw ParamError("factorized cdf must run from 0 to 1");
    }
    for (size_t i = 1; i < n; ++i) {
      if (!(k[i] > k[i - 1])) {
        throw ParamError("factorized cdf must be strictly increasing");
      }
    }
  }
}

FactorizedModel FactorizedModel::uniform(int channels, Alphabet alphabet) {
  // i/A: consecutive knots are within a factor of two of each other, so
  // every difference (and thus the telescoped sum) is exact.
  const int a = alphabet.size();
  std::vector<double> k(a + 1);
  for (int i = 0; i <= a; ++i) k[i] = static_cast<double>(i) / a;
  return FactorizedModel(alphabet,
                         std::vector<std::vector<double>>(channels, k));
}

FactorizedModel FactorizedModel::from_frequencies(
    Alphabet alphabet, const std::vector<std::vector<uint32_t>>& freqs) {
  const uint64_t total = 1ull << kKnotBits;
  std::vector<std::vector<double>> knots;
  knots.reserve(freqs.size());
  for (const auto& f : freqs) {
    if (f.size() != static_cast<size_t>(alphabet.size())) {
      throw ParamError("frequency count does not match alphabet");
    }
    std::vector<double> k(f.size() + 1, 0.0);
    uint64_t cum = 0;
    for (size_t i = 0; i < f.size(); ++i) {
      if (f[i] == 0) throw ParamError("factorized frequency must be >= 1");
      cum += f[i];
      k[i + 1] = static_cast<double>(cum) / static_cast<double>(total);
    }
    if (cum != total) throw ParamError("factorized frequencies must sum to 2^24");
    knots.push_back(std::move(k));
  }
  return FactorizedModel(alphabet, std::move(knots));
}

double FactorizedModel::cdf(int channel, double x) const {
  if (!fitted()) throw StateError("factorized model is not fitted");
  const auto& k = knots_.at(channel);
  const double lo = alphabet_.min - 0.5;
  if (x <= lo) return 0.0;
  if (x >= alphabet_.max + 0.5) return 1.0;
  const double pos = x - lo;
  const size_t i = static_cast<size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  return k[i] + frac * (k[i + 1] - k[i]);
}

Tensor FactorizedModel::to_tensor() const {
  if (!fitted()) throw StateError("factorized model is not fitted");
  const int n = alphabet_.size() + 1;
  Tensor t({1, channels(), 1, n});
  for (int c = 0; c < channels(); ++c) {
    for (int i = 0; i < n; ++i) t.at(0, c, 0, i) = static_cast<float>(knots_[c][i]);
  }
  return t;
}

FactorizedModel FactorizedModel::from_tensor(const Tensor& t,
                                             Alphabet alphabet) {
  const Shape& s = t.shape();
  if (s.n != 1 || s.h != 1 || s.w != alphabet.size() + 1) {
    throw ParamError("factorized tensor has wrong shape " + s.str());
  }
  std::vector<std::vector<double>> knots(s.c);
  for (int c = 0; c < s.c; ++c) {
    knots[c].resize(s.w);
    for (int i = 0; i < s.w; ++i) knots[c][i] = t.at(0, c, 0, i);
  }
  return FactorizedModel(alphabet, std::move(knots));
}

Pmf factorized_pmf(const FactorizedModel& model, int channel) {
  if (!model.fitted()) throw StateError("factorized model is not fitted");
  if (channel < 0 || channel >= model.channels()) {
    throw ParamError("factorized channel out of range");
  }
  const auto k = model.knots(channel);
  Pmf pmf;
  pmf.min_symbol = model.alphabet().min;
  pmf.prob.resize(k.size() - 1);
  for (size_t i = 0; i + 1 < k.size(); ++i) pmf.prob[i] = k[i + 1] - k[i];
  return pmf;
}

Quantized quantize(const Tensor& y, Alphabet alphabet) {
  Quantized q;
  q.symbols = SymbolTensor(y.shape());
  auto d = y.data();
  for (size_t i = 0; i < d.size(); ++i) {
    const double r = std::round(static_cast<double>(d[i]));
    int32_t s;
    if (r < alphabet.min) {
      s = alphabet.min;
      ++q.clamped;
    } else if (r > alphabet.max) {
      s = alphabet.max;
      ++q.clamped;
    } else {
      s = static_cast<int32_t>(r);
    }
    q.symbols.data[i] = s;
  }
  return q;
}

Tensor add_uniform_noise(const Tensor& y, uint64_t seed) {
  Rng rng(seed);
  Tensor out = y;
  for (float& v : out.data()) v = static_cast<float>(v + (rng.uniform() - 0.5));
  return out;
}

double symbol_bits(const Pmf& pmf, int symbol) {
  if (!pmf.contains(symbol)) {
    throw std::logic_error("symbol " + std::to_string(symbol) +
                           " outside pmf alphabet");
  }
  return -std::log2(std::max(pmf.at(symbol), kPmfFloor));
}

double estimate_rate(std::span<const int32_t> symbols,
                     std::span<const Pmf> pmfs) {
  if (symbols.size() != pmfs.size()) {
    throw std::logic_error("estimate_rate needs one pmf per symbol");
  }
  double bits = 0.0;
  for (size_t i = 0; i < symbols.size(); ++i) bits += symbol_bits(pmfs[i], symbols[i]);
  return bits;
}

double estimate_rate(std::span<const int32_t> symbols, const Pmf& pmf) {
  double bits = 0.0;
  for (int32_t s : symbols) bits += symbol_bits(pmf, s);
  return bits;
}

double rd_loss(double distortion, double rate_y_bits, double rate_z_bits,
               double lambda, long long num_pixels) {
  if (num_pixels <= 0) throw ParamError("num_pixels must be positive");
  return lambda * distortion +
         (rate_y_bits + rate_z_bits) / static_cast<double>(num_pixels);
}

}  // namespace gllc
