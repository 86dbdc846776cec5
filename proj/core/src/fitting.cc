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

#include "gllc/fitting.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "gllc/bytes.h"
#include "gllc/error.h"
#include "rng.h"

namespace gllc {
namespace {

constexpr double kScaleFloor = 1e-3;
constexpr int kWindow = 100;
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;
constexpr double kMinStep = 1e-9;

double softplus_d(double v) {
  return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}
double sigmoid_d(double v) { return 1.0 / (1.0 + std::exp(-v)); }
double softplus_inv_d(double v) {
  return v > 30.0 ? v : std::log(std::expm1(v));
}

// Nonzero histogram bins with their integration bounds.
struct Bins {
  std::vector<double> lo, hi, count;
  double n = 0.0;
};

Bins make_bins(std::span<const int32_t> samples, Alphabet a) {
  std::map<int, double> hist;
  for (int32_t s : samples) {
    if (!a.contains(s)) {
      throw ParamError("sample " + std::to_string(s) + " outside the alphabet");
    }
    hist[s] += 1.0;
  }
  Bins b;
  for (const auto& [s, c] : hist) {
    b.lo.push_back(s == a.min ? -INFINITY : s - 0.5);
    b.hi.push_back(s == a.max ? INFINITY : s + 0.5);
    b.count.push_back(c);
    b.n += c;
  }
  return b;
}

// Unconstrained parameter vector. Layout: family logits [3], then per
// family f and component j: weight logit, mean, raw scale.
struct Layout {
  FamilyCounts counts;
  std::array<int, kNumFamilies> offset{};
  int size = 3;

  explicit Layout(FamilyCounts c) : counts(c) {
    for (int f = 0; f < kNumFamilies; ++f) {
      offset[f] = size;
      size += 3 * counts[f];
    }
  }
  int logit(int f, int j) const { return offset[f] + 3 * j; }
  int mean(int f, int j) const { return offset[f] + 3 * j + 1; }
  int raw_scale(int f, int j) const { return offset[f] + 3 * j + 2; }
};

GllmmParams decode(const Layout& L, const std::vector<double>& th) {
  GllmmParams p;
  double mx = -INFINITY;
  for (int f = 0; f < kNumFamilies; ++f) {
    if (L.counts[f] > 0) mx = std::max(mx, th[f]);
  }
  double z = 0.0;
  for (int f = 0; f < kNumFamilies; ++f) {
    p.family_prob[f] = L.counts[f] > 0 ? std::exp(th[f] - mx) : 0.0;
    z += p.family_prob[f];
  }
  for (int f = 0; f < kNumFamilies; ++f) {
    p.family_prob[f] /= z;
    const int k = L.counts[f];
    if (k == 0) continue;
    double wm = -INFINITY;
    for (int j = 0; j < k; ++j) wm = std::max(wm, th[L.logit(f, j)]);
    double wz = 0.0;
    for (int j = 0; j < k; ++j) {
      const double w = std::exp(th[L.logit(f, j)] - wm);
      p.components[f].push_back({w, th[L.mean(f, j)],
                                 softplus_d(th[L.raw_scale(f, j)]) + kScaleFloor});
      wz += w;
    }
    for (auto& c : p.components[f]) c.weight /= wz;
  }
  return p;
}

// Mean NLL in bits/symbol and optionally its gradient.
double objective(const Layout& L, const std::vector<double>& th,
                 const Bins& bins, std::vector<double>* grad) {
  const GllmmParams p = decode(L, th);
  const size_t nb = bins.count.size();
  if (grad) grad->assign(th.size(), 0.0);
  double nll = 0.0;
  // Per-bin component masses and derivatives w.r.t. mean and scale.
  struct Comp {
    int f, j;
    std::vector<double> mass, dmu, dsig;
  };
  std::vector<Comp> comps;
  for (int f = 0; f < kNumFamilies; ++f) {
    const Family fam = static_cast<Family>(f);
    for (int j = 0; j < L.counts[f]; ++j) {
      const auto& c = p.components[f][j];
      Comp cm{f, j, std::vector<double>(nb), std::vector<double>(nb),
              std::vector<double>(nb)};
      for (size_t b = 0; b < nb; ++b) {
        cm.mass[b] = family_interval(fam, bins.lo[b], bins.hi[b], c.mean, c.scale);
        if (!grad) continue;
        double ph = 0.0, pl = 0.0, zph = 0.0, zpl = 0.0;
        if (std::isfinite(bins.hi[b])) {
          ph = family_pdf(fam, bins.hi[b], c.mean, c.scale);
          zph = (bins.hi[b] - c.mean) / c.scale * ph;
        }
        if (std::isfinite(bins.lo[b])) {
          pl = family_pdf(fam, bins.lo[b], c.mean, c.scale);
          zpl = (bins.lo[b] - c.mean) / c.scale * pl;
        }
        cm.dmu[b] = -(ph - pl);
        cm.dsig[b] = -(zph - zpl);
      }
      comps.push_back(std::move(cm));
    }
  }
  std::array<std::vector<double>, kNumFamilies> fam_mass;
  for (auto& m : fam_mass) m.assign(nb, 0.0);
  for (const auto& cm : comps) {
    const double w = p.components[cm.f][cm.j].weight;
    for (size_t b = 0; b < nb; ++b) fam_mass[cm.f][b] += w * cm.mass[b];
  }
  std::vector<double> inv(nb);
  for (size_t b = 0; b < nb; ++b) {
    double P = 0.0;
    for (int f = 0; f < kNumFamilies; ++f) P += p.family_prob[f] * fam_mass[f][b];
    P = std::max(P, std::numeric_limits<double>::min());
    nll -= bins.count[b] * std::log2(P);
    inv[b] = P;
  }
  const double scale = 1.0 / (bins.n * std::numbers::ln2);
  nll /= bins.n;
  if (!grad) return nll;
  std::vector<double>& g = *grad;
  for (size_t b = 0; b < nb; ++b) {
    const double P = inv[b];
    const double coef = -bins.count[b] * scale / P;
    for (int f = 0; f < kNumFamilies; ++f) {
      if (L.counts[f] == 0) continue;
      g[f] += coef * p.family_prob[f] * (fam_mass[f][b] - P);
    }
    for (const auto& cm : comps) {
      const auto& c = p.components[cm.f][cm.j];
      const double pw = p.family_prob[cm.f] * c.weight;
      g[L.logit(cm.f, cm.j)] += coef * pw * (cm.mass[b] - fam_mass[cm.f][b]);
      g[L.mean(cm.f, cm.j)] += coef * pw * cm.dmu[b];
      g[L.raw_scale(cm.f, cm.j)] +=
          coef * pw * cm.dsig[b] * sigmoid_d(th[L.raw_scale(cm.f, cm.j)]);
    }
  }
  return nll;
}

std::vector<double> init_params(const Layout& L, int restart, double mean,
                                double sd, Rng& rng) {
  std::vector<double> th(L.size, 0.0);
  for (int f = 0; f < kNumFamilies; ++f) {
    const int k = L.counts[f];
    for (int j = 0; j < k; ++j) {
      double mu, sig;
      if (restart == 0) {
        // Centered: shared mean, scales spread geometrically over sd/4..2sd.
        mu = mean;
        const double t = k > 1 ? static_cast<double>(j) / (k - 1) : 0.5;
        sig = sd * std::pow(2.0, -2.0 + 3.0 * t);
      } else {
        mu = mean + 0.5 * sd * rng.normal();
        sig = sd * std::exp(rng.uniform(-1.5, 1.0));
        th[L.logit(f, j)] = 0.5 * rng.normal();
      }
      th[L.mean(f, j)] = mu;
      th[L.raw_scale(f, j)] = softplus_inv_d(std::max(sig - kScaleFloor, 1e-3));
    }
    if (restart != 0) th[f] = 0.5 * rng.normal();
  }
  return th;
}

struct RestartResult {
  std::vector<double> theta;
  double nll;
  int iterations;
  std::vector<double> accepted;
};

RestartResult run_restart(const Layout& L, std::vector<double> th,
                          const Bins& bins, const FitConfig& cfg) {
  std::vector<double> g, m(th.size(), 0.0), v(th.size(), 0.0), cand(th.size());
  double nll = objective(L, th, bins, &g);
  RestartResult r{th, nll, 0, {nll}};
  double lr = cfg.step_size;
  int t = 0;
  int it = 0;
  for (; it < cfg.max_iterations && lr > kMinStep; ++it) {
    ++t;
    const double c1 = 1.0 - std::pow(kBeta1, t);
    const double c2 = 1.0 - std::pow(kBeta2, t);
    for (size_t i = 0; i < th.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
      cand[i] = th[i] - lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + kEps);
    }
    std::vector<double> cg;
    const double cn = objective(L, cand, bins, &cg);
    if (std::isfinite(cn) && cn <= nll) {
      th = cand;
      g = std::move(cg);
      nll = cn;
      r.accepted.push_back(nll);
    } else {
      lr *= 0.5;
    }
    const size_t na = r.accepted.size();
    if (na > kWindow &&
        r.accepted[na - 1 - kWindow] - r.accepted[na - 1] < cfg.tolerance) {
      ++it;
      break;
    }
  }
  r.theta = th;
  r.nll = nll;
  r.iterations = it;
  return r;
}

std::vector<uint32_t> grid_frequencies(const std::vector<double>& weights) {
  const uint64_t total = 1ull << FactorizedModel::kKnotBits;
  const size_t n = weights.size();
  double sum = 0.0;
  for (double w : weights) sum += w;
  const uint64_t rest = total - n;
  std::vector<uint32_t> freq(n, 1);
  std::vector<std::pair<double, size_t>> rem(n);
  uint64_t assigned = n;
  for (size_t i = 0; i < n; ++i) {
    const double scaled = weights[i] / sum * static_cast<double>(rest);
    const double fl = std::floor(scaled);
    freq[i] += static_cast<uint32_t>(fl);
    assigned += static_cast<uint64_t>(fl);
    rem[i] = {scaled - fl, i};
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (size_t k = 0; assigned < total; k = (k + 1) % n, ++assigned) ++freq[rem[k].second];
  return freq;
}

double sample_laplace(Rng& rng, double b) {
  const double u = rng.uniform() - 0.5;
  return -b * (u < 0 ? -1.0 : 1.0) * std::log1p(-2.0 * std::abs(u));
}

double sample_logistic(Rng& rng, double s) {
  const double u = rng.uniform();
  return s * std::log(u / (1.0 - u));
}

int32_t round_clamp(double v) {
  return static_cast<int32_t>(std::clamp(std::round(v), -128.0, 127.0));
}

}  // namespace

void FitConfig::validate() const {
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(step_size > 0.0)) throw ConfigError("step_size must be positive");
  if (counts.total() < 1 || counts.gaussian < 0 || counts.laplacian < 0 ||
      counts.logistic < 0) {
    throw ConfigError("fit needs at least one mixture component");
  }
  if (alphabet.max <= alphabet.min) throw ConfigError("empty fit alphabet");
}

double mean_bits(const GllmmParams& params, std::span<const int32_t> samples,
                 Alphabet alphabet) {
  if (samples.empty()) throw ParamError("no samples");
  return estimate_rate(samples, discretized_pmf(params, alphabet)) /
         static_cast<double>(samples.size());
}

FitResult fit_mixture(std::span<const int32_t> samples, const FitConfig& cfg) {
  cfg.validate();
  if (samples.size() < 100) throw ParamError("fit needs at least 100 samples");
  const Bins bins = make_bins(samples, cfg.alphabet);
  double mean = 0.0, sq = 0.0;
  for (int32_t s : samples) mean += s;
  mean /= static_cast<double>(samples.size());
  for (int32_t s : samples) sq += (s - mean) * (s - mean);
  const double sd = std::max(std::sqrt(sq / samples.size()), 0.1);

  const Layout L(cfg.counts);
  Rng rng(cfg.seed);
  FitResult best;
  double best_nll = INFINITY;
  std::vector<double> best_theta;
  for (int r = 0; r < cfg.restarts; ++r) {
    RestartResult rr = run_restart(L, init_params(L, r, mean, sd, rng), bins, cfg);
    best.accepted_nll.push_back(rr.accepted);
    if (rr.nll < best_nll) {
      best_nll = rr.nll;
      best_theta = rr.theta;
      best.restart = r;
      best.iterations = rr.iterations;
    }
  }
  best.params = decode(L, best_theta);
  best.bits_per_symbol = mean_bits(best.params, samples, cfg.alphabet);
  return best;
}

FactorizedModel fit_factorized(
    const std::vector<std::vector<int32_t>>& samples_per_channel,
    Alphabet alphabet) {
  if (samples_per_channel.empty()) throw ParamError("no channels to fit");
  std::vector<std::vector<uint32_t>> freqs;
  for (const auto& ch : samples_per_channel) {
    std::vector<double> w(alphabet.size(), 1.0);
    for (int32_t s : ch) {
      if (!alphabet.contains(s)) {
        throw ParamError("sample " + std::to_string(s) + " outside the alphabet");
      }
      w[s - alphabet.min] += 1.0;
    }
    freqs.push_back(grid_frequencies(w));
  }
  return FactorizedModel::from_frequencies(alphabet, freqs);
}

double histogram_entropy(std::span<const int32_t> samples) {
  if (samples.empty()) throw ParamError("no samples");
  std::map<int32_t, double> hist;
  for (int32_t s : samples) hist[s] += 1.0;
  const double n = static_cast<double>(samples.size());
  double h = 0.0;
  for (const auto& [s, c] : hist) h -= c / n * std::log2(c / n);
  return h;
}

std::vector<int32_t> generate_source(const SourceSpec& spec) {
  Rng rng(spec.seed);
  std::vector<int32_t> out(spec.n);
  for (auto& v : out) {
    if (spec.name == "gaussian") {
      v = round_clamp(3.0 * rng.normal());
    } else if (spec.name == "laplacian") {
      v = round_clamp(sample_laplace(rng, 2.0));
    } else if (spec.name == "logistic") {
      v = round_clamp(sample_logistic(rng, 1.5));
    } else if (spec.name == "mixed") {
      switch (rng.below(3)) {
        case 0: v = round_clamp(3.0 * rng.normal()); break;
        case 1: v = round_clamp(sample_laplace(rng, 12.0)); break;
        default: v = round_clamp(sample_logistic(rng, 1.0)); break;
      }
    } else {
      throw ConfigError("unknown source '" + spec.name + "'");
    }
  }
  return out;
}

std::vector<std::string> source_names() {
  return {"gaussian", "laplacian", "logistic", "mixed"};
}

FamilyConfig family_config(const std::string& name) {
  if (name == "GMM") return {name, {3, 0, 0}};
  if (name == "GLaMM") return {name, {3, 3, 0}};
  if (name == "GLoMM") return {name, {3, 0, 3}};
  if (name == "GLLMM") return {name, {3, 3, 3}};
  throw ConfigError("unknown family '" + name + "'");
}

std::vector<AblationRow> ablation_run(const std::vector<SourceSpec>& sources,
                                      const std::vector<std::string>& families,
                                      const FitConfig& base) {
  std::vector<FamilyConfig> configs;
  for (const auto& f : families) configs.push_back(family_config(f));
  std::vector<AblationRow> rows;
  for (const auto& src : sources) {
    const auto samples = generate_source(src);
    for (const auto& fc : configs) {
      FitConfig cfg = base;
      cfg.counts = fc.counts;
      const FitResult r = fit_mixture(samples, cfg);
      rows.push_back({src.name, fc.name, fc.counts, r.bits_per_symbol,
                      samples.size(), src.seed});
    }
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "family,K,M,N,bits_per_symbol,n_samples,seed\n";
  os.precision(9);
  for (const auto& r : rows) {
    os << r.family << ',' << r.counts.gaussian << ',' << r.counts.laplacian
       << ',' << r.counts.logistic << ',' << std::fixed << r.bits_per_symbol
       << std::defaultfloat << ',' << r.n_samples << ',' << r.seed << '\n';
  }
  return os.str();
}

std::vector<int32_t> read_samples(const std::string& path) {
  const auto bytes = read_file(path);
  if (bytes.size() % 4 != 0) {
    throw FormatError("sample file size is not a multiple of 4 bytes");
  }
  ByteReader in(bytes);
  std::vector<int32_t> out(bytes.size() / 4);
  for (auto& v : out) v = static_cast<int32_t>(in.u32());
  return out;
}

void write_samples(const std::string& path, std::span<const int32_t> samples) {
  ByteWriter out;
  for (int32_t v : samples) out.u32(static_cast<uint32_t>(v));
  write_file(path, out.buffer());
}

}  // namespace gllc
