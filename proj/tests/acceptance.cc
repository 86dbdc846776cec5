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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. `--child-roundtrip <seed> <path>` is the helper mode used for the
// cross-process determinism check.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gllc/bytes.h"
#include "gllc/codec.h"
#include "gllc/entropy.h"
#include "gllc/error.h"
#include "gllc/fitting.h"
#include "gllc/image.h"
#include "gllc/metrics.h"
#include "gllc/network.h"
#include "gllc/range_coder.h"
#include "gllc/weights.h"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Reference single-Gaussian bin masses straight from erfc.
double gaussian_bin(int s, const gllc::Alphabet& a, double mu, double sigma) {
  auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0))); };
  const double lo = s == a.min ? 0.0 : cdf(s - 0.5);
  const double hi = s == a.max ? 1.0 : cdf(s + 0.5);
  return hi - lo;
}

gllc::GllmmParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, 3);
  gllc::GllmmParams p;
  gllc::FamilyCounts c{count(rng), count(rng), count(rng)};
  if (c.total() == 0) c.gaussian = 1;
  double total = 0.0;
  for (int f = 0; f < gllc::kNumFamilies; ++f) {
    if (c[f] == 0) continue;
    p.family_prob[f] = u(rng) + 1e-3;
    total += p.family_prob[f];
    double ws = 0.0;
    for (int j = 0; j < c[f]; ++j) {
      const double w = u(rng) + 1e-3;
      ws += w;
      p.components[f].push_back({w, -140.0 + 280.0 * u(rng), std::exp(-5.0 + 9.0 * u(rng))});
    }
    for (auto& comp : p.components[f]) comp.weight /= ws;
  }
  for (auto& v : p.family_prob) v /= total;
  return p;
}

Outcome coder_roundtrip() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // A pool of tables spanning flat, peaked and sparse shapes.
  std::vector<gllc::CdfTable> pool;
  for (int k = 0; k < 64; ++k) {
    const int n = 2 + static_cast<int>(u(rng) * 300);
    gllc::Pmf pmf;
    pmf.min_symbol = -n / 2;
    pmf.prob.resize(n);
    const double sharp = std::exp(-3.0 + 6.0 * u(rng));
    const double mode = u(rng) * n;
    for (int i = 0; i < n; ++i) {
      pmf.prob[i] = u(rng) < 0.1 ? 0.0 : std::exp(-std::abs(i - mode) * sharp) * (0.5 + u(rng));
    }
    pmf.prob[static_cast<int>(mode)] += 1e-3;
    pool.push_back(gllc::build_table(pmf));
  }
  const size_t n = 1'000'000;
  std::vector<int32_t> symbols(n);
  std::vector<gllc::CdfTable> tables(n);
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<uint32_t> draw(0, gllc::kProbTotal - 1);
  double ideal = 0.0;
  for (size_t i = 0; i < n; ++i) {
    tables[i] = pool[pick(rng)];
    const auto& cum = tables[i].cum;
    const uint32_t v = draw(rng);
    const size_t idx = std::upper_bound(cum.begin(), cum.end(), v) - cum.begin() - 1;
    symbols[i] = tables[i].min_symbol + static_cast<int>(idx);
    ideal += gllc::table_bits(tables[i], symbols[i]);
  }
  const auto bytes = gllc::encode_stream(symbols, tables);
  const auto decoded = gllc::decode_stream(bytes, tables);
  const double actual = 8.0 * bytes.size();
  const double bound = ideal + 64.0 + 0.0005 * ideal;
  const double secs = seconds_since(t0);
  const bool exact = decoded == symbols;
  return {exact && actual <= bound && secs < 10.0,
          fmt("exact=%d bits=%.0f ideal=%.1f bound=%.1f time=%.2fs", exact,
              actual, ideal, bound, secs)};
}

Outcome pmf_correctness() {
  std::mt19937_64 rng(23);
  const gllc::Alphabet a;
  double worst_sum = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const gllc::Pmf pmf = gllc::discretized_pmf(random_params(rng), a);
    worst_sum = std::max(worst_sum, std::abs(pmf.sum() - 1.0));
  }
  // p = (1, 0, 0) with one Gaussian component; the other families have
  // components but no mass.
  double worst_bin = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const double mu = -100.0 + 200.0 * u(rng), sigma = std::exp(-3.0 + 7.0 * u(rng));
    gllc::GllmmParams p;
    p.family_prob = {1.0, 0.0, 0.0};
    p.components[0] = {{1.0, mu, sigma}};
    p.components[1] = {{0.5, 1.0, 2.0}, {0.5, -3.0, 1.0}};
    p.components[2] = {{1.0, 4.0, 0.5}};
    const gllc::Pmf pmf = gllc::discretized_pmf(p, a);
    for (int s = a.min; s <= a.max; ++s) {
      worst_bin = std::max(worst_bin, std::abs(pmf.at(s) - gaussian_bin(s, a, mu, sigma)));
    }
  }
  const double g = gllc::discretized_pmf(gllc::GllmmParams::single(gllc::Family::kGaussian, 0, 1), a).at(0);
  const double l = gllc::discretized_pmf(gllc::GllmmParams::single(gllc::Family::kLaplacian, 0, 1), a).at(0);
  const double o = gllc::discretized_pmf(gllc::GllmmParams::single(gllc::Family::kLogistic, 0, 1), a).at(0);
  const double worst_p0 = std::max({std::abs(g - 0.382924923), std::abs(l - 0.393469340),
                                    std::abs(o - 0.244918662)});
  return {worst_sum <= 1e-6 && worst_bin <= 1e-9 && worst_p0 <= 1e-6,
          fmt("max|sum-1|=%.2e max|bin-gauss|=%.2e P0=(%.6f %.6f %.6f) max|P0-ref|=%.2e",
              worst_sum, worst_bin, g, l, o, worst_p0)};
}

// Pixels of x̂ after a full seeded round trip, with the bitstream appended.
std::vector<uint8_t> roundtrip_bytes(uint64_t seed, bool* latents_match) {
  const gllc::ModelConfig cfg;
  const gllc::WeightStore w = gllc::init_random(cfg, seed);
  const gllc::Image img = gllc::synthetic_image(64, 64, seed + 1);
  const gllc::CompressResult enc = gllc::compress(img, w, cfg);
  const gllc::DecompressResult dec = gllc::decompress(enc.bytes, w, cfg);
  if (latents_match) *latents_match = dec.y_hat == enc.y_hat && dec.z_hat == enc.z_hat;
  std::vector<uint8_t> out = dec.image.pixels;
  out.insert(out.end(), enc.bytes.begin(), enc.bytes.end());
  return out;
}

Outcome determinism(const std::string& self) {
  const uint64_t seed = 2024;
  const auto t0 = Clock::now();
  bool latents = false;
  const auto mine = roundtrip_bytes(seed, &latents);
  const double secs = seconds_since(t0);
  const auto path = std::filesystem::temp_directory_path() /
                    ("gllc_child_" + std::to_string(::getpid()) + ".bin");
  const std::string cmd = "\"" + self + "\" --child-roundtrip " +
                          std::to_string(seed) + " \"" + path.string() + "\"";
  const int rc = std::system(cmd.c_str());
  bool same = false;
  if (rc == 0) {
    same = gllc::read_file(path.string()) == mine;
    std::filesystem::remove(path);
  }
  return {latents && same && secs < 5.0,
          fmt("latents_equal=%d cross_process_identical=%d child_rc=%d roundtrip=%.2fs",
              latents, same, rc, secs)};
}

Outcome rate_accounting() {
  const gllc::ModelConfig cfg;
  double worst_margin = -INFINITY;
  std::string worst;
  int passed = 0;
  for (int k = 0; k < 10; ++k) {
    const gllc::WeightStore w = gllc::init_random(cfg, 500 + k / 2);
    const gllc::Image img = gllc::synthetic_image(64, 64, 900 + k);
    const gllc::CompressResult r = gllc::compress(img, w, cfg);
    const gllc::Bitstream bs = gllc::Bitstream::parse(r.bytes);
    const double est = r.estimated_y_bits + r.estimated_z_bits;
    const double actual = 8.0 * (bs.y_payload.size() + bs.z_payload.size());
    const double bound = 0.002 * est + 64.0;
    const double gap = std::abs(est - actual);
    if (gap <= bound) ++passed;
    if (gap - bound > worst_margin) {
      worst_margin = gap - bound;
      worst = fmt("est=%.1f actual=%.0f gap=%.1f bound=%.1f", est, actual, gap, bound);
    }
  }
  return {passed == 10, fmt("%d/10 within bound; tightest: %s", passed, worst.c_str())};
}

// Signals the end of a partial decode from inside the observer.
struct StopDecode {};

Outcome causality() {
  const gllc::ModelConfig cfg;
  const gllc::WeightStore w = gllc::init_random(cfg, 77);
  std::mt19937_64 rng(99);
  int pairs = 0, clean = 0, clean_at_t = 0;
  for (int img_i = 0; img_i < 10; ++img_i) {
    const gllc::Image img = gllc::synthetic_image(64, 64, 300 + img_i);
    const gllc::CompressResult base = gllc::compress(img, w, cfg);
    const int sites = base.y_hat.shape.h * base.y_hat.shape.w;
    std::vector<std::vector<gllc::CdfTable>> ref(sites);
    gllc::decode_latents(base.bytes, w, cfg,
                         [&](int site, int, const gllc::CdfTable& t) { ref[site].push_back(t); });
    std::uniform_int_distribution<int> pick_t(1, sites - 1);
    std::uniform_int_distribution<int> pick_v(cfg.y_alphabet.min, cfg.y_alphabet.max);
    for (int k = 0; k < 10; ++k) {
      const int t = pick_t(rng);
      gllc::SymbolTensor y = base.y_hat;
      for (int c = 0; c < y.shape.c; ++c) {
        for (int site = t; site < sites; ++site) {
          y.at(0, c, site / y.shape.w, site % y.shape.w) = pick_v(rng);
        }
      }
      const auto altered = gllc::encode_latents(y, base.z_hat, img.width, img.height, w, cfg);
      bool ok = true, ok_t = true;
      try {
        gllc::decode_latents(altered.bytes, w, cfg,
                             [&](int site, int c, const gllc::CdfTable& table) {
                               if (site > t) throw StopDecode{};
                               const bool eq = table == ref[site][c];
                               if (site < t) ok = ok && eq;
                               else ok_t = ok_t && eq;
                             });
      } catch (const StopDecode&) {
      }
      ++pairs;
      clean += ok;
      clean_at_t += ok_t;
    }
  }
  return {clean == pairs && pairs == 100,
          fmt("%d/%d pairs with identical tables at sites < t (%d/%d also at t)",
              clean, pairs, clean_at_t, pairs)};
}

Outcome ablation_ordering() {
  const auto t0 = Clock::now();
  gllc::FitConfig base;
  base.restarts = 5;
  const auto rows = gllc::ablation_run(
      {{"mixed", 50000, 1}, {"gaussian", 50000, 1}},
      {"GMM", "GLaMM", "GLoMM", "GLLMM"}, base);
  auto bits = [&](const std::string& src, const std::string& fam) {
    for (const auto& r : rows) {
      if (r.source == src && r.family == fam) return r.bits_per_symbol;
    }
    return std::nan("");
  };
  const double gmm = bits("mixed", "GMM"), gla = bits("mixed", "GLaMM");
  const double glo = bits("mixed", "GLoMM"), gll = bits("mixed", "GLLMM");
  const double g_gmm = bits("gaussian", "GMM"), g_gll = bits("gaussian", "GLLMM");
  const double secs = seconds_since(t0);
  const bool ok = gll <= gmm - 0.002 && gll <= glo + 0.005 && gll <= gla + 0.005 &&
                  g_gll <= g_gmm + 0.005 && secs < 60.0;
  return {ok, fmt("mixed: GMM=%.5f GLaMM=%.5f GLoMM=%.5f GLLMM=%.5f; gaussian: "
                  "GMM=%.5f GLLMM=%.5f; time=%.1fs",
                  gmm, gla, glo, gll, g_gmm, g_gll, secs)};
}

Outcome architecture() {
  bool ok = true;
  std::string detail;
  gllc::ModelConfig cfg;
  std::mt19937_64 rng(5);
  std::normal_distribution<float> nd(0.0f, 1.0f);
  gllc::Tensor x({1, cfg.latent_channels, 8, 8});
  for (float& v : x.data()) v = nd(rng);
  for (int stages : {2, 3}) {
    cfg.crm_stages = stages;
    const gllc::WeightStore zero = gllc::init_zero(cfg);
    const bool crm_id = gllc::crm_forward(x, zero, "ga.crm0", stages) == x;
    const bool attn_id = gllc::attention_forward(x, zero, "gs.attn1") == x;
    ok = ok && crm_id && attn_id;
    detail += fmt("crm%d_identity=%d attn_identity=%d ", stages, crm_id, attn_id);
  }
  cfg.crm_stages = 2;
  const gllc::WeightStore w2 = gllc::init_random(cfg, 1);
  cfg.crm_stages = 3;
  const gllc::WeightStore w3 = gllc::init_random(cfg, 1);
  const double ratio =
      static_cast<double>(gllc::Crm::from_store(w3, "ga.crm1", 3).parameter_count()) /
      static_cast<double>(gllc::Crm::from_store(w2, "ga.crm1", 2).parameter_count());
  ok = ok && ratio == 1.5;
  detail += fmt("crm_param_ratio=%.4f whole_model_increase=%.1f%% ", ratio,
                100.0 * (static_cast<double>(w3.parameter_count()) / w2.parameter_count() - 1.0));
  cfg.crm_stages = 2;
  const gllc::Network net(w2, cfg);
  bool shapes = true;
  for (int h : {64, 128, 192}) {
    gllc::Tensor img({1, 3, h, 64});
    for (float& v : img.data()) v = nd(rng) * 0.5f;
    const gllc::Tensor y = net.analysis(img);
    const gllc::Tensor z = net.hyper_analysis(y);
    shapes = shapes && y.shape().h == h / 16 && y.shape().w == 4 &&
             z.shape().h == h / 64 && z.shape().w == 1 &&
             y.shape().c == cfg.latent_channels && z.shape().c == cfg.hyper_channels;
  }
  ok = ok && shapes;
  detail += fmt("shape_law=%d", shapes);
  return {ok, detail};
}

Outcome metrics_checks() {
  gllc::Image a(64, 48), b(64, 48);
  std::mt19937_64 rng(3);
  for (size_t i = 0; i < a.pixels.size(); ++i) {
    a.pixels[i] = static_cast<uint8_t>(rng() % 255);
    b.pixels[i] = static_cast<uint8_t>(a.pixels[i] + 1);
  }
  const double p = gllc::psnr(a, b);
  const double self = gllc::ms_ssim(a, a);
  const double db = gllc::msssim_db(0.9);
  return {std::abs(p - 48.1308) <= 0.001 && self == 1.0 && std::abs(db - 10.0) <= 1e-9,
          fmt("psnr(+1)=%.6f msssim(identical)=%.6f msssim_db(0.9)=%.6f", p, self, db)};
}

Outcome fit_convergence() {
  const auto samples = gllc::generate_source({"gaussian", 50000, 1});
  gllc::FitConfig fc;
  fc.counts = {3, 0, 0};
  const gllc::FitResult r1 = gllc::fit_mixture(samples, fc);
  const gllc::FitResult r2 = gllc::fit_mixture(samples, fc);
  const double h = gllc::histogram_entropy(samples);
  bool same = r1.bits_per_symbol == r2.bits_per_symbol && r1.restart == r2.restart &&
              r1.iterations == r2.iterations;
  for (int f = 0; f < gllc::kNumFamilies; ++f) {
    same = same && r1.params.family_prob[f] == r2.params.family_prob[f];
    for (size_t j = 0; j < r1.params.components[f].size(); ++j) {
      const auto& c1 = r1.params.components[f][j];
      const auto& c2 = r2.params.components[f][j];
      same = same && c1.weight == c2.weight && c1.mean == c2.mean && c1.scale == c2.scale;
    }
  }
  return {std::abs(r1.bits_per_symbol - h) <= 0.02 && same,
          fmt("fit=%.5f entropy=%.5f gap=%.5f deterministic=%d", r1.bits_per_symbol, h,
              r1.bits_per_symbol - h, same)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc == 4 && std::string(argv[1]) == "--child-roundtrip") {
    try {
      const auto bytes = roundtrip_bytes(std::strtoull(argv[2], nullptr, 10), nullptr);
      gllc::write_file(argv[3], bytes);
      return 0;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "child failed: %s\n", e.what());
      return 1;
    }
  }
  const std::string self = std::filesystem::read_symlink("/proc/self/exe").string();
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"coder round-trip", coder_roundtrip},
      {"pmf correctness", pmf_correctness},
      {"end-to-end determinism", [&] { return determinism(self); }},
      {"rate accounting", rate_accounting},
      {"causality", causality},
      {"ablation ordering", ablation_ordering},
      {"architecture invariants", architecture},
      {"metrics", metrics_checks},
      {"fit convergence", fit_convergence},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
