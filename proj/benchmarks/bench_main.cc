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

#include <benchmark/benchmark.h>

#include <random>

#include "gllc/entropy.h"
#include "gllc/fitting.h"
#include "gllc/nn.h"
#include "gllc/range_coder.h"

namespace {

std::vector<gllc::CdfTable> laplace_tables(int count) {
  std::vector<gllc::CdfTable> tables;
  for (int k = 0; k < count; ++k) {
    const auto p = gllc::GllmmParams::single(gllc::Family::kLaplacian, 0.3 * k, 1.0 + k);
    tables.push_back(gllc::build_table(gllc::discretized_pmf(p, gllc::Alphabet{})));
  }
  return tables;
}

void BM_RangeEncode(benchmark::State& state) {
  const auto pool = laplace_tables(8);
  std::mt19937_64 rng(1);
  const size_t n = static_cast<size_t>(state.range(0));
  std::vector<int32_t> syms(n);
  std::vector<gllc::CdfTable> tables(n);
  for (size_t i = 0; i < n; ++i) {
    tables[i] = pool[i % pool.size()];
    syms[i] = static_cast<int32_t>(rng() % 9) - 4;
  }
  for (auto _ : state) benchmark::DoNotOptimize(gllc::encode_stream(syms, tables));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RangeEncode)->Arg(1 << 16);

void BM_RangeDecode(benchmark::State& state) {
  const auto pool = laplace_tables(8);
  std::mt19937_64 rng(2);
  const size_t n = static_cast<size_t>(state.range(0));
  std::vector<int32_t> syms(n);
  std::vector<gllc::CdfTable> tables(n);
  for (size_t i = 0; i < n; ++i) {
    tables[i] = pool[i % pool.size()];
    syms[i] = static_cast<int32_t>(rng() % 9) - 4;
  }
  const auto bytes = gllc::encode_stream(syms, tables);
  for (auto _ : state) benchmark::DoNotOptimize(gllc::decode_stream(bytes, tables));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_RangeDecode)->Arg(1 << 16);

void BM_Conv2d(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<float> nd(0.0f, 1.0f);
  gllc::Tensor x({1, c, 16, 16});
  for (float& v : x.data()) v = nd(rng);
  gllc::ConvSpec spec;
  spec.kernel = gllc::Tensor({c, c, 3, 3});
  for (float& v : spec.kernel.data()) v = nd(rng) * 0.05f;
  spec.bias.assign(c, 0.0f);
  spec.padding = 1;
  for (auto _ : state) benchmark::DoNotOptimize(gllc::conv2d(x, spec));
  state.SetItemsProcessed(state.iterations() * 16 * 16 * c * c * 9);
}
BENCHMARK(BM_Conv2d)->Arg(64)->Arg(128);

void BM_DiscretizedPmf(benchmark::State& state) {
  gllc::GllmmParams full;
  for (int f = 0; f < gllc::kNumFamilies; ++f) {
    full.family_prob[f] = 1.0 / 3.0;
    for (int k = 0; k < 3; ++k) full.components[f].push_back({1.0 / 3.0, 0.5 * k - 0.5, 1.0 + k});
  }
  for (auto _ : state) benchmark::DoNotOptimize(gllc::discretized_pmf(full, gllc::Alphabet{}));
}
BENCHMARK(BM_DiscretizedPmf);

void BM_BuildTable(benchmark::State& state) {
  const auto pmf = gllc::discretized_pmf(
      gllc::GllmmParams::single(gllc::Family::kGaussian, 0.0, 3.0), gllc::Alphabet{});
  for (auto _ : state) benchmark::DoNotOptimize(gllc::build_table(pmf));
}
BENCHMARK(BM_BuildTable);

void BM_FitMixture(benchmark::State& state) {
  const auto samples = gllc::generate_source({"laplacian", 20000, 1});
  gllc::FitConfig fc;
  fc.counts = {3, 0, 0};
  fc.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(gllc::fit_mixture(samples, fc));
}
BENCHMARK(BM_FitMixture)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
