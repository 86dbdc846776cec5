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

#include "gllc/harness.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <map>

#include "json.hpp"

#include "gllc/codec.h"
#include "gllc/error.h"
#include "gllc/image.h"
#include "gllc/metrics.h"

namespace gllc {
namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int filters_for_lambda(double lambda) {
  for (size_t i = 0; i < kMseLambdas.size(); ++i) {
    if (kMseLambdas[i] == lambda) return i < 3 ? 128 : 256;
  }
  throw ConfigError("lambda is not one of the MSE rate slots");
}

Metrics rd_point(const std::string& image_path, const WeightStore& w,
                 const ModelConfig& cfg) {
  const Image orig = read_png(image_path);
  Metrics m;
  auto t0 = std::chrono::steady_clock::now();
  const CompressResult enc = compress(orig, w, cfg);
  m.enc_ms = elapsed_ms(t0);
  t0 = std::chrono::steady_clock::now();
  const DecompressResult dec = decompress(enc.bytes, w, cfg);
  m.dec_ms = elapsed_ms(t0);
  m.bpp = enc.bpp;
  m.psnr_db = psnr(orig, dec.image);
  m.msssim = ms_ssim(orig, dec.image);
  m.msssim_db = msssim_db(m.msssim);
  return m;
}

Metrics rd_point(const std::string& image_path,
                 const std::string& weights_path, const ModelConfig& cfg) {
  return rd_point(image_path, load_weights(weights_path, cfg), cfg);
}

RdCurve rd_curve(const std::string& dataset_dir,
                 const std::vector<WeightConfig>& configs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dataset_dir, ec)) {
    throw IoError("dataset directory not found: " + dataset_dir);
  }
  std::vector<fs::path> images;
  for (const auto& e : fs::directory_iterator(dataset_dir)) {
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
    if (e.is_regular_file() && ext == ".png") images.push_back(e.path());
  }
  std::sort(images.begin(), images.end());

  RdCurve curve;
  for (const auto& wc : configs) {
    WeightStore w;
    try {
      w = load_weights(wc.weights_path, wc.config);
    } catch (const Error& e) {
      curve.errors.push_back(wc.weights_path + ": " + e.what());
      continue;
    }
    for (const auto& img : images) {
      try {
        RdRow row;
        row.image = img.filename().string();
        row.lambda = wc.config.lambda;
        row.filters = wc.config.latent_channels;
        row.metrics = rd_point(img.string(), w, wc.config);
        curve.rows.push_back(std::move(row));
      } catch (const Error& e) {
        curve.errors.push_back(img.string() + ": " + e.what());
      }
    }
  }
  std::stable_sort(curve.rows.begin(), curve.rows.end(),
                   [](const RdRow& a, const RdRow& b) {
                     return a.metrics.bpp < b.metrics.bpp;
                   });
  return curve;
}

std::vector<RdRow> average_by_config(const std::vector<RdRow>& rows) {
  std::map<std::pair<double, int>, std::pair<Metrics, int>> acc;
  for (const auto& r : rows) {
    auto& [m, n] = acc[{r.lambda, r.filters}];
    m.psnr_db += r.metrics.psnr_db;
    m.msssim += r.metrics.msssim;
    m.msssim_db += r.metrics.msssim_db;
    m.bpp += r.metrics.bpp;
    m.enc_ms += r.metrics.enc_ms;
    m.dec_ms += r.metrics.dec_ms;
    ++n;
  }
  std::vector<RdRow> out;
  for (const auto& [key, val] : acc) {
    const auto& [m, n] = val;
    RdRow r;
    r.image = "mean";
    r.lambda = key.first;
    r.filters = key.second;
    r.metrics = {m.psnr_db / n, m.msssim / n, m.msssim_db / n,
                 m.bpp / n,     m.enc_ms / n, m.dec_ms / n};
    out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const RdRow& a, const RdRow& b) {
    return a.metrics.bpp < b.metrics.bpp;
  });
  return out;
}

std::string rd_csv_row(const RdRow& row) {
  char buf[512];
  const Metrics& m = row.metrics;
  std::snprintf(buf, sizeof buf, ",%g,%d,%.4f,%.2f,%.6f,%.2f,%.1f,%.1f",
                row.lambda, row.filters, m.bpp, m.psnr_db, m.msssim,
                m.msssim_db, m.enc_ms, m.dec_ms);
  return row.image + buf;
}

std::string rd_csv(const std::vector<RdRow>& rows) {
  std::string out = std::string(kRdCsvHeader) + "\n";
  for (const auto& r : rows) out += rd_csv_row(r) + "\n";
  return out;
}

std::string rd_json(const RdRow& row) {
  const Metrics& m = row.metrics;
  nlohmann::ordered_json j = {
      {"image", row.image},         {"lambda", row.lambda},
      {"filters", row.filters},     {"bpp", m.bpp},
      {"psnr_db", m.psnr_db},       {"msssim", m.msssim},
      {"msssim_db", m.msssim_db},   {"enc_ms", m.enc_ms},
      {"dec_ms", m.dec_ms}};
  return j.dump(2);
}

}  // namespace gllc
