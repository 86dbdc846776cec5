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

#ifndef GLLC_HARNESS_H_
#define GLLC_HARNESS_H_

#include <array>
#include <string>
#include <vector>

#include "gllc/model_config.h"
#include "gllc/weights.h"

namespace gllc {

// MSE-targeted rate slots; the three lowest use 128 filters, the rest 256.
inline constexpr std::array<double, 7> kMseLambdas = {
    0.0016, 0.0032, 0.0075, 0.015, 0.023, 0.03, 0.045};
// Filter count for one of the MSE rate slots; ConfigError otherwise.
int filters_for_lambda(double lambda);

struct Metrics {
  double psnr_db = 0.0;
  double msssim = 0.0;
  double msssim_db = 0.0;
  double bpp = 0.0;
  double enc_ms = 0.0;
  double dec_ms = 0.0;
};

struct RdRow {
  std::string image;
  double lambda = 0.0;
  int filters = 0;
  Metrics metrics;
};

// Compress → decompress → metrics for one PNG.
Metrics rd_point(const std::string& image_path, const WeightStore& w,
                 const ModelConfig& cfg);
Metrics rd_point(const std::string& image_path,
                 const std::string& weights_path, const ModelConfig& cfg);

struct WeightConfig {
  std::string weights_path;
  ModelConfig config;
};

struct RdCurve {
  std::vector<RdRow> rows;           // sorted by bpp
  std::vector<std::string> errors;   // per-file failures, run continues
};

// Every PNG in `dataset_dir` under every weight configuration.
RdCurve rd_curve(const std::string& dataset_dir,
                 const std::vector<WeightConfig>& configs);

// Mean of per-image metrics for each (lambda, filters) configuration.
std::vector<RdRow> average_by_config(const std::vector<RdRow>& rows);

inline constexpr const char* kRdCsvHeader =
    "image,lambda,filters,bpp,psnr_db,msssim,msssim_db,enc_ms,dec_ms";
std::string rd_csv_row(const RdRow& row);
std::string rd_csv(const std::vector<RdRow>& rows);
// Single-point JSON object for `eval`.
std::string rd_json(const RdRow& row);

}  // namespace gllc

#endif  // GLLC_HARNESS_H_
