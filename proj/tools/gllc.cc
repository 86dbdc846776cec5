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

// gllc: command-line front end for the codec, fitting and R-D harness.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gllc/bytes.h"
#include "gllc/codec.h"
#include "gllc/error.h"
#include "gllc/fitting.h"
#include "gllc/harness.h"
#include "gllc/image.h"
#include "gllc/metrics.h"
#include "gllc/network.h"
#include "gllc/weights.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Options {
  std::string input;
  std::string output;
  std::string weights;
  std::string config;
  uint64_t seed = 1;
  double lambda = -1.0;
  int filters = 0;
  int crm_stages = 0;
  std::string families;
};

// Thrown for semantic usage problems discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

gllc::ModelConfig apply_overrides(gllc::ModelConfig cfg, const Options& o,
                                  bool use_families) {
  if (o.lambda >= 0.0) cfg.lambda = o.lambda;
  if (o.filters > 0) {
    cfg.latent_channels = o.filters;
    cfg.hyper_channels = o.filters;
  }
  if (o.crm_stages > 0) cfg.crm_stages = o.crm_stages;
  if (use_families && !o.families.empty()) {
    const auto names = split(o.families);
    if (names.size() != 1) throw UsageError("--families takes one name here");
    cfg.mixture = gllc::family_config(names[0]).counts;
  }
  cfg.validate();
  return cfg;
}

gllc::ModelConfig model_config(const Options& o) {
  gllc::ModelConfig cfg;
  if (!o.config.empty()) cfg = gllc::ModelConfig::load(o.config);
  return apply_overrides(cfg, o, true);
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  gllc::write_file(path, std::span<const uint8_t>(
                             reinterpret_cast<const uint8_t*>(text.data()),
                             text.size()));
}

int cmd_init_weights(const Options& o) {
  require(o.output, "--output");
  const gllc::ModelConfig cfg = model_config(o);
  const gllc::WeightStore w = gllc::init_random(cfg, o.seed);
  gllc::save_weights(w, o.output);
  std::fprintf(stderr, "wrote %zu parameters to %s\n", w.parameter_count(),
               o.output.c_str());
  return kExitOk;
}

int cmd_encode(const Options& o) {
  require(o.input, "--input");
  require(o.output, "--output");
  require(o.weights, "--weights");
  const gllc::ModelConfig cfg = model_config(o);
  const gllc::WeightStore w = gllc::load_weights(o.weights, cfg);
  const gllc::CompressResult r = gllc::compress(gllc::read_png(o.input), w, cfg);
  for (const auto& msg : r.warnings) std::fprintf(stderr, "warning: %s\n", msg.c_str());
  gllc::write_file(o.output, r.bytes);
  std::fprintf(stderr, "%zu bytes, %.4f bpp\n", r.bytes.size(), r.bpp);
  return kExitOk;
}

int cmd_decode(const Options& o) {
  require(o.input, "--input");
  require(o.output, "--output");
  require(o.weights, "--weights");
  const gllc::ModelConfig cfg = model_config(o);
  const gllc::WeightStore w = gllc::load_weights(o.weights, cfg);
  const auto bytes = gllc::read_file(o.input);
  gllc::write_png(o.output, gllc::decompress(bytes, w, cfg).image);
  return kExitOk;
}

int cmd_eval(const Options& o) {
  require(o.input, "--input");
  require(o.weights, "--weights");
  const gllc::ModelConfig cfg = model_config(o);
  gllc::RdRow row;
  row.image = std::filesystem::path(o.input).filename().string();
  row.lambda = cfg.lambda;
  row.filters = cfg.latent_channels;
  row.metrics = gllc::rd_point(o.input, o.weights, cfg);
  write_text(o.output, gllc::rd_json(row) + "\n");
  return kExitOk;
}

nlohmann::ordered_json params_json(const gllc::GllmmParams& p) {
  static const char* kNames[] = {"gaussian", "laplacian", "logistic"};
  nlohmann::ordered_json j;
  for (int f = 0; f < gllc::kNumFamilies; ++f) {
    nlohmann::ordered_json fam;
    fam["prob"] = p.family_prob[f];
    fam["components"] = nlohmann::json::array();
    for (const auto& c : p.components[f]) {
      fam["components"].push_back(
          {{"weight", c.weight}, {"mean", c.mean}, {"scale", c.scale}});
    }
    j[kNames[f]] = fam;
  }
  return j;
}

std::vector<int32_t> load_samples(const std::string& input, uint64_t seed) {
  namespace fs = std::filesystem;
  const auto names = gllc::source_names();
  if (!fs::exists(input) &&
      std::find(names.begin(), names.end(), input) != names.end()) {
    return gllc::generate_source({input, 50000, seed});
  }
  return gllc::read_samples(input);
}

int cmd_fit(const Options& o) {
  require(o.input, "--input");
  const auto samples = load_samples(o.input, o.seed);
  gllc::FitConfig fc;
  fc.seed = o.seed;
  fc.counts = gllc::family_config(o.families.empty() ? "GLLMM" : o.families).counts;
  const gllc::FitResult r = gllc::fit_mixture(samples, fc);
  nlohmann::ordered_json j;
  j["family"] = o.families.empty() ? "GLLMM" : o.families;
  j["bits_per_symbol"] = r.bits_per_symbol;
  j["histogram_entropy"] = gllc::histogram_entropy(samples);
  j["n_samples"] = samples.size();
  j["iterations"] = r.iterations;
  j["restart"] = r.restart;
  j["params"] = params_json(r.params);
  write_text(o.output, j.dump(2) + "\n");
  return kExitOk;
}

std::vector<std::string> png_inputs(const std::string& input) {
  namespace fs = std::filesystem;
  std::vector<std::string> out;
  if (fs::is_directory(input)) {
    for (const auto& e : fs::directory_iterator(input)) {
      if (e.is_regular_file() && e.path().extension() == ".png") {
        out.push_back(e.path().string());
      }
    }
    std::sort(out.begin(), out.end());
  } else {
    out.push_back(input);
  }
  if (out.empty()) throw gllc::IoError("no PNG files in " + input);
  return out;
}

// Refits the factorized prior of ẑ on the given images and writes the
// updated weights.
int cmd_fit_hyper(const Options& o) {
  require(o.input, "--input");
  require(o.weights, "--weights");
  require(o.output, "--output");
  const gllc::ModelConfig cfg = model_config(o);
  gllc::WeightStore w = gllc::load_weights(o.weights, cfg);
  const gllc::Network net(w, cfg);
  std::vector<std::vector<int32_t>> per_channel(cfg.hyper_channels);
  for (const auto& path : png_inputs(o.input)) {
    const gllc::Image img = gllc::pad_replicate(gllc::read_png(path), gllc::kPadMultiple);
    const gllc::Tensor z = net.hyper_analysis(net.analysis(gllc::normalize(img)));
    const gllc::SymbolTensor zq = gllc::quantize(z, cfg.z_alphabet).symbols;
    for (int c = 0; c < zq.shape.c; ++c) {
      for (int h = 0; h < zq.shape.h; ++h) {
        for (int x = 0; x < zq.shape.w; ++x) per_channel[c].push_back(zq.at(0, c, h, x));
      }
    }
  }
  w.set("factorized.knots",
        gllc::fit_factorized(per_channel, cfg.z_alphabet).to_tensor());
  gllc::save_weights(w, o.output);
  return kExitOk;
}

int cmd_ablate(const Options& o) {
  require(o.input, "--input");
  std::vector<std::string> families = split(o.families);
  if (families.empty()) families = {"GMM", "GLaMM", "GLoMM", "GLLMM"};
  const auto samples = load_samples(o.input, o.seed);
  gllc::FitConfig fc;
  fc.seed = o.seed;
  std::vector<gllc::AblationRow> rows;
  for (const auto& name : families) {
    const gllc::FamilyConfig f = gllc::family_config(name);
    fc.counts = f.counts;
    const gllc::FitResult r = gllc::fit_mixture(samples, fc);
    rows.push_back({o.input, f.name, f.counts, r.bits_per_symbol, samples.size(), o.seed});
  }
  write_text(o.output, gllc::ablation_csv(rows));
  return kExitOk;
}

int cmd_rd_curve(const Options& o) {
  require(o.input, "--input");
  require(o.weights, "--weights");
  const auto weights = split(o.weights);
  const auto configs = split(o.config);
  if (configs.size() > 1 && configs.size() != weights.size()) {
    throw UsageError("--config needs one entry or one per --weights entry");
  }
  std::vector<gllc::WeightConfig> wcs;
  for (size_t i = 0; i < weights.size(); ++i) {
    gllc::ModelConfig cfg;
    if (!configs.empty()) cfg = gllc::ModelConfig::load(configs.size() == 1 ? configs[0] : configs[i]);
    wcs.push_back({weights[i], apply_overrides(cfg, o, true)});
  }
  const gllc::RdCurve curve = gllc::rd_curve(o.input, wcs);
  for (const auto& e : curve.errors) std::fprintf(stderr, "error: %s\n", e.c_str());
  write_text(o.output, gllc::rd_csv(curve.rows));
  return curve.rows.empty() && !curve.errors.empty() ? kExitData : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GLLC learned image codec"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "input path");
    sub->add_option("--output", o.output, "output path");
    sub->add_option("--weights", o.weights, "weight file (GLWS)");
    sub->add_option("--config", o.config, "model config JSON");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--lambda", o.lambda, "rate-distortion trade-off");
    sub->add_option("--filters", o.filters, "latent and hyper channel count");
    sub->add_option("--crm-stages", o.crm_stages, "residual blocks per CRM (2 or 3)");
    sub->add_option("--families", o.families, "GMM, GLaMM, GLoMM or GLLMM");
  };
  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
  };
  const Cmd cmds[] = {
      {"encode", "compress a PNG to a GLLC bitstream", cmd_encode},
      {"decode", "decompress a GLLC bitstream to PNG", cmd_decode},
      {"eval", "round-trip one image and print metrics as JSON", cmd_eval},
      {"init-weights", "write seeded random weights", cmd_init_weights},
      {"fit", "fit a mixture to a sample file or named source", cmd_fit},
      {"fit-hyper", "refit the hyper-latent prior on images", cmd_fit_hyper},
      {"ablate", "compare mixture families on one sample set", cmd_ablate},
      {"rd-curve", "R-D points for a dataset directory as CSV", cmd_rd_curve},
  };
  int (*selected)(const Options&) = nullptr;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub);
    sub->callback([&selected, fn = c.fn] { selected = fn; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  try {
    return selected(o);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const gllc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}
