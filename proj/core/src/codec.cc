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

#include "gllc/codec.h"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "gllc/bytes.h"
#include "gllc/entropy.h"
#include "gllc/error.h"
#include "gllc/network.h"

namespace gllc {
namespace {

constexpr char kMagic[4] = {'G', 'L', 'L', 'C'};
constexpr double kClampWarnRate = 0.10;

// Called per latent element during the serial pass. Returns the symbol at
// (site, channel): the encoder codes and returns the known value, the
// decoder returns what it decodes.
using SiteCoder = std::function<int(int site, int channel, const Pmf& pmf,
                                    const CdfTable& table)>;

// Raster-serial pass over the latent grid. `y_real` holds already-coded
// values; entries at or after the current site are never read.
void serial_pass(const Network& net, const Tensor& hyper, SymbolTensor& y_sym,
                 Tensor& y_real, const SiteCoder& code,
                 const TableObserver& observer) {
  const ModelConfig& cfg = net.config();
  const Shape s = y_sym.shape;
  const int cy = cfg.latent_channels;
  std::vector<float> ctx(2 * cy), hyp(2 * cy), raw(net.head_output_channels());
  std::vector<GllmmParams> params(cy);
  for (int h = 0; h < s.h; ++h) {
    for (int w = 0; w < s.w; ++w) {
      const int site = h * s.w + w;
      net.context_site(y_real, 0, h, w, ctx);
      for (int c = 0; c < 2 * cy; ++c) hyp[c] = hyper.at(0, c, h, w);
      net.head_site(ctx, hyp, raw);
      net.site_params(raw, params);
      for (int c = 0; c < cy; ++c) {
        const Pmf pmf = discretized_pmf(params[c], cfg.y_alphabet);
        const CdfTable table = build_table(pmf);
        if (observer) observer(site, c, table);
        const int v = code(site, c, pmf, table);
        y_sym.at(0, c, h, w) = v;
        y_real.at(0, c, h, w) = static_cast<float>(v);
      }
    }
  }
}

std::vector<CdfTable> hyper_tables(const FactorizedModel& model,
                                   std::vector<Pmf>* pmfs) {
  std::vector<CdfTable> tables;
  for (int c = 0; c < model.channels(); ++c) {
    Pmf p = factorized_pmf(model, c);
    tables.push_back(build_table(p));
    if (pmfs) pmfs->push_back(std::move(p));
  }
  return tables;
}

FactorizedModel load_factorized(const WeightStore& w, const ModelConfig& cfg) {
  return FactorizedModel::from_tensor(w.get("factorized.knots"), cfg.z_alphabet);
}

void check_symbols(const SymbolTensor& t, const Shape& expected,
                   const char* what) {
  if (t.shape != expected || t.data.size() != expected.size()) {
    throw ShapeError(std::string(what) + " has shape " + t.shape.str() +
                     ", expected " + expected.str());
  }
}

}  // namespace

std::vector<uint8_t> Bitstream::serialize() const {
  ByteWriter out;
  out.bytes(std::span<const uint8_t>(reinterpret_cast<const uint8_t*>(kMagic), 4));
  out.u8(kBitstreamVersion);
  out.u32(width);
  out.u32(height);
  out.u8(channels);
  out.u64(fingerprint);
  out.i16(static_cast<int16_t>(y_alphabet.min));
  out.i16(static_cast<int16_t>(y_alphabet.max));
  out.i16(static_cast<int16_t>(z_alphabet.min));
  out.i16(static_cast<int16_t>(z_alphabet.max));
  out.u32(static_cast<uint32_t>(z_payload.size()));
  out.bytes(z_payload);
  out.u32(static_cast<uint32_t>(y_payload.size()));
  out.bytes(y_payload);
  out.u32(crc32(out.buffer()));
  return out.take();
}

Bitstream Bitstream::parse(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 + 1 + 4 + 4 + 1 + 8 + 8 + 4 + 4 + 4) {
    throw FormatError("bitstream too short");
  }
  const auto body = bytes.first(bytes.size() - 4);
  ByteReader tail(bytes.last(4));
  if (crc32(body) != tail.u32()) throw FormatError("bitstream CRC mismatch");
  ByteReader in(body);
  const auto magic = in.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic)) {
    throw FormatError("not a GLLC bitstream");
  }
  const uint8_t version = in.u8();
  if (version != kBitstreamVersion) {
    throw FormatError("unsupported bitstream version " + std::to_string(version));
  }
  Bitstream b;
  b.width = in.u32();
  b.height = in.u32();
  b.channels = in.u8();
  b.fingerprint = in.u64();
  b.y_alphabet.min = in.i16();
  b.y_alphabet.max = in.i16();
  b.z_alphabet.min = in.i16();
  b.z_alphabet.max = in.i16();
  const uint32_t zlen = in.u32();
  const auto z = in.bytes(zlen);
  b.z_payload.assign(z.begin(), z.end());
  const uint32_t ylen = in.u32();
  const auto y = in.bytes(ylen);
  b.y_payload.assign(y.begin(), y.end());
  if (in.remaining() != 0) throw FormatError("trailing bytes after payloads");
  if (b.width == 0 || b.height == 0) throw FormatError("empty image in header");
  return b;
}

Shape latent_shape(const ModelConfig& cfg, int width, int height) {
  const int pw = (width + kPadMultiple - 1) / kPadMultiple * kPadMultiple;
  const int ph = (height + kPadMultiple - 1) / kPadMultiple * kPadMultiple;
  return {1, cfg.latent_channels, ph / 16, pw / 16};
}

Shape hyper_latent_shape(const ModelConfig& cfg, int width, int height) {
  const Shape y = latent_shape(cfg, width, height);
  return {1, cfg.hyper_channels, y.h / 4, y.w / 4};
}

CompressResult compress(const Image& image, const WeightStore& w,
                        const ModelConfig& cfg, const TableObserver& observer) {
  if (image.empty()) throw ShapeError("cannot compress an empty image");
  if (image.channels != 3) throw ShapeError("compress expects an RGB image");
  const Network net(w, cfg);
  const Tensor x = normalize(pad_replicate(image, kPadMultiple));
  const Tensor y = net.analysis(x);
  const Tensor z = net.hyper_analysis(y);
  const Quantized yq = quantize(y, cfg.y_alphabet);
  const Quantized zq = quantize(z, cfg.z_alphabet);
  CompressResult r = encode_latents(yq.symbols, zq.symbols, image.width,
                                    image.height, w, cfg, observer);
  r.clamped = yq.clamped + zq.clamped;
  const double rate = static_cast<double>(r.clamped) /
                      static_cast<double>(y.size() + z.size());
  if (rate > kClampWarnRate) {
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "%.1f%% of latent values were clamped to the alphabet",
                  100.0 * rate);
    r.warnings.emplace_back(buf);
  }
  return r;
}

CompressResult encode_latents(const SymbolTensor& y_hat,
                              const SymbolTensor& z_hat, int width, int height,
                              const WeightStore& w, const ModelConfig& cfg,
                              const TableObserver& observer) {
  const Network net(w, cfg);
  check_symbols(y_hat, latent_shape(cfg, width, height), "y_hat");
  check_symbols(z_hat, hyper_latent_shape(cfg, width, height), "z_hat");

  CompressResult r;
  std::vector<Pmf> zpmfs;
  const auto ztables = hyper_tables(load_factorized(w, cfg), &zpmfs);
  RangeEncoder zenc;
  const Shape zs = z_hat.shape;
  for (int c = 0; c < zs.c; ++c) {
    for (int h = 0; h < zs.h; ++h) {
      for (int x = 0; x < zs.w; ++x) {
        const int v = z_hat.at(0, c, h, x);
        zenc.encode(v, ztables[c]);
        r.estimated_z_bits += symbol_bits(zpmfs[c], v);
      }
    }
  }

  const Tensor hyper = net.hyper_synthesis(z_hat.to_real());
  SymbolTensor y_sym(y_hat.shape);
  Tensor y_real(y_hat.shape);
  RangeEncoder yenc;
  serial_pass(net, hyper, y_sym, y_real,
              [&](int site, int c, const Pmf& pmf, const CdfTable& table) {
                const int v = y_hat.at(0, c, site / y_hat.shape.w,
                                       site % y_hat.shape.w);
                yenc.encode(v, table);
                r.estimated_y_bits += symbol_bits(pmf, v);
                return v;
              },
              observer);

  Bitstream bs;
  bs.width = static_cast<uint32_t>(width);
  bs.height = static_cast<uint32_t>(height);
  bs.channels = 3;
  bs.fingerprint = cfg.fingerprint();
  bs.y_alphabet = cfg.y_alphabet;
  bs.z_alphabet = cfg.z_alphabet;
  bs.z_payload = zenc.finish();
  bs.y_payload = yenc.finish();
  r.bytes = bs.serialize();
  r.y_hat = y_hat;
  r.z_hat = z_hat;
  r.bpp = 8.0 * static_cast<double>(r.bytes.size()) /
          (static_cast<double>(width) * height);
  return r;
}

DecompressResult decode_latents(std::span<const uint8_t> bytes,
                                const WeightStore& w, const ModelConfig& cfg,
                                const TableObserver& observer) {
  const Bitstream bs = Bitstream::parse(bytes);
  if (bs.fingerprint != cfg.fingerprint()) {
    throw DecodeError("bitstream was produced with a different model config");
  }
  if (bs.y_alphabet != cfg.y_alphabet || bs.z_alphabet != cfg.z_alphabet) {
    throw DecodeError("bitstream alphabets do not match the model config");
  }
  if (bs.channels != 3) throw DecodeError("unsupported channel count");
  const Network net(w, cfg);
  const int width = static_cast<int>(bs.width);
  const int height = static_cast<int>(bs.height);

  DecompressResult r;
  r.z_hat = SymbolTensor(hyper_latent_shape(cfg, width, height));
  const auto ztables = hyper_tables(load_factorized(w, cfg), nullptr);
  RangeDecoder zdec(bs.z_payload);
  const Shape zs = r.z_hat.shape;
  for (int c = 0; c < zs.c; ++c) {
    for (int h = 0; h < zs.h; ++h) {
      for (int x = 0; x < zs.w; ++x) r.z_hat.at(0, c, h, x) = zdec.decode(ztables[c]);
    }
  }

  const Tensor hyper = net.hyper_synthesis(r.z_hat.to_real());
  r.y_hat = SymbolTensor(latent_shape(cfg, width, height));
  Tensor y_real(r.y_hat.shape);
  RangeDecoder ydec(bs.y_payload);
  serial_pass(net, hyper, r.y_hat, y_real,
              [&](int, int, const Pmf&, const CdfTable& table) {
                return ydec.decode(table);
              },
              observer);
  return r;
}

DecompressResult decompress(std::span<const uint8_t> bytes,
                            const WeightStore& w, const ModelConfig& cfg,
                            const TableObserver& observer) {
  DecompressResult r = decode_latents(bytes, w, cfg, observer);
  const Bitstream bs = Bitstream::parse(bytes);
  const Network net(w, cfg);
  const Image full = denormalize(net.synthesis(r.y_hat.to_real()));
  r.image = crop(full, static_cast<int>(bs.width), static_cast<int>(bs.height));
  return r;
}

}  // namespace gllc
