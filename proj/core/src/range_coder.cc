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

#include "gllc/range_coder.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "gllc/error.h"

namespace gllc {
namespace {

constexpr uint32_t kTop = 1u << 24;
constexpr size_t kImplicitZeros = 3;

}  // namespace

void CdfTable::validate() const {
  if (cum.size() < 2) throw FormatError("cdf table needs at least one symbol");
  if (cum.front() != 0 || cum.back() != kProbTotal) {
    throw FormatError("cdf table must run from 0 to 2^16");
  }
  for (size_t i = 1; i < cum.size(); ++i) {
    if (cum[i] <= cum[i - 1]) throw FormatError("cdf table not strictly increasing");
  }
}

CdfTable build_table(const Pmf& pmf) {
  const size_t n = pmf.prob.size();
  if (n == 0) throw ParamError("cannot build a table for an empty pmf");
  if (n > kProbTotal) {
    throw ConfigError("alphabet of " + std::to_string(n) +
                      " symbols exceeds 16-bit precision");
  }
  double total = 0.0;
  for (double p : pmf.prob) total += std::max(p, 0.0);
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw ParamError("pmf has no positive finite mass");
  }

  std::vector<int64_t> freq(n);
  std::vector<double> rem(n);
  int64_t assigned = 0;
  for (size_t i = 0; i < n; ++i) {
    const double scaled = std::max(pmf.prob[i], 0.0) / total * kProbTotal;
    const double fl = std::floor(scaled);
    freq[i] = static_cast<int64_t>(fl);
    rem[i] = scaled - fl;
    assigned += freq[i];
  }

  // Largest remainder; ties go to the lower symbol.
  int64_t deficit = static_cast<int64_t>(kProbTotal) - assigned;
  if (deficit != 0) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (deficit > 0) {
      std::stable_sort(order.begin(), order.end(),
                       [&](size_t a, size_t b) { return rem[a] > rem[b]; });
      for (size_t k = 0; deficit > 0; k = (k + 1) % n, --deficit) ++freq[order[k]];
    } else {
      std::stable_sort(order.begin(), order.end(),
                       [&](size_t a, size_t b) { return rem[a] < rem[b]; });
      for (size_t k = 0; deficit < 0; k = (k + 1) % n) {
        if (freq[order[k]] > 0) {
          --freq[order[k]];
          ++deficit;
        }
      }
    }
  }

  // Lift empty bins to 1, each time taking from the current largest bin
  // (lowest index on ties).
  auto cmp = [&](size_t a, size_t b) {
    return freq[a] != freq[b] ? freq[a] < freq[b] : a > b;
  };
  std::priority_queue<size_t, std::vector<size_t>, decltype(cmp)> heap(cmp);
  size_t zeros = 0;
  for (size_t i = 0; i < n; ++i) {
    if (freq[i] > 0) {
      heap.push(i);
    } else {
      ++zeros;
    }
  }
  for (size_t i = 0; i < n && zeros > 0; ++i) {
    if (freq[i] != 0) continue;
    const size_t big = heap.top();
    heap.pop();
    --freq[big];
    heap.push(big);
    freq[i] = 1;
    --zeros;
  }

  CdfTable t;
  t.min_symbol = pmf.min_symbol;
  t.cum.resize(n + 1);
  t.cum[0] = 0;
  for (size_t i = 0; i < n; ++i) t.cum[i + 1] = t.cum[i] + static_cast<uint32_t>(freq[i]);
  return t;
}

double table_bits(const CdfTable& table, int symbol) {
  if (symbol < table.min_symbol || symbol > table.max_symbol()) {
    throw std::out_of_range("symbol outside cdf table");
  }
  return kProbBits - std::log2(static_cast<double>(table.freq(symbol)));
}

void RangeEncoder::shift_low() {
  if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const uint8_t carry = static_cast<uint8_t>(low_ >> 32);
    uint8_t temp = cache_;
    do {
      out_.push_back(static_cast<uint8_t>(temp + carry));
      temp = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<uint8_t>(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

void RangeEncoder::encode(int symbol, const CdfTable& table) {
  if (symbol < table.min_symbol || symbol > table.max_symbol()) {
    throw std::out_of_range("symbol " + std::to_string(symbol) +
                            " outside cdf table");
  }
  const size_t i = symbol - table.min_symbol;
  const uint32_t lo = table.cum[i];
  const uint32_t hi = table.cum[i + 1];
  const uint32_t r = range_ >> kProbBits;
  low_ += static_cast<uint64_t>(r) * lo;
  // The top symbol takes the truncation remainder.
  range_ = hi == kProbTotal ? range_ - r * lo : r * (hi - lo);
  while (range_ < kTop) {
    range_ <<= 8;
    shift_low();
  }
  ++count_;
}

std::vector<uint8_t> RangeEncoder::finish() {
  if (count_ == 0) return {};
  // range >= 2^24 here, so [low, low + range) holds a multiple of 2^24 and
  // its top byte alone identifies the final interval. The decoder reads the
  // three omitted low bytes as zeros.
  low_ = (low_ + kTop - 1) & ~static_cast<uint64_t>(kTop - 1);
  shift_low();
  shift_low();
  // The first byte is the initial cache and can never receive a carry.
  out_.erase(out_.begin());
  return std::move(out_);
}

uint8_t RangeDecoder::next_byte() {
  if (pos_ < data_.size()) return data_[pos_++];
  // A complete payload is always read exactly kImplicitZeros bytes past its
  // end; anything further means it was truncated.
  if (pos_ - data_.size() >= kImplicitZeros) {
    throw DecodeError("range coder payload ended early");
  }
  ++pos_;
  return 0;
}

int RangeDecoder::decode(const CdfTable& table) {
  if (!started_) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
    started_ = true;
  }
  const uint32_t r = range_ >> kProbBits;
  const uint32_t v = std::min<uint32_t>(code_ / r, kProbTotal - 1);
  const auto it = std::upper_bound(table.cum.begin() + 1, table.cum.end(), v);
  const size_t i = static_cast<size_t>(it - table.cum.begin()) - 1;
  const uint32_t lo = table.cum[i];
  const uint32_t hi = table.cum[i + 1];
  code_ -= r * lo;
  range_ = hi == kProbTotal ? range_ - r * lo : r * (hi - lo);
  while (range_ < kTop) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return table.min_symbol + static_cast<int>(i);
}

std::vector<uint8_t> encode_stream(std::span<const int32_t> symbols,
                                   std::span<const CdfTable> tables) {
  if (symbols.size() != tables.size()) {
    throw std::invalid_argument("encode_stream needs one table per symbol");
  }
  RangeEncoder enc;
  for (size_t i = 0; i < symbols.size(); ++i) enc.encode(symbols[i], tables[i]);
  return enc.finish();
}

std::vector<int32_t> decode_stream(std::span<const uint8_t> bytes,
                                   std::span<const CdfTable> tables) {
  RangeDecoder dec(bytes);
  std::vector<int32_t> out(tables.size());
  for (size_t i = 0; i < tables.size(); ++i) out[i] = dec.decode(tables[i]);
  return out;
}

}  // namespace gllc
