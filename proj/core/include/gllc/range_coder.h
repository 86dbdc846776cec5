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

#ifndef GLLC_RANGE_CODER_H_
#define GLLC_RANGE_CODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include "gllc/entropy.h"

namespace gllc {

inline constexpr int kProbBits = 16;
inline constexpr uint32_t kProbTotal = 1u << kProbBits;

// Integer cumulative frequencies: cum[0] = 0, cum.back() = 2^16, strictly
// increasing, one entry per symbol plus one.
struct CdfTable {
  int min_symbol = 0;
  std::vector<uint32_t> cum;

  int symbols() const { return static_cast<int>(cum.size()) - 1; }
  int max_symbol() const { return min_symbol + symbols() - 1; }
  uint32_t freq(int symbol) const {
    const int i = symbol - min_symbol;
    return cum[i + 1] - cum[i];
  }
  void validate() const;

  friend bool operator==(const CdfTable&, const CdfTable&) = default;
};

// Largest-remainder rounding of the pmf to a 2^16 total, then every empty
// bin is lifted to 1 by taking from the currently largest bin.
CdfTable build_table(const Pmf& pmf);

// Ideal code length of `symbol` under the integer table.
double table_bits(const CdfTable& table, int symbol);

// Byte-oriented range encoder: 32-bit range, 33-bit low with a pending
// carry byte, renormalizing whenever range drops below 2^24. The flush emits
// a single byte.
class RangeEncoder {
 public:
  // Throws std::out_of_range when the symbol is not in the table.
  void encode(int symbol, const CdfTable& table);
  // Flushes and returns the payload; the encoder must not be reused.
  std::vector<uint8_t> finish();

  size_t symbols_encoded() const { return count_; }

 private:
  void shift_low();

  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
  size_t count_ = 0;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
 public:
  explicit RangeDecoder(std::span<const uint8_t> data) : data_(data) {}

  // Throws DecodeError when the payload ends early.
  int decode(const CdfTable& table);

 private:
  uint8_t next_byte();

  std::span<const uint8_t> data_;
  size_t pos_ = 0;
  bool started_ = false;
  uint32_t code_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
};

// Symbol i is coded with tables[i]. An empty symbol list yields an empty
// payload.
std::vector<uint8_t> encode_stream(std::span<const int32_t> symbols,
                                   std::span<const CdfTable> tables);
std::vector<int32_t> decode_stream(std::span<const uint8_t> bytes,
                                   std::span<const CdfTable> tables);

}  // namespace gllc

#endif  // GLLC_RANGE_CODER_H_
