/*
 * Copyright (c) 2026 tsgraph authors.
 *     All rights reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing,
 *  software distributed under the License is distributed on an "AS
 *  IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
 *  express or implied.  See the License for the specific language
 *  governing permissions and limitations under the License.
 */

// Block-level encoders and decoders: variant integers, zigzag, timestamp
// deltas, DFCM for 64-bit word streams, dictionary coding for strings, and
// the general block compressors layered on top. Codec id bytes are part of
// the on-disk format and must not change.

#ifndef TSGRAPH_CODEC_HPP
#define TSGRAPH_CODEC_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsgraph/errors.hpp"

namespace tsgraph::codec {

// On-disk codec id bytes (bit-exact, written into block headers).
enum class ColumnCodec : uint8_t {
  kNone = 0x00,
  kVarint = 0x01,
  kZigzagVarint = 0x02,
  kDeltaTs = 0x03,
  kDfcm = 0x04,
  kDict = 0x05,
};

enum class GeneralCodec : uint8_t {
  kNone = 0x00,
  kDeflate = 0x01,
  kZstd = 0x02,
};

const char* column_codec_name(ColumnCodec c);
const char* general_codec_name(GeneralCodec c);
ColumnCodec column_codec_from_byte(uint8_t b);
GeneralCodec general_codec_from_byte(uint8_t b);
GeneralCodec general_codec_from_name(const std::string& name);

using Bytes = std::vector<uint8_t>;

// ---------------------------------------------------------------------------
// LEB128 variant integers: 7 payload bits per byte, continuation bit set on
// all but the last byte.
// ---------------------------------------------------------------------------

void varint_append(Bytes& out, uint64_t v);
Bytes varint_encode(std::span<const uint64_t> values);

// Reads one varint starting at `pos`, advances `pos`.
uint64_t varint_read(std::span<const uint8_t> in, size_t& pos);
std::vector<uint64_t> varint_decode(std::span<const uint8_t> in);
std::vector<uint64_t> varint_decode_n(std::span<const uint8_t> in, size_t& pos,
                                      size_t n);
size_t varint_size(uint64_t v);

// ---------------------------------------------------------------------------
// Zigzag bijection between signed and unsigned 64-bit.
// ---------------------------------------------------------------------------

inline uint64_t zigzag_encode(int64_t v) {
  return (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
}

inline int64_t zigzag_decode(uint64_t v) {
  return static_cast<int64_t>(v >> 1) ^ -static_cast<int64_t>(v & 1);
}

// ---------------------------------------------------------------------------
// Timestamp delta coding: first value as a full little-endian 64-bit word,
// the rest as varint deltas from the previous value. Input must be
// non-decreasing; a decreasing pair is a writer bug.
// ---------------------------------------------------------------------------

struct DeltaTs {
  uint64_t base = 0;
  Bytes deltas;  // concatenated varints, one per remaining value
};

DeltaTs delta_ts_encode(std::span<const uint64_t> values);

// Single-buffer form: [u64 base LE][varint deltas...]; value count is
// supplied by the caller (block headers record it via raw_len).
Bytes delta_ts_encode_block(std::span<const uint64_t> values);
std::vector<uint64_t> delta_ts_decode_block(std::span<const uint8_t> in,
                                            size_t count);

// ---------------------------------------------------------------------------
// DFCM: predictor-based coding of 64-bit word streams (long and double
// columns use their raw bit patterns).
//
// Per value the encoder XORs the true word with the better of two
// predictions (FCM on values, DCM on deltas) and emits one header byte:
//   bit 7      predictor selector, 0 = FCM, 1 = DCM
//   bits 6..4  leading-zero-byte count of the XOR, clamped to 7
//   bits 3..0  reserved, 0
// followed by the (8 - count) low-order residual bytes, little-endian.
// count=7 followed by a single 0x00 byte encodes a perfect 8-byte match.
// Ties between predictors select FCM.
// ---------------------------------------------------------------------------

struct DfcmConfig {
  unsigned table_bits = 16;  // each predictor table has 2^table_bits entries
};

class DfcmState {
 public:
  explicit DfcmState(const DfcmConfig& cfg = {});

  // Both predictions for the next value, given the current state.
  uint64_t predict_fcm() const;
  uint64_t predict_dcm() const;

  // Advances the state with the true value. Encoder and decoder call this
  // identically, so equal prefixes yield equal states.
  void update(uint64_t value);

  // Checksum over the predictor tables and registers; used by tests to
  // verify encoder/decoder state equality.
  uint64_t state_checksum() const;

 private:
  std::vector<uint64_t> fcm_table_;
  std::vector<uint64_t> dcm_table_;
  uint64_t mask_ = 0;
  uint64_t fcm_hash_ = 0;
  uint64_t dcm_hash_ = 0;
  uint64_t last_value_ = 0;
};

Bytes dfcm_encode(std::span<const uint64_t> values, const DfcmConfig& cfg = {});
std::vector<uint64_t> dfcm_decode(std::span<const uint8_t> in, size_t count,
                                  const DfcmConfig& cfg = {});

Bytes dfcm_encode_doubles(std::span<const double> values,
                          const DfcmConfig& cfg = {});
std::vector<double> dfcm_decode_doubles(std::span<const uint8_t> in,
                                        size_t count,
                                        const DfcmConfig& cfg = {});

// ---------------------------------------------------------------------------
// Dictionary coding for strings: distinct values in first-occurrence order
// plus one varint code per input value.
// ---------------------------------------------------------------------------

struct DictEncoded {
  std::vector<std::string> dictionary;
  std::vector<uint64_t> codes;
};

DictEncoded dict_encode(std::span<const std::string> values);
std::vector<std::string> dict_decode(const DictEncoded& enc);

// Single-buffer form:
// [varint dict_size][dict entries: varint len + bytes]
// [varint value_count][varint codes...]
Bytes dict_encode_block(std::span<const std::string> values);
std::vector<std::string> dict_decode_block(std::span<const uint8_t> in);

// ---------------------------------------------------------------------------
// General block compression. NONE is the identity; DEFLATE is zlib;
// ZSTD emits standard zstd frames. Decompression requires the decoded
// length, which block headers record.
// ---------------------------------------------------------------------------

bool general_codec_supported(GeneralCodec c);
Bytes general_compress(std::span<const uint8_t> block, GeneralCodec c);
Bytes general_decompress(std::span<const uint8_t> block, GeneralCodec c,
                         size_t raw_len);

// ---------------------------------------------------------------------------
// EncodedBlock: one column codec pass plus one general pass over a value
// block, as stored in files.
// ---------------------------------------------------------------------------

struct EncodedBlock {
  ColumnCodec codec = ColumnCodec::kNone;
  GeneralCodec general = GeneralCodec::kNone;
  uint32_t raw_len = 0;  // byte length before general compression
  Bytes payload;
};

// ---------------------------------------------------------------------------
// Codec benchmark: deterministic (codec, encode ms, decode ms, ratio) rows
// for one column of values.
// ---------------------------------------------------------------------------

struct BenchColumn {
  // Exactly one of these carries the data, matching `type`.
  std::string type;  // "ts" | "int" | "long" | "double" | "string"
  std::vector<uint64_t> u64s;    // ts
  std::vector<int64_t> i64s;     // int / long
  std::vector<double> doubles;   // double
  std::vector<std::string> strs; // string
};

struct BenchRow {
  std::string codec;       // e.g. "delta_ts+zstd"
  double encode_ms = 0;
  double decode_ms = 0;
  uint64_t raw_bytes = 0;
  uint64_t encoded_bytes = 0;
  double ratio = 0;  // encoded / raw
};

struct BenchSpec {
  ColumnCodec codec = ColumnCodec::kNone;
  GeneralCodec general = GeneralCodec::kNone;
};

// Parses "delta_ts", "dfcm+zstd", "none+deflate", ... Throws
// UnsupportedCodec for unknown names.
BenchSpec bench_spec_parse(const std::string& text);

std::vector<BenchRow> bench_codecs(const BenchColumn& column,
                                   std::span<const BenchSpec> specs,
                                   size_t block_size);

}  // namespace tsgraph::codec

#endif  // TSGRAPH_CODEC_HPP
