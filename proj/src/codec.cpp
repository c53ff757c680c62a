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

#include "tsgraph/codec.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstring>
#include <unordered_map>

#if TSGRAPH_HAVE_ZSTD
extern "C" {
size_t ZSTD_compressBound(size_t srcSize);
unsigned ZSTD_isError(size_t code);
size_t ZSTD_compress(void* dst, size_t dstCapacity, const void* src,
                     size_t srcSize, int level);
size_t ZSTD_decompress(void* dst, size_t dstCapacity, const void* src,
                       size_t srcSize);
}
#endif

namespace tsgraph::codec {

const char* column_codec_name(ColumnCodec c) {
  switch (c) {
    case ColumnCodec::kNone: return "none";
    case ColumnCodec::kVarint: return "varint";
    case ColumnCodec::kZigzagVarint: return "zigzag_varint";
    case ColumnCodec::kDeltaTs: return "delta_ts";
    case ColumnCodec::kDfcm: return "dfcm";
    case ColumnCodec::kDict: return "dict";
  }
  return "?";
}

const char* general_codec_name(GeneralCodec c) {
  switch (c) {
    case GeneralCodec::kNone: return "none";
    case GeneralCodec::kDeflate: return "deflate";
    case GeneralCodec::kZstd: return "zstd";
  }
  return "?";
}

ColumnCodec column_codec_from_byte(uint8_t b) {
  if (b > 0x05) throw UnsupportedCodec("column codec byte " + std::to_string(b));
  return static_cast<ColumnCodec>(b);
}

GeneralCodec general_codec_from_byte(uint8_t b) {
  if (b > 0x02)
    throw UnsupportedCodec("general codec byte " + std::to_string(b));
  return static_cast<GeneralCodec>(b);
}

GeneralCodec general_codec_from_name(const std::string& name) {
  if (name == "none") return GeneralCodec::kNone;
  if (name == "deflate") return GeneralCodec::kDeflate;
  if (name == "zstd") return GeneralCodec::kZstd;
  throw UnsupportedCodec("general codec '" + name + "'");
}

// ---------------------------------------------------------------------------
// Varint
// ---------------------------------------------------------------------------

void varint_append(Bytes& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<uint8_t>(v));
}

size_t varint_size(uint64_t v) {
  size_t n = 1;
  while (v >= 0x80) {
    v >>= 7;
    ++n;
  }
  return n;
}

Bytes varint_encode(std::span<const uint64_t> values) {
  Bytes out;
  out.reserve(values.size());
  for (uint64_t v : values) varint_append(out, v);
  return out;
}

uint64_t varint_read(std::span<const uint8_t> in, size_t& pos) {
  uint64_t v = 0;
  unsigned shift = 0;
  while (true) {
    if (pos >= in.size()) throw TruncatedStream("varint");
    uint8_t b = in[pos++];
    if (shift == 63 && (b & 0x7e) != 0)
      throw CorruptFile("varint exceeds 64 bits");
    v |= static_cast<uint64_t>(b & 0x7f) << shift;
    if ((b & 0x80) == 0) return v;
    shift += 7;
    if (shift > 63) throw CorruptFile("varint exceeds 10 bytes");
  }
}

std::vector<uint64_t> varint_decode(std::span<const uint8_t> in) {
  std::vector<uint64_t> out;
  size_t pos = 0;
  while (pos < in.size()) out.push_back(varint_read(in, pos));
  return out;
}

std::vector<uint64_t> varint_decode_n(std::span<const uint8_t> in, size_t& pos,
                                      size_t n) {
  std::vector<uint64_t> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(varint_read(in, pos));
  return out;
}

// ---------------------------------------------------------------------------
// Timestamp deltas
// ---------------------------------------------------------------------------

namespace {

void append_u64_le(Bytes& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint64_t read_u64_le(std::span<const uint8_t> in, size_t& pos) {
  if (pos + 8 > in.size()) throw TruncatedStream("u64");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

}  // namespace

DeltaTs delta_ts_encode(std::span<const uint64_t> values) {
  if (values.empty()) throw InvalidArgument("delta_ts on empty sequence");
  DeltaTs enc;
  enc.base = values[0];
  uint64_t prev = values[0];
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] < prev)
      throw DecreasingSequence("at position " + std::to_string(i));
    varint_append(enc.deltas, values[i] - prev);
    prev = values[i];
  }
  return enc;
}

Bytes delta_ts_encode_block(std::span<const uint64_t> values) {
  DeltaTs enc = delta_ts_encode(values);
  Bytes out;
  out.reserve(8 + enc.deltas.size());
  append_u64_le(out, enc.base);
  out.insert(out.end(), enc.deltas.begin(), enc.deltas.end());
  return out;
}

std::vector<uint64_t> delta_ts_decode_block(std::span<const uint8_t> in,
                                            size_t count) {
  std::vector<uint64_t> out;
  if (count == 0) return out;
  out.reserve(count);
  size_t pos = 0;
  uint64_t v = read_u64_le(in, pos);
  out.push_back(v);
  for (size_t i = 1; i < count; ++i) {
    v += varint_read(in, pos);
    out.push_back(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// DFCM
// ---------------------------------------------------------------------------

DfcmState::DfcmState(const DfcmConfig& cfg)
    : fcm_table_(size_t{1} << cfg.table_bits, 0),
      dcm_table_(size_t{1} << cfg.table_bits, 0),
      mask_((uint64_t{1} << cfg.table_bits) - 1) {}

uint64_t DfcmState::predict_fcm() const { return fcm_table_[fcm_hash_]; }

uint64_t DfcmState::predict_dcm() const {
  return dcm_table_[dcm_hash_] + last_value_;
}

void DfcmState::update(uint64_t value) {
  fcm_table_[fcm_hash_] = value;
  fcm_hash_ = ((fcm_hash_ << 6) ^ (value >> 48)) & mask_;
  uint64_t delta = value - last_value_;
  dcm_table_[dcm_hash_] = delta;
  dcm_hash_ = ((dcm_hash_ << 6) ^ (delta >> 48)) & mask_;
  last_value_ = value;
}

uint64_t DfcmState::state_checksum() const {
  uint64_t h = 1469598103934665603ull;  // FNV offset basis
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  for (uint64_t v : fcm_table_) mix(v);
  for (uint64_t v : dcm_table_) mix(v);
  mix(fcm_hash_);
  mix(dcm_hash_);
  mix(last_value_);
  return h;
}

namespace {

inline unsigned leading_zero_bytes(uint64_t x) {
  return static_cast<unsigned>(std::countl_zero(x)) / 8;
}

}  // namespace

Bytes dfcm_encode(std::span<const uint64_t> values, const DfcmConfig& cfg) {
  DfcmState state(cfg);
  Bytes out;
  out.reserve(values.size() * 2);
  for (uint64_t v : values) {
    uint64_t xf = v ^ state.predict_fcm();
    uint64_t xd = v ^ state.predict_dcm();
    unsigned lf = leading_zero_bytes(xf);
    unsigned ld = leading_zero_bytes(xd);
    bool use_dcm = ld > lf;  // tie selects FCM
    uint64_t x = use_dcm ? xd : xf;
    unsigned count = std::min(use_dcm ? ld : lf, 7u);
    out.push_back(static_cast<uint8_t>((use_dcm ? 0x80 : 0x00) | (count << 4)));
    // A perfect match (x == 0) falls out naturally: count is 7 and the
    // single residual byte is 0x00.
    for (unsigned i = 0; i < 8 - count; ++i)
      out.push_back(static_cast<uint8_t>(x >> (8 * i)));
    state.update(v);
  }
  return out;
}

std::vector<uint64_t> dfcm_decode(std::span<const uint8_t> in, size_t count,
                                  const DfcmConfig& cfg) {
  DfcmState state(cfg);
  std::vector<uint64_t> out;
  out.reserve(count);
  size_t pos = 0;
  for (size_t i = 0; i < count; ++i) {
    if (pos >= in.size()) throw TruncatedStream("dfcm header");
    uint8_t header = in[pos++];
    if ((header & 0x0f) != 0) throw CorruptFile("dfcm reserved bits set");
    bool use_dcm = (header & 0x80) != 0;
    unsigned zeros = (header >> 4) & 0x07;
    unsigned nbytes = 8 - zeros;
    if (pos + nbytes > in.size()) throw TruncatedStream("dfcm residual");
    uint64_t x = 0;
    for (unsigned b = 0; b < nbytes; ++b)
      x |= static_cast<uint64_t>(in[pos + b]) << (8 * b);
    pos += nbytes;
    uint64_t pred = use_dcm ? state.predict_dcm() : state.predict_fcm();
    uint64_t v = pred ^ x;
    out.push_back(v);
    state.update(v);
  }
  return out;
}

Bytes dfcm_encode_doubles(std::span<const double> values,
                          const DfcmConfig& cfg) {
  std::vector<uint64_t> words(values.size());
  for (size_t i = 0; i < values.size(); ++i)
    words[i] = std::bit_cast<uint64_t>(values[i]);
  return dfcm_encode(words, cfg);
}

std::vector<double> dfcm_decode_doubles(std::span<const uint8_t> in,
                                        size_t count, const DfcmConfig& cfg) {
  std::vector<uint64_t> words = dfcm_decode(in, count, cfg);
  std::vector<double> out(words.size());
  for (size_t i = 0; i < words.size(); ++i)
    out[i] = std::bit_cast<double>(words[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Dictionary
// ---------------------------------------------------------------------------

DictEncoded dict_encode(std::span<const std::string> values) {
  DictEncoded enc;
  std::unordered_map<std::string, uint64_t> index;
  enc.codes.reserve(values.size());
  for (const auto& v : values) {
    auto [it, inserted] = index.try_emplace(v, enc.dictionary.size());
    if (inserted) enc.dictionary.push_back(v);
    enc.codes.push_back(it->second);
  }
  return enc;
}

std::vector<std::string> dict_decode(const DictEncoded& enc) {
  std::vector<std::string> out;
  out.reserve(enc.codes.size());
  for (uint64_t c : enc.codes) {
    if (c >= enc.dictionary.size()) throw CorruptFile("dict code out of range");
    out.push_back(enc.dictionary[c]);
  }
  return out;
}

Bytes dict_encode_block(std::span<const std::string> values) {
  DictEncoded enc = dict_encode(values);
  Bytes out;
  varint_append(out, enc.dictionary.size());
  for (const auto& s : enc.dictionary) {
    varint_append(out, s.size());
    out.insert(out.end(), s.begin(), s.end());
  }
  varint_append(out, enc.codes.size());
  for (uint64_t c : enc.codes) varint_append(out, c);
  return out;
}

std::vector<std::string> dict_decode_block(std::span<const uint8_t> in) {
  size_t pos = 0;
  uint64_t dict_size = varint_read(in, pos);
  DictEncoded enc;
  enc.dictionary.reserve(dict_size);
  for (uint64_t i = 0; i < dict_size; ++i) {
    uint64_t len = varint_read(in, pos);
    if (pos + len > in.size()) throw TruncatedStream("dict entry");
    enc.dictionary.emplace_back(reinterpret_cast<const char*>(in.data() + pos),
                                len);
    pos += len;
  }
  uint64_t count = varint_read(in, pos);
  enc.codes.reserve(count);
  for (uint64_t i = 0; i < count; ++i) enc.codes.push_back(varint_read(in, pos));
  return dict_decode(enc);
}

// ---------------------------------------------------------------------------
// General compression
// ---------------------------------------------------------------------------

bool general_codec_supported(GeneralCodec c) {
  switch (c) {
    case GeneralCodec::kNone:
    case GeneralCodec::kDeflate:
      return true;
    case GeneralCodec::kZstd:
#if TSGRAPH_HAVE_ZSTD
      return true;
#else
      return false;
#endif
  }
  return false;
}

Bytes general_compress(std::span<const uint8_t> block, GeneralCodec c) {
  switch (c) {
    case GeneralCodec::kNone:
      return Bytes(block.begin(), block.end());
    case GeneralCodec::kDeflate: {
      uLongf bound = compressBound(static_cast<uLong>(block.size()));
      Bytes out(bound);
      int rc = compress2(out.data(), &bound, block.data(),
                         static_cast<uLong>(block.size()), Z_DEFAULT_COMPRESSION);
      if (rc != Z_OK) throw IoError("deflate failed, zlib rc " + std::to_string(rc));
      out.resize(bound);
      return out;
    }
    case GeneralCodec::kZstd: {
#if TSGRAPH_HAVE_ZSTD
      size_t bound = ZSTD_compressBound(block.size());
      Bytes out(bound);
      size_t n = ZSTD_compress(out.data(), bound, block.data(), block.size(), 3);
      if (ZSTD_isError(n)) throw IoError("zstd compression failed");
      out.resize(n);
      return out;
#else
      break;
#endif
    }
  }
  throw UnsupportedCodec(std::string("general codec ") + general_codec_name(c) +
                         " not compiled in");
}

Bytes general_decompress(std::span<const uint8_t> block, GeneralCodec c,
                         size_t raw_len) {
  switch (c) {
    case GeneralCodec::kNone:
      if (block.size() != raw_len)
        throw CorruptFile("NONE block length mismatch");
      return Bytes(block.begin(), block.end());
    case GeneralCodec::kDeflate: {
      Bytes out(raw_len);
      uLongf len = static_cast<uLongf>(raw_len);
      int rc = uncompress(out.data(), &len, block.data(),
                          static_cast<uLong>(block.size()));
      if (rc != Z_OK || len != raw_len)
        throw CorruptFile("deflate block does not inflate to raw_len");
      return out;
    }
    case GeneralCodec::kZstd: {
#if TSGRAPH_HAVE_ZSTD
      Bytes out(raw_len);
      size_t n = ZSTD_decompress(out.data(), raw_len, block.data(), block.size());
      if (ZSTD_isError(n) || n != raw_len)
        throw CorruptFile("zstd block does not decompress to raw_len");
      return out;
#else
      break;
#endif
    }
  }
  throw UnsupportedCodec(std::string("general codec ") + general_codec_name(c) +
                         " not compiled in");
}

// ---------------------------------------------------------------------------
// Benchmark harness
// ---------------------------------------------------------------------------

BenchSpec bench_spec_parse(const std::string& text) {
  std::string col = text;
  std::string gen = "none";
  if (auto pos = text.find('+'); pos != std::string::npos) {
    col = text.substr(0, pos);
    gen = text.substr(pos + 1);
  }
  BenchSpec spec;
  spec.general = general_codec_from_name(gen);
  if (col == "none") spec.codec = ColumnCodec::kNone;
  else if (col == "varint") spec.codec = ColumnCodec::kVarint;
  else if (col == "zigzag_varint") spec.codec = ColumnCodec::kZigzagVarint;
  else if (col == "delta_ts") spec.codec = ColumnCodec::kDeltaTs;
  else if (col == "dfcm") spec.codec = ColumnCodec::kDfcm;
  else if (col == "dict") spec.codec = ColumnCodec::kDict;
  else throw UnsupportedCodec("column codec '" + col + "'");
  return spec;
}

namespace {

struct BenchBlock {
  Bytes raw;       // canonical raw form of the block's values
  Bytes encoded;   // after column codec
  size_t count = 0;
};

// Canonical raw widths: ts/long/double 8 bytes, int 4 bytes, strings
// [u32 len][bytes].
uint64_t column_raw_bytes(const BenchColumn& col) {
  if (col.type == "ts" || col.type == "long") return 8 * (col.type == "ts" ? col.u64s.size() : col.i64s.size());
  if (col.type == "double") return 8 * col.doubles.size();
  if (col.type == "int") return 4 * col.i64s.size();
  uint64_t n = 0;
  for (const auto& s : col.strs) n += 4 + s.size();
  return n;
}

size_t column_value_count(const BenchColumn& col) {
  if (col.type == "ts") return col.u64s.size();
  if (col.type == "int" || col.type == "long") return col.i64s.size();
  if (col.type == "double") return col.doubles.size();
  return col.strs.size();
}

Bytes raw_bytes_for_range(const BenchColumn& col, size_t begin, size_t end) {
  Bytes out;
  auto push32 = [&out](uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  };
  for (size_t i = begin; i < end; ++i) {
    if (col.type == "ts") append_u64_le(out, col.u64s[i]);
    else if (col.type == "long") append_u64_le(out, static_cast<uint64_t>(col.i64s[i]));
    else if (col.type == "int") push32(static_cast<uint32_t>(static_cast<int32_t>(col.i64s[i])));
    else if (col.type == "double") append_u64_le(out, std::bit_cast<uint64_t>(col.doubles[i]));
    else {
      push32(static_cast<uint32_t>(col.strs[i].size()));
      out.insert(out.end(), col.strs[i].begin(), col.strs[i].end());
    }
  }
  return out;
}

Bytes encode_range(const BenchColumn& col, ColumnCodec codec, size_t begin,
                   size_t end) {
  switch (codec) {
    case ColumnCodec::kNone:
      return raw_bytes_for_range(col, begin, end);
    case ColumnCodec::kVarint: {
      Bytes out;
      for (size_t i = begin; i < end; ++i) {
        uint64_t v = col.type == "ts" ? col.u64s[i]
                                      : static_cast<uint64_t>(col.i64s[i]);
        varint_append(out, v);
      }
      return out;
    }
    case ColumnCodec::kZigzagVarint: {
      Bytes out;
      for (size_t i = begin; i < end; ++i) {
        int64_t v = col.type == "ts" ? static_cast<int64_t>(col.u64s[i])
                                     : col.i64s[i];
        varint_append(out, zigzag_encode(v));
      }
      return out;
    }
    case ColumnCodec::kDeltaTs: {
      if (col.type != "ts")
        throw UnsupportedCodec("delta_ts applies to timestamp columns");
      return delta_ts_encode_block(
          std::span<const uint64_t>(col.u64s).subspan(begin, end - begin));
    }
    case ColumnCodec::kDfcm: {
      std::vector<uint64_t> words;
      words.reserve(end - begin);
      for (size_t i = begin; i < end; ++i) {
        if (col.type == "ts") words.push_back(col.u64s[i]);
        else if (col.type == "double")
          words.push_back(std::bit_cast<uint64_t>(col.doubles[i]));
        else if (col.type == "long" || col.type == "int")
          words.push_back(static_cast<uint64_t>(col.i64s[i]));
        else throw UnsupportedCodec("dfcm applies to numeric columns");
      }
      return dfcm_encode(words);
    }
    case ColumnCodec::kDict: {
      if (col.type != "string")
        throw UnsupportedCodec("dict applies to string columns");
      return dict_encode_block(
          std::span<const std::string>(col.strs).subspan(begin, end - begin));
    }
  }
  throw UnsupportedCodec("unknown codec");
}

void decode_range(ColumnCodec codec, std::span<const uint8_t> in,
                  size_t begin, size_t end) {
  size_t n = end - begin;
  switch (codec) {
    case ColumnCodec::kNone:
      return;  // raw form needs no decode step
    case ColumnCodec::kVarint: {
      size_t pos = 0;
      varint_decode_n(in, pos, n);
      return;
    }
    case ColumnCodec::kZigzagVarint: {
      size_t pos = 0;
      auto vals = varint_decode_n(in, pos, n);
      for (auto& v : vals) v = static_cast<uint64_t>(zigzag_decode(v));
      return;
    }
    case ColumnCodec::kDeltaTs:
      delta_ts_decode_block(in, n);
      return;
    case ColumnCodec::kDfcm:
      dfcm_decode(in, n);
      return;
    case ColumnCodec::kDict:
      dict_decode_block(in);
      return;
  }
}

}  // namespace

std::vector<BenchRow> bench_codecs(const BenchColumn& column,
                                   std::span<const BenchSpec> specs,
                                   size_t block_size) {
  if (column_value_count(column) == 0)
    throw InvalidArgument("bench input column is empty");
  size_t total = column_value_count(column);
  size_t value_width = column.type == "int" ? 4 : 8;
  size_t per_block = std::max<size_t>(1, block_size / value_width);

  std::vector<BenchRow> rows;
  for (const BenchSpec& spec : specs) {
    if (!general_codec_supported(spec.general))
      throw UnsupportedCodec(std::string(general_codec_name(spec.general)) +
                             " not compiled in");
    BenchRow row;
    row.codec = column_codec_name(spec.codec);
    if (spec.general != GeneralCodec::kNone)
      row.codec += std::string("+") + general_codec_name(spec.general);
    row.raw_bytes = column_raw_bytes(column);

    std::vector<std::pair<size_t, size_t>> ranges;
    for (size_t b = 0; b < total; b += per_block)
      ranges.emplace_back(b, std::min(total, b + per_block));

    using clock = std::chrono::steady_clock;
    std::vector<Bytes> encoded;
    encoded.reserve(ranges.size());
    auto t0 = clock::now();
    for (auto [b, e] : ranges) {
      Bytes col_bytes = encode_range(column, spec.codec, b, e);
      encoded.push_back(general_compress(col_bytes, spec.general));
    }
    auto t1 = clock::now();
    std::vector<size_t> raw_lens;
    raw_lens.reserve(ranges.size());
    for (size_t i = 0; i < ranges.size(); ++i) {
      // Re-derive the column-encoded length so decode can be timed alone.
      raw_lens.push_back(
          encode_range(column, spec.codec, ranges[i].first, ranges[i].second)
              .size());
    }
    auto t2 = clock::now();
    for (size_t i = 0; i < ranges.size(); ++i) {
      Bytes col_bytes =
          general_decompress(encoded[i], spec.general, raw_lens[i]);
      decode_range(spec.codec, col_bytes, ranges[i].first, ranges[i].second);
    }
    auto t3 = clock::now();

    for (const auto& e : encoded) row.encoded_bytes += e.size();
    row.encode_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    row.decode_ms = std::chrono::duration<double, std::milli>(t3 - t2).count();
    row.ratio = row.raw_bytes == 0
                    ? 0.0
                    : static_cast<double>(row.encoded_bytes) / row.raw_bytes;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace tsgraph::codec
