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

// Internal: one attribute column block encoded by its type's codec.
// int -> zigzag varint; long -> zigzag varint or DFCM, whichever is
// smaller; double -> raw words or DFCM, whichever is smaller;
// string -> dictionary. The block's codec byte records the choice.

#ifndef TSGRAPH_SRC_COLUMN_VALUES_HPP
#define TSGRAPH_SRC_COLUMN_VALUES_HPP

#include <bit>
#include <span>
#include <vector>

#include "tsgraph/codec.hpp"
#include "tsgraph/types.hpp"

namespace tsgraph::detail {

struct EncodedColumn {
  codec::ColumnCodec codec;
  codec::Bytes payload;
};

inline EncodedColumn encode_column_values(
    std::span<const AttributeValue> values, AttrType type,
    const codec::DfcmConfig& dfcm_cfg) {
  using codec::Bytes;
  using codec::ColumnCodec;
  switch (type) {
    case AttrType::kInt: {
      Bytes out;
      for (const auto& v : values)
        codec::varint_append(out, codec::zigzag_encode(v.as_int()));
      return {ColumnCodec::kZigzagVarint, std::move(out)};
    }
    case AttrType::kLong: {
      Bytes zz;
      std::vector<uint64_t> words;
      words.reserve(values.size());
      for (const auto& v : values) {
        codec::varint_append(zz, codec::zigzag_encode(v.as_long()));
        words.push_back(static_cast<uint64_t>(v.as_long()));
      }
      Bytes df = codec::dfcm_encode(words, dfcm_cfg);
      if (df.size() < zz.size()) return {ColumnCodec::kDfcm, std::move(df)};
      return {ColumnCodec::kZigzagVarint, std::move(zz)};
    }
    case AttrType::kDouble: {
      std::vector<double> doubles;
      doubles.reserve(values.size());
      for (const auto& v : values) doubles.push_back(v.as_double());
      Bytes df = codec::dfcm_encode_doubles(doubles, dfcm_cfg);
      if (df.size() < doubles.size() * 8)
        return {ColumnCodec::kDfcm, std::move(df)};
      Bytes raw;
      raw.reserve(doubles.size() * 8);
      for (double d : doubles) {
        uint64_t w = std::bit_cast<uint64_t>(d);
        for (int i = 0; i < 8; ++i)
          raw.push_back(static_cast<uint8_t>(w >> (8 * i)));
      }
      return {ColumnCodec::kNone, std::move(raw)};
    }
    case AttrType::kString: {
      std::vector<std::string> strs;
      strs.reserve(values.size());
      for (const auto& v : values) strs.push_back(v.as_string());
      return {ColumnCodec::kDict, codec::dict_encode_block(strs)};
    }
  }
  throw InvalidArgument("unknown attribute type");
}

inline std::vector<AttributeValue> decode_column_values(
    codec::ColumnCodec col, std::span<const uint8_t> payload, size_t count,
    AttrType type, const codec::DfcmConfig& dfcm_cfg) {
  using codec::ColumnCodec;
  std::vector<AttributeValue> out;
  out.reserve(count);
  switch (col) {
    case ColumnCodec::kZigzagVarint: {
      size_t pos = 0;
      auto raw = codec::varint_decode_n(payload, pos, count);
      for (uint64_t u : raw) {
        int64_t v = codec::zigzag_decode(u);
        if (type == AttrType::kInt)
          out.emplace_back(static_cast<int32_t>(v));
        else
          out.emplace_back(v);
      }
      return out;
    }
    case ColumnCodec::kDfcm: {
      auto words = codec::dfcm_decode(payload, count, dfcm_cfg);
      for (uint64_t w : words) {
        if (type == AttrType::kDouble)
          out.emplace_back(std::bit_cast<double>(w));
        else
          out.emplace_back(static_cast<int64_t>(w));
      }
      return out;
    }
    case ColumnCodec::kNone: {
      if (type != AttrType::kDouble || payload.size() != count * 8)
        throw CorruptFile("raw column block shape mismatch");
      for (size_t i = 0; i < count; ++i) {
        uint64_t w = 0;
        for (int b = 0; b < 8; ++b)
          w |= static_cast<uint64_t>(payload[i * 8 + b]) << (8 * b);
        out.emplace_back(std::bit_cast<double>(w));
      }
      return out;
    }
    case ColumnCodec::kDict: {
      auto strs = codec::dict_decode_block(payload);
      if (strs.size() != count) throw CorruptFile("dict row count mismatch");
      for (auto& s : strs) out.emplace_back(std::move(s));
      return out;
    }
    default:
      throw CorruptFile("unexpected codec for attribute column");
  }
}

}  // namespace tsgraph::detail

#endif  // TSGRAPH_SRC_COLUMN_VALUES_HPP
