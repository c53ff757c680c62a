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

// Internal: ascending id sequences (g2l tables, vertex id files) are stored
// per block as delta+varint or DFCM, whichever is smaller.

#ifndef TSGRAPH_SRC_ID_BLOCKS_HPP
#define TSGRAPH_SRC_ID_BLOCKS_HPP

#include <span>
#include <vector>

#include "tsgraph/codec.hpp"

namespace tsgraph::detail {

struct EncodedIdBlock {
  codec::ColumnCodec codec;
  codec::Bytes payload;
};

inline EncodedIdBlock encode_id_block(std::span<const uint64_t> ids,
                                      const codec::DfcmConfig& dfcm_cfg) {
  codec::Bytes delta = codec::delta_ts_encode_block(ids);
  codec::Bytes dfcm = codec::dfcm_encode(ids, dfcm_cfg);
  if (dfcm.size() < delta.size())
    return {codec::ColumnCodec::kDfcm, std::move(dfcm)};
  return {codec::ColumnCodec::kDeltaTs, std::move(delta)};
}

inline std::vector<uint64_t> decode_id_block(codec::ColumnCodec col,
                                             std::span<const uint8_t> payload,
                                             size_t count,
                                             const codec::DfcmConfig& dfcm_cfg) {
  if (col == codec::ColumnCodec::kDfcm)
    return codec::dfcm_decode(payload, count, dfcm_cfg);
  if (col == codec::ColumnCodec::kDeltaTs)
    return codec::delta_ts_decode_block(payload, count);
  throw CorruptFile("unexpected codec for id block");
}

}  // namespace tsgraph::detail

#endif  // TSGRAPH_SRC_ID_BLOCKS_HPP
