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

// Bloom filters over 64-bit ids for block skipping. Sized from the target
// false-positive rate: m = ceil(-n ln(fp) / ln^2 2) bits,
// k = round(m/n * ln 2) probes, double hashing from two 64-bit hashes.
// Inserted ids always test positive.

#ifndef TSGRAPH_BLOOM_HPP
#define TSGRAPH_BLOOM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "tsgraph/errors.hpp"

namespace tsgraph {

class BloomFilter {
 public:
  BloomFilter() = default;

  // Sizes the filter for `expected_n` ids at `target_fp` in (0,1).
  BloomFilter(size_t expected_n, double target_fp);

  void insert(uint64_t id);
  bool may_contain(uint64_t id) const;

  uint32_t bit_count() const { return m_bits_; }
  uint32_t hash_count() const { return k_; }

  // Serialized form: [u32 m_bits][u32 k][ceil(m/8) filter bytes], LE.
  std::vector<uint8_t> to_bytes() const;
  static BloomFilter from_bytes(std::span<const uint8_t> in);

  static BloomFilter build(std::span<const uint64_t> ids, double target_fp);

 private:
  uint32_t m_bits_ = 0;
  uint32_t k_ = 0;
  std::vector<uint8_t> bits_;
};

}  // namespace tsgraph

#endif  // TSGRAPH_BLOOM_HPP
