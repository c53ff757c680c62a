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

#include "tsgraph/bloom.hpp"

#include <cmath>

#include "tsgraph/partition.hpp"

namespace tsgraph {

namespace {

constexpr uint64_t kBloomSeed1 = 0x517cc1b727220a95ull;
constexpr uint64_t kBloomSeed2 = 0x2545f4914f6cdd1dull;

}  // namespace

BloomFilter::BloomFilter(size_t expected_n, double target_fp) {
  if (!(target_fp > 0.0 && target_fp < 1.0))
    throw InvalidArgument("bloom target fp must be in (0,1)");
  const double ln2 = std::log(2.0);
  size_t n = expected_n == 0 ? 1 : expected_n;
  double m = std::ceil(-static_cast<double>(n) * std::log(target_fp) /
                       (ln2 * ln2));
  m_bits_ = static_cast<uint32_t>(std::max(8.0, m));
  double k = std::round(m / static_cast<double>(n) * ln2);
  k_ = static_cast<uint32_t>(std::max(1.0, k));
  bits_.assign((m_bits_ + 7) / 8, 0);
}

void BloomFilter::insert(uint64_t id) {
  uint64_t h1 = seeded_hash(kBloomSeed1, id);
  uint64_t h2 = seeded_hash(kBloomSeed2, id);
  for (uint32_t i = 0; i < k_; ++i) {
    uint64_t bit = (h1 + i * h2) % m_bits_;
    bits_[bit / 8] |= static_cast<uint8_t>(1u << (bit % 8));
  }
}

bool BloomFilter::may_contain(uint64_t id) const {
  if (m_bits_ == 0) return false;
  uint64_t h1 = seeded_hash(kBloomSeed1, id);
  uint64_t h2 = seeded_hash(kBloomSeed2, id);
  for (uint32_t i = 0; i < k_; ++i) {
    uint64_t bit = (h1 + i * h2) % m_bits_;
    if ((bits_[bit / 8] & (1u << (bit % 8))) == 0) return false;
  }
  return true;
}

std::vector<uint8_t> BloomFilter::to_bytes() const {
  std::vector<uint8_t> out;
  out.reserve(8 + bits_.size());
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<uint8_t>(m_bits_ >> (8 * i)));
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(k_ >> (8 * i)));
  out.insert(out.end(), bits_.begin(), bits_.end());
  return out;
}

BloomFilter BloomFilter::from_bytes(std::span<const uint8_t> in) {
  if (in.size() < 8) throw CorruptFile("bloom filter too short");
  BloomFilter f;
  for (int i = 0; i < 4; ++i)
    f.m_bits_ |= static_cast<uint32_t>(in[i]) << (8 * i);
  for (int i = 0; i < 4; ++i)
    f.k_ |= static_cast<uint32_t>(in[4 + i]) << (8 * i);
  size_t nbytes = (f.m_bits_ + 7) / 8;
  if (in.size() != 8 + nbytes) throw CorruptFile("bloom filter length mismatch");
  f.bits_.assign(in.begin() + 8, in.end());
  return f;
}

BloomFilter BloomFilter::build(std::span<const uint64_t> ids,
                               double target_fp) {
  BloomFilter f(ids.size(), target_fp);
  for (uint64_t id : ids) f.insert(id);
  return f;
}

}  // namespace tsgraph
