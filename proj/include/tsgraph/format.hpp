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

// TGF container format. Every .tgf file is:
//
//   magic "TGF1" | version u16 | file kind u8 | column codec u8 |
//   general codec u8 | block count u32 | index kind u8 |
//   index byte length u32 | index bytes | block records...
//
// Index bytes: u32 entry count, then per block
//   u64 offset | u64 length | u64 row count |
//   RANGE: u64 min id, u64 max id
//   BLOOM: u32 filter length, filter bytes
//
// Block record: u8 column codec | u8 general codec | u32 raw len |
// u32 encoded len | encoded bytes | u32 crc32(encoded bytes).
//
// All integers little-endian. The index lives in the header, so writers
// buffer blocks and write the header first.

#ifndef TSGRAPH_FORMAT_HPP
#define TSGRAPH_FORMAT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsgraph/bloom.hpp"
#include "tsgraph/codec.hpp"
#include "tsgraph/storage.hpp"

namespace tsgraph::tgf {

inline constexpr char kMagic[4] = {'T', 'G', 'F', '1'};
inline constexpr uint16_t kFormatVersion = 1;

enum class FileKind : uint8_t {
  kStruct = 0,
  kAttr = 1,
  kG2l = 2,
  kId = 3,
  kRoute = 4,
};

enum class IndexKind : uint8_t {
  kRange = 0,
  kBloom = 1,
};

struct IndexEntry {
  uint64_t offset = 0;     // block record start, from file begin
  uint64_t length = 0;     // block record byte length
  uint64_t row_count = 0;  // rows / values decoded from the block
  // RANGE
  uint64_t min_id = 0;
  uint64_t max_id = 0;
  // BLOOM
  BloomFilter bloom;
};

// Counters for index effectiveness; shared across readers of one query.
struct BlockStats {
  std::atomic<uint64_t> blocks_read{0};
  std::atomic<uint64_t> blocks_skipped{0};
  // Indexed by FileKind.
  std::atomic<uint64_t> read_by_kind[5] = {};
  std::atomic<uint64_t> skipped_by_kind[5] = {};

  void reset() {
    blocks_read = 0;
    blocks_skipped = 0;
    for (auto& c : read_by_kind) c = 0;
    for (auto& c : skipped_by_kind) c = 0;
  }
};

// ---------------------------------------------------------------------------
// Writer: collects column-encoded blocks, applies the general compressor,
// then emits header, index and blocks in one pass.
// ---------------------------------------------------------------------------

class FileWriter {
 public:
  struct Options {
    FileKind kind = FileKind::kAttr;
    codec::ColumnCodec default_codec = codec::ColumnCodec::kNone;
    codec::GeneralCodec general = codec::GeneralCodec::kNone;
    IndexKind index_kind = IndexKind::kRange;
    double bloom_fp = 0.01;
  };

  explicit FileWriter(Options opts) : opts_(opts) {}

  // `payload` is the column-encoded block body. For RANGE files min/max
  // describe the block's id span; for BLOOM files `ids` seeds the filter.
  void add_block(codec::ColumnCodec codec, codec::Bytes payload,
                 uint64_t row_count, uint64_t min_id, uint64_t max_id,
                 std::span<const uint64_t> ids = {});

  // Writes and commits the file; returns total bytes written.
  uint64_t finish(StorageBackend& backend, const std::string& path);

  uint64_t raw_bytes() const { return raw_bytes_; }

 private:
  struct PendingBlock {
    uint8_t codec;
    uint32_t raw_len;
    codec::Bytes encoded;
    IndexEntry index;
  };

  Options opts_;
  std::vector<PendingBlock> blocks_;
  uint64_t raw_bytes_ = 0;
};

// ---------------------------------------------------------------------------
// Reader: header and index up front, blocks on demand with CRC checks.
// ---------------------------------------------------------------------------

class FileReader {
 public:
  FileReader(StorageBackend& backend, const std::string& path,
             BlockStats* stats = nullptr);

  FileKind kind() const { return kind_; }
  IndexKind index_kind() const { return index_kind_; }
  codec::ColumnCodec default_codec() const { return default_codec_; }
  codec::GeneralCodec general_codec() const { return general_; }
  size_t block_count() const { return index_.size(); }
  const IndexEntry& index_entry(size_t i) const { return index_.at(i); }
  // Sum of row counts of blocks before i.
  uint64_t rows_before(size_t i) const { return row_offsets_.at(i); }
  uint64_t total_rows() const { return row_offsets_.back(); }

  // True if the index cannot rule the id out of block i.
  bool may_contain(size_t i, uint64_t id) const;

  struct Block {
    codec::ColumnCodec codec;
    codec::Bytes payload;  // column-encoded bytes (general codec removed)
    uint64_t row_count = 0;
  };

  Block read_block(size_t i);

  // Coalesce the next `extra_blocks` block records into each storage read.
  // Sequential scans issue fewer reads; point lookups should leave this 0.
  void set_read_ahead(uint32_t extra_blocks) { read_ahead_ = extra_blocks; }

  // Bumps the skip counter; readers call this when the index excludes a
  // block so stats line up with read_block calls.
  void note_skipped() {
    if (stats_ != nullptr) {
      stats_->blocks_skipped += 1;
      stats_->skipped_by_kind[static_cast<size_t>(kind_)] += 1;
    }
  }

 private:
  std::unique_ptr<ReadFile> file_;
  std::string path_;
  BlockStats* stats_;
  FileKind kind_ = FileKind::kAttr;
  IndexKind index_kind_ = IndexKind::kRange;
  codec::ColumnCodec default_codec_ = codec::ColumnCodec::kNone;
  codec::GeneralCodec general_ = codec::GeneralCodec::kNone;
  std::vector<IndexEntry> index_;
  std::vector<uint64_t> row_offsets_;  // size block_count()+1

  uint32_t read_ahead_ = 0;
  codec::Bytes ahead_buf_;
  uint64_t ahead_base_ = 0;   // file offset of ahead_buf_[0]
  size_t ahead_first_ = 0;    // first block covered
  size_t ahead_end_ = 0;      // one past the last block covered
};

}  // namespace tsgraph::tgf

#endif  // TSGRAPH_FORMAT_HPP
