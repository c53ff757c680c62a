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

#include "tsgraph/format.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>

namespace tsgraph::tgf {

using codec::Bytes;

namespace {

void put_u16(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(Bytes& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint16_t get_u16(std::span<const uint8_t> in, size_t& pos) {
  if (pos + 2 > in.size()) throw CorruptFile("truncated u16");
  uint16_t v = static_cast<uint16_t>(in[pos] | (in[pos + 1] << 8));
  pos += 2;
  return v;
}

uint32_t get_u32(std::span<const uint8_t> in, size_t& pos) {
  if (pos + 4 > in.size()) throw CorruptFile("truncated u32");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}

uint64_t get_u64(std::span<const uint8_t> in, size_t& pos) {
  if (pos + 8 > in.size()) throw CorruptFile("truncated u64");
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
  pos += 8;
  return v;
}

uint32_t crc32_of(std::span<const uint8_t> data) {
  return static_cast<uint32_t>(
      ::crc32(0L, data.data(), static_cast<uInt>(data.size())));
}

}  // namespace

void FileWriter::add_block(codec::ColumnCodec codec, Bytes payload,
                           uint64_t row_count, uint64_t min_id,
                           uint64_t max_id, std::span<const uint64_t> ids) {
  PendingBlock block;
  block.codec = static_cast<uint8_t>(codec);
  block.raw_len = static_cast<uint32_t>(payload.size());
  raw_bytes_ += payload.size();
  block.encoded = codec::general_compress(payload, opts_.general);
  block.index.row_count = row_count;
  if (opts_.index_kind == IndexKind::kRange) {
    block.index.min_id = min_id;
    block.index.max_id = max_id;
  } else {
    block.index.bloom = BloomFilter::build(ids, opts_.bloom_fp);
  }
  blocks_.push_back(std::move(block));
}

uint64_t FileWriter::finish(StorageBackend& backend, const std::string& path) {
  // Fixed header prefix is 18 bytes; block offsets depend on the index
  // length, so lay the index out first.
  Bytes index_bytes;
  put_u32(index_bytes, static_cast<uint32_t>(blocks_.size()));
  std::vector<std::vector<uint8_t>> bloom_bytes(blocks_.size());
  constexpr size_t kHeaderPrefix = 18;
  size_t entry_fixed = 8 + 8 + 8;
  size_t index_size = 4;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    index_size += entry_fixed;
    if (opts_.index_kind == IndexKind::kRange) {
      index_size += 16;
    } else {
      bloom_bytes[i] = blocks_[i].index.bloom.to_bytes();
      index_size += 4 + bloom_bytes[i].size();
    }
  }

  uint64_t offset = kHeaderPrefix + index_size;
  for (size_t i = 0; i < blocks_.size(); ++i) {
    PendingBlock& b = blocks_[i];
    b.index.offset = offset;
    b.index.length = 1 + 1 + 4 + 4 + b.encoded.size() + 4;
    offset += b.index.length;
    put_u64(index_bytes, b.index.offset);
    put_u64(index_bytes, b.index.length);
    put_u64(index_bytes, b.index.row_count);
    if (opts_.index_kind == IndexKind::kRange) {
      put_u64(index_bytes, b.index.min_id);
      put_u64(index_bytes, b.index.max_id);
    } else {
      put_u32(index_bytes, static_cast<uint32_t>(bloom_bytes[i].size()));
      index_bytes.insert(index_bytes.end(), bloom_bytes[i].begin(),
                         bloom_bytes[i].end());
    }
  }

  Bytes header;
  header.insert(header.end(), kMagic, kMagic + 4);
  put_u16(header, kFormatVersion);
  header.push_back(static_cast<uint8_t>(opts_.kind));
  header.push_back(static_cast<uint8_t>(opts_.default_codec));
  header.push_back(static_cast<uint8_t>(opts_.general));
  put_u32(header, static_cast<uint32_t>(blocks_.size()));
  header.push_back(static_cast<uint8_t>(opts_.index_kind));
  put_u32(header, static_cast<uint32_t>(index_bytes.size()));

  auto file = backend.create_atomic(path);
  file->append(header);
  file->append(index_bytes);
  uint64_t total = header.size() + index_bytes.size();
  for (const PendingBlock& b : blocks_) {
    Bytes rec;
    rec.reserve(b.index.length);
    rec.push_back(b.codec);
    rec.push_back(static_cast<uint8_t>(opts_.general));
    put_u32(rec, b.raw_len);
    put_u32(rec, static_cast<uint32_t>(b.encoded.size()));
    rec.insert(rec.end(), b.encoded.begin(), b.encoded.end());
    put_u32(rec, crc32_of(b.encoded));
    file->append(rec);
    total += rec.size();
  }
  file->commit();
  return total;
}

FileReader::FileReader(StorageBackend& backend, const std::string& path,
                       BlockStats* stats)
    : file_(backend.open_read(path)), path_(path), stats_(stats) {
  if (file_->size() < 18) throw CorruptFile(path + ": shorter than header");
  Bytes fixed(18);
  file_->read_at(0, fixed);
  if (std::memcmp(fixed.data(), kMagic, 4) != 0)
    throw CorruptFile(path + ": bad magic");
  size_t pos = 4;
  uint16_t version = get_u16(fixed, pos);
  if (version != kFormatVersion)
    throw CorruptFile(path + ": unsupported format version " +
                      std::to_string(version));
  uint8_t kind = fixed[pos++];
  if (kind > 4) throw CorruptFile(path + ": bad file kind");
  kind_ = static_cast<FileKind>(kind);
  default_codec_ = codec::column_codec_from_byte(fixed[pos++]);
  general_ = codec::general_codec_from_byte(fixed[pos++]);
  uint32_t block_count = get_u32(fixed, pos);
  uint8_t ik = fixed[pos++];
  if (ik > 1) throw CorruptFile(path + ": bad index kind");
  index_kind_ = static_cast<IndexKind>(ik);
  uint32_t index_len = get_u32(fixed, pos);
  if (18 + static_cast<uint64_t>(index_len) > file_->size())
    throw CorruptFile(path + ": index overruns file");

  Bytes index_bytes(index_len);
  if (index_len > 0) file_->read_at(18, index_bytes);
  size_t ipos = 0;
  uint32_t entries = get_u32(index_bytes, ipos);
  if (entries != block_count)
    throw CorruptFile(path + ": index entry count mismatch");
  index_.reserve(entries);
  row_offsets_.reserve(entries + 1);
  row_offsets_.push_back(0);
  uint64_t prev_end = 18 + index_len;
  for (uint32_t i = 0; i < entries; ++i) {
    IndexEntry e;
    e.offset = get_u64(index_bytes, ipos);
    e.length = get_u64(index_bytes, ipos);
    e.row_count = get_u64(index_bytes, ipos);
    if (index_kind_ == IndexKind::kRange) {
      e.min_id = get_u64(index_bytes, ipos);
      e.max_id = get_u64(index_bytes, ipos);
      if (e.min_id > e.max_id) throw CorruptFile(path + ": index min > max");
    } else {
      uint32_t blen = get_u32(index_bytes, ipos);
      if (ipos + blen > index_bytes.size())
        throw CorruptFile(path + ": bloom bytes overrun index");
      e.bloom = BloomFilter::from_bytes(
          std::span<const uint8_t>(index_bytes).subspan(ipos, blen));
      ipos += blen;
    }
    // Blocks must be non-overlapping with ascending offsets.
    if (e.offset < prev_end || e.offset + e.length > file_->size())
      throw CorruptFile(path + ": block bounds invalid");
    prev_end = e.offset + e.length;
    row_offsets_.push_back(row_offsets_.back() + e.row_count);
    index_.push_back(std::move(e));
  }
}

bool FileReader::may_contain(size_t i, uint64_t id) const {
  const IndexEntry& e = index_.at(i);
  if (index_kind_ == IndexKind::kRange)
    return id >= e.min_id && id <= e.max_id;
  return e.bloom.may_contain(id);
}

FileReader::Block FileReader::read_block(size_t i) {
  const IndexEntry& e = index_.at(i);
  Bytes rec(e.length);
  if (read_ahead_ == 0) {
    file_->read_at(e.offset, rec);
  } else {
    if (i < ahead_first_ || i >= ahead_end_) {
      size_t last = std::min(index_.size() - 1, i + read_ahead_);
      ahead_base_ = e.offset;
      ahead_buf_.resize(index_[last].offset + index_[last].length -
                        ahead_base_);
      file_->read_at(ahead_base_, ahead_buf_);
      ahead_first_ = i;
      ahead_end_ = last + 1;
    }
    std::memcpy(rec.data(), ahead_buf_.data() + (e.offset - ahead_base_),
                e.length);
  }
  size_t pos = 0;
  codec::ColumnCodec col = codec::column_codec_from_byte(rec[pos++]);
  codec::GeneralCodec gen = codec::general_codec_from_byte(rec[pos++]);
  uint32_t raw_len = get_u32(rec, pos);
  uint32_t enc_len = get_u32(rec, pos);
  if (pos + enc_len + 4 != rec.size())
    throw CorruptFile(path_ + ": block record length mismatch");
  std::span<const uint8_t> enc(rec.data() + pos, enc_len);
  size_t crc_pos = pos + enc_len;
  uint32_t stored_crc = get_u32(rec, crc_pos);
  if (stored_crc != crc32_of(enc))
    throw CorruptFile(path_ + ": block crc mismatch");
  Block out;
  out.codec = col;
  out.payload = codec::general_decompress(enc, gen, raw_len);
  out.row_count = e.row_count;
  if (stats_ != nullptr) {
    stats_->blocks_read += 1;
    stats_->read_by_kind[static_cast<size_t>(kind_)] += 1;
  }
  return out;
}

}  // namespace tsgraph::tgf
