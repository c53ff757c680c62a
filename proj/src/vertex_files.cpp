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

#include "tsgraph/vertex_files.hpp"

#include <algorithm>

#include "column_values.hpp"
#include "id_blocks.hpp"

namespace tsgraph::tgf {

using codec::Bytes;
using codec::ColumnCodec;

std::optional<AttributeValue> AttributeHistory::at(Timestamp t) const {
  // Largest timestamp <= t.
  auto it = std::upper_bound(timestamps.begin(), timestamps.end(), t);
  if (it == timestamps.begin()) return std::nullopt;
  return values[static_cast<size_t>(it - timestamps.begin()) - 1];
}

AttributeHistory AttributeHistory::from_updates(
    std::vector<std::pair<Timestamp, AttributeValue>> updates) {
  std::stable_sort(updates.begin(), updates.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  AttributeHistory h;
  for (auto& [ts, value] : updates) {
    if (!h.timestamps.empty() && h.timestamps.back() == ts) {
      // Same-timestamp rewrite: last write wins.
      h.values.back() = std::move(value);
    } else {
      h.timestamps.push_back(ts);
      h.values.push_back(std::move(value));
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Writer
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

void append_u32_le(Bytes& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

uint32_t read_u32_le(std::span<const uint8_t> in, size_t& pos) {
  if (pos + 4 > in.size()) throw TruncatedStream("u32");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<uint32_t>(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}

// Attribute block payload:
//   [varint version count per row]
//   [timestamps per non-empty row: u64 LE first, varint deltas after]
//   [values for all versions in row order, column-codec encoded]
struct AttrBlockDraft {
  Bytes counts;
  Bytes timestamps;
  std::vector<AttributeValue> values;
  uint64_t rows = 0;
  VertexId min_id = 0;
  VertexId max_id = 0;
};

std::vector<AttributeHistory> decode_attr_block(
    const FileReader::Block& block, AttrType type,
    const codec::DfcmConfig& dfcm_cfg) {
  std::span<const uint8_t> in(block.payload);
  size_t pos = 0;
  std::vector<uint64_t> counts;
  counts.reserve(block.row_count);
  uint64_t total = 0;
  for (uint64_t r = 0; r < block.row_count; ++r) {
    counts.push_back(codec::varint_read(in, pos));
    total += counts.back();
  }
  std::vector<AttributeHistory> rows(block.row_count);
  for (uint64_t r = 0; r < block.row_count; ++r) {
    uint64_t c = counts[r];
    if (c == 0) continue;
    auto& ts = rows[r].timestamps;
    ts.reserve(c);
    uint64_t t = read_u64_le(in, pos);
    ts.push_back(t);
    for (uint64_t i = 1; i < c; ++i) {
      t += codec::varint_read(in, pos);
      ts.push_back(t);
    }
  }
  auto values = detail::decode_column_values(block.codec, in.subspan(pos),
                                             total, type, dfcm_cfg);
  size_t vp = 0;
  for (uint64_t r = 0; r < block.row_count; ++r) {
    rows[r].values.assign(values.begin() + vp, values.begin() + vp + counts[r]);
    vp += counts[r];
  }
  return rows;
}

}  // namespace

VertexDirWriteResult write_vertex_dir(StorageBackend& backend,
                                      const std::string& dir,
                                      std::span<const VertexRecord> records,
                                      const GraphManifest& manifest) {
  const CodecConfig& cfg = manifest.codec_config;
  codec::DfcmConfig dfcm_cfg{cfg.dfcm_table_bits};

  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i].id == kInvalidVertex)
      throw InvalidArgument("vertex id 0 is reserved");
    if (i > 0) {
      if (records[i].id == records[i - 1].id)
        throw DuplicateId(std::to_string(records[i].id));
      if (records[i].id < records[i - 1].id)
        throw UnsortedInput("vertex records at position " + std::to_string(i));
    }
  }

  VertexDirWriteResult result;
  result.vertex_count = records.size();

  // id.tgf
  {
    FileWriter::Options opts;
    opts.kind = FileKind::kId;
    opts.default_codec = ColumnCodec::kDeltaTs;
    opts.general = cfg.general;
    FileWriter writer(opts);
    std::vector<uint64_t> ids;
    ids.reserve(records.size());
    for (const auto& r : records) ids.push_back(r.id);
    size_t per_block = std::max<size_t>(1, cfg.block_size / 8);
    for (size_t b = 0; b < ids.size(); b += per_block) {
      size_t e = std::min(ids.size(), b + per_block);
      std::span<const uint64_t> span(ids.data() + b, e - b);
      auto enc = detail::encode_id_block(span, dfcm_cfg);
      writer.add_block(enc.codec, std::move(enc.payload), span.size(),
                       span.front(), span.back());
    }
    result.raw_bytes += writer.raw_bytes();
    result.stored_bytes += writer.finish(backend, paths::id_file(dir));
  }

  // route.tgf: rows in id order, each row a varint count plus packed u32
  // entries.
  {
    FileWriter::Options opts;
    opts.kind = FileKind::kRoute;
    opts.default_codec = ColumnCodec::kVarint;
    opts.general = cfg.general;
    FileWriter writer(opts);
    Bytes payload;
    uint64_t rows = 0;
    VertexId min_id = 0, max_id = 0;
    auto flush = [&]() {
      if (rows == 0) return;
      writer.add_block(ColumnCodec::kVarint, std::move(payload), rows, min_id,
                       max_id);
      payload = Bytes{};
      rows = 0;
    };
    for (const auto& r : records) {
      if (rows == 0) min_id = r.id;
      max_id = r.id;
      codec::varint_append(payload, r.routes.size());
      for (const RouteEntry& e : r.routes)
        append_u32_le(payload, route_entry_pack(e));
      ++rows;
      if (payload.size() >= cfg.block_size) flush();
    }
    flush();
    result.raw_bytes += writer.raw_bytes();
    result.stored_bytes += writer.finish(backend, paths::route_file(dir));
  }

  // attr.<name>.tgf per declared vertex attribute.
  for (const Column& col : manifest.schema.vertex_attrs) {
    FileWriter::Options opts;
    opts.kind = FileKind::kAttr;
    opts.general = cfg.general;
    opts.default_codec = col.type == AttrType::kString
                             ? ColumnCodec::kDict
                             : ColumnCodec::kZigzagVarint;
    FileWriter writer(opts);

    AttrBlockDraft draft;
    auto flush = [&]() {
      if (draft.rows == 0) return;
      auto enc =
          detail::encode_column_values(draft.values, col.type, dfcm_cfg);
      Bytes payload = std::move(draft.counts);
      payload.insert(payload.end(), draft.timestamps.begin(),
                     draft.timestamps.end());
      payload.insert(payload.end(), enc.payload.begin(), enc.payload.end());
      writer.add_block(enc.codec, std::move(payload), draft.rows,
                       draft.min_id, draft.max_id);
      draft = AttrBlockDraft{};
    };
    for (const auto& r : records) {
      const AttributeHistory* h = nullptr;
      if (auto it = r.attrs.find(col.name); it != r.attrs.end())
        h = &it->second;
      if (draft.rows == 0) draft.min_id = r.id;
      draft.max_id = r.id;
      size_t count = h == nullptr ? 0 : h->size();
      codec::varint_append(draft.counts, count);
      if (count > 0) {
        if (h->values.size() != h->timestamps.size())
          throw InvalidArgument("attribute history arrays differ in length");
        append_u64_le(draft.timestamps, h->timestamps[0]);
        for (size_t i = 1; i < count; ++i) {
          if (h->timestamps[i] <= h->timestamps[i - 1])
            throw UnsortedInput("attribute history timestamps for vertex " +
                                std::to_string(r.id));
          codec::varint_append(draft.timestamps,
                               h->timestamps[i] - h->timestamps[i - 1]);
        }
        draft.values.insert(draft.values.end(), h->values.begin(),
                            h->values.end());
      }
      ++draft.rows;
      if (draft.counts.size() + draft.timestamps.size() +
              draft.values.size() * 8 >=
          cfg.block_size)
        flush();
    }
    flush();
    result.raw_bytes += writer.raw_bytes();
    result.stored_bytes +=
        writer.finish(backend, paths::vertex_attr_file(dir, col.name));
  }

  return result;
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

VertexDirReader::VertexDirReader(StorageBackend& backend,
                                 const std::string& dir,
                                 const GraphManifest& manifest,
                                 BlockStats* stats)
    : backend_(backend), dir_(dir), manifest_(manifest), stats_(stats) {
  codec::DfcmConfig dfcm_cfg{manifest_.codec_config.dfcm_table_bits};
  FileReader id_reader(backend_, paths::id_file(dir_), stats_);
  ids_.reserve(id_reader.total_rows());
  for (size_t b = 0; b < id_reader.block_count(); ++b) {
    auto block = id_reader.read_block(b);
    auto ids = detail::decode_id_block(block.codec, block.payload,
                                       block.row_count, dfcm_cfg);
    ids_.insert(ids_.end(), ids.begin(), ids.end());
  }
  route_reader_ =
      std::make_unique<FileReader>(backend_, paths::route_file(dir_), stats_);
}

std::optional<size_t> VertexDirReader::row_of(VertexId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<size_t>(it - ids_.begin());
}

size_t VertexDirReader::block_of_row(const FileReader& reader,
                                     size_t row) const {
  // rows_before is non-decreasing; find the block whose span holds `row`.
  size_t lo = 0, hi = reader.block_count();
  while (lo + 1 < hi) {
    size_t mid = (lo + hi) / 2;
    if (reader.rows_before(mid) <= row)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::vector<RouteEntry> VertexDirReader::routes(size_t row) {
  if (row >= ids_.size()) throw InvalidArgument("vertex row out of range");
  size_t block = block_of_row(*route_reader_, row);
  auto it = route_cache_.find(block);
  if (it == route_cache_.end()) {
    auto data = route_reader_->read_block(block);
    std::vector<std::vector<RouteEntry>> rows;
    rows.reserve(data.row_count);
    std::span<const uint8_t> in(data.payload);
    size_t pos = 0;
    for (uint64_t r = 0; r < data.row_count; ++r) {
      uint64_t count = codec::varint_read(in, pos);
      std::vector<RouteEntry> entries;
      entries.reserve(count);
      for (uint64_t i = 0; i < count; ++i)
        entries.push_back(route_entry_unpack(read_u32_le(in, pos)));
      rows.push_back(std::move(entries));
    }
    if (pos != in.size())
      throw CorruptFile(dir_ + ": trailing bytes in route block");
    it = route_cache_.emplace(block, std::move(rows)).first;
  }
  return it->second.at(row - route_reader_->rows_before(block));
}

VertexDirReader::AttrFile& VertexDirReader::attr_file(const std::string& name) {
  auto it = attr_files_.find(name);
  if (it != attr_files_.end()) return it->second;
  const Column* col = manifest_.schema.find_vertex_attr(name);
  if (col == nullptr)
    throw UnknownAttribute("vertex attribute '" + name + "'");
  AttrFile f;
  f.type = col->type;
  f.reader = std::make_unique<FileReader>(
      backend_, paths::vertex_attr_file(dir_, name), stats_);
  return attr_files_.emplace(name, std::move(f)).first->second;
}

const AttributeHistory& VertexDirReader::history(size_t row,
                                                 const std::string& name) {
  if (row >= ids_.size()) throw InvalidArgument("vertex row out of range");
  AttrFile& f = attr_file(name);
  size_t block = block_of_row(*f.reader, row);
  auto it = f.cache.find(block);
  if (it == f.cache.end()) {
    codec::DfcmConfig dfcm_cfg{manifest_.codec_config.dfcm_table_bits};
    auto data = f.reader->read_block(block);
    it = f.cache.emplace(block, decode_attr_block(data, f.type, dfcm_cfg))
             .first;
  }
  return it->second.at(row - f.reader->rows_before(block));
}

std::optional<AttributeValue> VertexDirReader::attribute_at(
    size_t row, const std::string& name, Timestamp t) {
  return history(row, name).at(t);
}

}  // namespace tsgraph::tgf
