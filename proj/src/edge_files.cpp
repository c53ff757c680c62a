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

#include "tsgraph/edge_files.hpp"

#include <algorithm>
#include <cassert>

#include "column_values.hpp"
#include "id_blocks.hpp"
#include "tsgraph/partition.hpp"

namespace tsgraph::tgf {

using codec::Bytes;
using codec::ColumnCodec;

// ---------------------------------------------------------------------------
// Star block coding
// ---------------------------------------------------------------------------

Bytes encode_star_block(std::span<const Star> stars) {
  Bytes out;
  codec::varint_append(out, stars.size());
  uint64_t prev_src = 0;
  bool first_star = true;
  for (const Star& star : stars) {
    codec::varint_append(out, first_star ? star.src : star.src - prev_src);
    prev_src = star.src;
    first_star = false;
    codec::varint_append(out, star.leaves.size());
    uint64_t prev_dst = 0;
    uint64_t prev_ts = 0;
    bool first_leaf = true;
    for (const StarLeaf& leaf : star.leaves) {
      if (first_leaf) {
        codec::varint_append(out, leaf.dst);
        codec::varint_append(out, leaf.ts);
        first_leaf = false;
      } else {
        codec::varint_append(out, leaf.dst - prev_dst);
        codec::varint_append(
            out, codec::zigzag_encode(static_cast<int64_t>(leaf.ts) -
                                      static_cast<int64_t>(prev_ts)));
      }
      prev_dst = leaf.dst;
      prev_ts = leaf.ts;
    }
  }
  return out;
}

std::vector<Star> decode_star_block(std::span<const uint8_t> payload) {
  std::vector<Star> stars;
  size_t pos = 0;
  uint64_t star_count = codec::varint_read(payload, pos);
  stars.reserve(star_count);
  uint64_t prev_src = 0;
  for (uint64_t s = 0; s < star_count; ++s) {
    Star star;
    uint64_t delta = codec::varint_read(payload, pos);
    star.src = static_cast<LocalId>(s == 0 ? delta : prev_src + delta);
    prev_src = star.src;
    uint64_t leaf_count = codec::varint_read(payload, pos);
    star.leaves.reserve(leaf_count);
    uint64_t prev_dst = 0;
    uint64_t prev_ts = 0;
    for (uint64_t l = 0; l < leaf_count; ++l) {
      StarLeaf leaf;
      if (l == 0) {
        leaf.dst = static_cast<LocalId>(codec::varint_read(payload, pos));
        leaf.ts = codec::varint_read(payload, pos);
      } else {
        leaf.dst = static_cast<LocalId>(prev_dst +
                                        codec::varint_read(payload, pos));
        leaf.ts = static_cast<Timestamp>(
            static_cast<int64_t>(prev_ts) +
            codec::zigzag_decode(codec::varint_read(payload, pos)));
      }
      prev_dst = leaf.dst;
      prev_ts = leaf.ts;
      star.leaves.push_back(leaf);
    }
    stars.push_back(std::move(star));
  }
  if (pos != payload.size()) throw CorruptFile("trailing bytes in star block");
  return stars;
}

Bytes encode_star_block_global_ids(std::span<const Star> stars,
                                   std::span<const VertexId> g2l) {
  // Identical layout with global ids substituted for locals; deltas stay
  // valid because local rank order equals global order.
  Bytes out;
  codec::varint_append(out, stars.size());
  uint64_t prev_src = 0;
  bool first_star = true;
  for (const Star& star : stars) {
    uint64_t src = g2l[star.src];
    codec::varint_append(out, first_star ? src : src - prev_src);
    prev_src = src;
    first_star = false;
    codec::varint_append(out, star.leaves.size());
    uint64_t prev_dst = 0;
    uint64_t prev_ts = 0;
    bool first_leaf = true;
    for (const StarLeaf& leaf : star.leaves) {
      uint64_t dst = g2l[leaf.dst];
      if (first_leaf) {
        codec::varint_append(out, dst);
        codec::varint_append(out, leaf.ts);
        first_leaf = false;
      } else {
        codec::varint_append(out, dst - prev_dst);
        codec::varint_append(
            out, codec::zigzag_encode(static_cast<int64_t>(leaf.ts) -
                                      static_cast<int64_t>(prev_ts)));
      }
      prev_dst = dst;
      prev_ts = leaf.ts;
    }
  }
  return out;
}

StarIdBytes measure_star_id_bytes(std::span<const Star> stars,
                                  std::span<const VertexId> g2l) {
  StarIdBytes out;
  uint64_t prev_src_l = 0, prev_src_g = 0;
  bool first_star = true;
  for (const Star& star : stars) {
    uint64_t src_g = g2l[star.src];
    out.local_bytes +=
        codec::varint_size(first_star ? star.src : star.src - prev_src_l);
    out.global_bytes +=
        codec::varint_size(first_star ? src_g : src_g - prev_src_g);
    prev_src_l = star.src;
    prev_src_g = src_g;
    first_star = false;
    uint64_t prev_dst_l = 0, prev_dst_g = 0;
    bool first_leaf = true;
    for (const StarLeaf& leaf : star.leaves) {
      uint64_t dst_g = g2l[leaf.dst];
      out.local_bytes += codec::varint_size(
          first_leaf ? leaf.dst : leaf.dst - prev_dst_l);
      out.global_bytes +=
          codec::varint_size(first_leaf ? dst_g : dst_g - prev_dst_g);
      prev_dst_l = leaf.dst;
      prev_dst_g = dst_g;
      first_leaf = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

namespace {

struct StructBlockDraft {
  std::vector<Star> stars;
  std::vector<uint64_t> src_ids;  // locals, for bloom indexes
  uint64_t leaf_count = 0;
  size_t byte_estimate = 0;
};

}  // namespace

EdgeDirWriteResult write_edge_dir(StorageBackend& backend,
                                  const std::string& dir,
                                  std::span<const Edge> edges,
                                  const EdgeTypeSchema& type_schema,
                                  const GraphManifest& manifest,
                                  EdgePartitionId pid) {
  const PartitionLayout& layout = manifest.layout;
  const CodecConfig& cfg = manifest.codec_config;
  codec::DfcmConfig dfcm_cfg{cfg.dfcm_table_bits};

  // Preconditions: sorted stream, single partition.
  for (size_t i = 0; i < edges.size(); ++i) {
    if (i > 0 && edge_order_less(edges[i], edges[i - 1]))
      throw UnsortedInput("edge stream at position " + std::to_string(i));
    if (edge_partition(edges[i].src, edges[i].dst, edges[i].ts, layout) != pid)
      throw PartitionMismatch("edge at position " + std::to_string(i) +
                              " does not hash to partition " +
                              std::to_string(pid));
  }

  // Global-to-local: locals are ranks in the sorted distinct id set.
  std::vector<VertexId> g2l;
  g2l.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    g2l.push_back(e.src);
    g2l.push_back(e.dst);
  }
  std::sort(g2l.begin(), g2l.end());
  g2l.erase(std::unique(g2l.begin(), g2l.end()), g2l.end());
  auto to_local = [&g2l](VertexId id) -> LocalId {
    return static_cast<LocalId>(
        std::lower_bound(g2l.begin(), g2l.end(), id) - g2l.begin());
  };

  EdgeDirWriteResult result;
  result.edge_count = edges.size();
  result.distinct_vertices = g2l.size();

  // g2l.tgf
  {
    FileWriter::Options opts;
    opts.kind = FileKind::kG2l;
    opts.default_codec = ColumnCodec::kDeltaTs;
    opts.general = cfg.general;
    opts.index_kind = IndexKind::kRange;
    FileWriter writer(opts);
    size_t per_block = std::max<size_t>(1, cfg.block_size / 8);
    for (size_t b = 0; b < g2l.size(); b += per_block) {
      size_t e = std::min(g2l.size(), b + per_block);
      std::span<const uint64_t> ids(g2l.data() + b, e - b);
      auto enc = detail::encode_id_block(ids, dfcm_cfg);
      writer.add_block(enc.codec, std::move(enc.payload), ids.size(),
                       ids.front(), ids.back());
    }
    result.raw_bytes += writer.raw_bytes();
    result.stored_bytes += writer.finish(backend, paths::g2l_file(dir));
  }

  // Struct blocks; a long star may split across block boundaries.
  std::vector<StructBlockDraft> drafts;
  {
    StructBlockDraft current;
    auto flush = [&drafts, &current]() {
      if (!current.stars.empty()) drafts.push_back(std::move(current));
      current = StructBlockDraft{};
    };
    size_t i = 0;
    while (i < edges.size()) {
      LocalId src = to_local(edges[i].src);
      Star star;
      star.src = src;
      current.src_ids.push_back(src);
      size_t star_cost = 6;
      while (i < edges.size() && to_local(edges[i].src) == src) {
        star.leaves.push_back({to_local(edges[i].dst), edges[i].ts});
        star_cost += 10;
        ++i;
        if (current.byte_estimate + star_cost >= cfg.block_size) {
          // Split: close the star here and continue it in the next block.
          current.byte_estimate += star_cost;
          current.leaf_count += star.leaves.size();
          current.stars.push_back(std::move(star));
          flush();
          if (i < edges.size() && to_local(edges[i].src) == src) {
            star = Star{};
            star.src = src;
            current.src_ids.push_back(src);
            star_cost = 6;
          } else {
            star = Star{};
            star_cost = 0;
            break;
          }
        }
      }
      if (!star.leaves.empty()) {
        current.byte_estimate += star_cost;
        current.leaf_count += star.leaves.size();
        current.stars.push_back(std::move(star));
      }
    }
    flush();
  }

  // struct.tgf
  {
    FileWriter::Options opts;
    opts.kind = FileKind::kStruct;
    opts.default_codec = ColumnCodec::kVarint;
    opts.general = cfg.general;
    opts.index_kind = cfg.struct_index;
    opts.bloom_fp = cfg.bloom_fp;
    FileWriter writer(opts);
    for (const StructBlockDraft& d : drafts) {
      Bytes payload = encode_star_block(d.stars);
      writer.add_block(ColumnCodec::kVarint, std::move(payload), d.leaf_count,
                       d.stars.front().src, d.stars.back().src, d.src_ids);
    }
    result.raw_bytes += writer.raw_bytes();
    result.stored_bytes += writer.finish(backend, paths::struct_file(dir));
  }

  // attr.<column>.tgf, block i aligned with struct block i.
  for (size_t c = 0; c < type_schema.columns.size(); ++c) {
    const Column& col = type_schema.columns[c];
    FileWriter::Options opts;
    opts.kind = FileKind::kAttr;
    opts.general = cfg.general;
    opts.index_kind = IndexKind::kRange;
    switch (col.type) {
      case AttrType::kInt:
      case AttrType::kLong:
        opts.default_codec = ColumnCodec::kZigzagVarint;
        break;
      case AttrType::kDouble:
        opts.default_codec = ColumnCodec::kDfcm;
        break;
      case AttrType::kString:
        opts.default_codec = ColumnCodec::kDict;
        break;
    }
    FileWriter writer(opts);
    size_t edge_pos = 0;
    for (const StructBlockDraft& d : drafts) {
      std::vector<AttributeValue> values;
      values.reserve(d.leaf_count);
      for (uint64_t l = 0; l < d.leaf_count; ++l)
        values.push_back(edges[edge_pos + l].attrs.at(c));
      edge_pos += d.leaf_count;
      auto enc = detail::encode_column_values(values, col.type, dfcm_cfg);
      writer.add_block(enc.codec, std::move(enc.payload), d.leaf_count,
                       d.stars.front().src, d.stars.back().src);
    }
    result.raw_bytes += writer.raw_bytes();
    result.stored_bytes +=
        writer.finish(backend, paths::edge_attr_file(dir, col.name));
  }

  return result;
}

// ---------------------------------------------------------------------------
// Reader
// ---------------------------------------------------------------------------

EdgeDirReader::EdgeDirReader(StorageBackend& backend, const std::string& dir,
                             const EdgeTypeSchema& type_schema,
                             const GraphManifest& manifest,
                             ReadOptions options, BlockStats* stats)
    : backend_(backend),
      dir_(dir),
      type_schema_(type_schema),
      manifest_(manifest),
      options_(std::move(options)),
      stats_(stats) {
  codec::DfcmConfig dfcm_cfg{manifest_.codec_config.dfcm_table_bits};

  // The g2l table is needed to translate both filters and results.
  {
    FileReader reader(backend_, paths::g2l_file(dir_), stats_);
    reader.set_read_ahead(options_.read_ahead);
    g2l_.reserve(reader.total_rows());
    for (size_t b = 0; b < reader.block_count(); ++b) {
      auto block = reader.read_block(b);
      auto ids = detail::decode_id_block(block.codec, block.payload,
                                         block.row_count, dfcm_cfg);
      g2l_.insert(g2l_.end(), ids.begin(), ids.end());
    }
  }

  if (options_.role != FilterRole::kNone) {
    for (VertexId id : options_.filter) {
      auto it = std::lower_bound(g2l_.begin(), g2l_.end(), id);
      if (it != g2l_.end() && *it == id)
        local_filter_.push_back(static_cast<LocalId>(it - g2l_.begin()));
    }
    if (local_filter_.empty()) {
      // Nothing from the filter lives in this directory.
      return;
    }
  }

  struct_reader_ =
      std::make_unique<FileReader>(backend_, paths::struct_file(dir_), stats_);
  struct_reader_->set_read_ahead(options_.read_ahead);

  std::vector<std::string> cols;
  if (options_.columns.has_value()) {
    cols = *options_.columns;
  } else {
    for (const Column& c : type_schema_.columns) cols.push_back(c.name);
  }
  for (const std::string& name : cols) {
    size_t idx = 0;
    for (; idx < type_schema_.columns.size(); ++idx)
      if (type_schema_.columns[idx].name == name) break;
    if (idx == type_schema_.columns.size()) {
      if (options_.lenient_columns) continue;
      throw UnknownAttribute("column '" + name + "' on edge type '" +
                             type_schema_.name + "'");
    }
    attr_schema_idx_.push_back(idx);
    attr_readers_.push_back(std::make_unique<FileReader>(
        backend_, paths::edge_attr_file(dir_, name), stats_));
    attr_readers_.back()->set_read_ahead(options_.read_ahead);
  }
}

bool EdgeDirReader::block_may_match(size_t block) const {
  if (options_.role != FilterRole::kSrc || local_filter_.empty()) return true;
  const IndexEntry& e = struct_reader_->index_entry(block);
  if (struct_reader_->index_kind() == IndexKind::kRange) {
    // Any filter id within [min, max]?
    auto it = std::lower_bound(local_filter_.begin(), local_filter_.end(),
                               static_cast<LocalId>(e.min_id));
    return it != local_filter_.end() && *it <= e.max_id;
  }
  for (LocalId id : local_filter_)
    if (e.bloom.may_contain(id)) return true;
  return false;
}

void EdgeDirReader::load_block(size_t block) {
  codec::DfcmConfig dfcm_cfg{manifest_.codec_config.dfcm_table_bits};
  auto data = struct_reader_->read_block(block);
  std::vector<Star> stars = decode_star_block(data.payload);

  auto in_filter = [this](LocalId id) {
    return std::binary_search(local_filter_.begin(), local_filter_.end(), id);
  };

  // Survivors carry their leaf ordinal within the block so attribute rows
  // line up.
  struct Hit {
    uint64_t ordinal;
    LocalId src;
    LocalId dst;
    Timestamp ts;
  };
  std::vector<Hit> hits;
  uint64_t ordinal = 0;
  for (const Star& star : stars) {
    bool src_match = true;
    if (options_.role == FilterRole::kSrc) {
      src_match = in_filter(star.src);
      if (!src_match) {
        ordinal += star.leaves.size();
        continue;
      }
    } else if (options_.role == FilterRole::kEither) {
      src_match = in_filter(star.src);
    } else if (options_.role == FilterRole::kDst) {
      src_match = false;
    }
    for (const StarLeaf& leaf : star.leaves) {
      bool match = src_match;
      if (!match && (options_.role == FilterRole::kDst ||
                     options_.role == FilterRole::kEither))
        match = in_filter(leaf.dst);
      if (match && options_.range.contains(leaf.ts))
        hits.push_back({ordinal, star.src, leaf.dst, leaf.ts});
      ++ordinal;
    }
  }
  if (ordinal != data.row_count)
    throw CorruptFile(dir_ + ": struct block leaf count mismatch");

  pending_.clear();
  pending_pos_ = 0;
  if (hits.empty()) return;

  // Materialize only the requested columns for surviving ordinals.
  std::vector<std::vector<AttributeValue>> columns(attr_readers_.size());
  for (size_t r = 0; r < attr_readers_.size(); ++r) {
    auto attr_block = attr_readers_[r]->read_block(block);
    AttrType type = type_schema_.columns[attr_schema_idx_[r]].type;
    columns[r] = detail::decode_column_values(
        attr_block.codec, attr_block.payload, attr_block.row_count, type,
        dfcm_cfg);
    if (columns[r].size() != data.row_count)
      throw CorruptFile(dir_ + ": attribute block row count mismatch");
  }

  pending_.reserve(hits.size());
  for (const Hit& h : hits) {
    Edge e;
    e.src = g2l_.at(h.src);
    e.dst = g2l_.at(h.dst);
    e.edge_type = type_schema_.name;
    e.ts = h.ts;
    e.attrs.reserve(columns.size());
    for (const auto& col : columns)
      e.attrs.push_back(col[static_cast<size_t>(h.ordinal)]);
    pending_.push_back(std::move(e));
  }
}

bool EdgeDirReader::next(Edge& out) {
  while (pending_pos_ >= pending_.size()) {
    if (struct_reader_ == nullptr ||
        next_block_ >= struct_reader_->block_count())
      return false;
    size_t block = next_block_++;
    if (!block_may_match(block)) {
      struct_reader_->note_skipped();
      for (auto& r : attr_readers_) r->note_skipped();
      continue;
    }
    load_block(block);
  }
  out = pending_[pending_pos_++];
  return true;
}

std::vector<Edge> scan_edge_dir(StorageBackend& backend,
                                const std::string& dir,
                                const EdgeTypeSchema& type_schema,
                                const GraphManifest& manifest) {
  EdgeDirReader reader(backend, dir, type_schema, manifest,
                       ReadOptions::all());
  std::vector<Edge> edges;
  Edge e;
  while (reader.next(e)) edges.push_back(e);
  return edges;
}

}  // namespace tsgraph::tgf
