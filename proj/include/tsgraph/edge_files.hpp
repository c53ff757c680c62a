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

// Edge partition files. One directory per (date, edge type, partition id)
// holds g2l.tgf (the partition's sorted distinct global ids), struct.tgf
// (star blocks over local ids) and one attr.<column>.tgf per schema column,
// with attribute rows in leaf-ordinal order. Attribute file block i covers
// exactly the leaves of struct block i.

#ifndef TSGRAPH_EDGE_FILES_HPP
#define TSGRAPH_EDGE_FILES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsgraph/format.hpp"
#include "tsgraph/manifest.hpp"
#include "tsgraph/types.hpp"

namespace tsgraph::tgf {

// Local ids are ranks in the directory's sorted distinct global-id set, so
// local order coincides with global order everywhere.
using LocalId = uint32_t;

struct StarLeaf {
  LocalId dst = 0;
  Timestamp ts = 0;
};

struct Star {
  LocalId src = 0;
  std::vector<StarLeaf> leaves;
};

// ---------------------------------------------------------------------------
// Struct-block payload coding, exposed for tests and the G2L size probe:
// [varint star count] then per star [varint src delta][varint leaf count]
// [first leaf: varint dst, varint ts][rest: varint dst delta,
// zigzag-varint ts delta].
// ---------------------------------------------------------------------------

codec::Bytes encode_star_block(std::span<const Star> stars);
std::vector<Star> decode_star_block(std::span<const uint8_t> payload);

// Same star stream encoded with 64-bit global ids in place of locals;
// used to measure what the global-to-local mapping saves.
codec::Bytes encode_star_block_global_ids(std::span<const Star> stars,
                                          std::span<const VertexId> g2l);

// Bytes attributable to vertex ids alone under the two encodings
// (timestamp bytes excluded from both sides).
struct StarIdBytes {
  uint64_t local_bytes = 0;
  uint64_t global_bytes = 0;
};
StarIdBytes measure_star_id_bytes(std::span<const Star> stars,
                                  std::span<const VertexId> g2l);

struct EdgeDirWriteResult {
  uint64_t edge_count = 0;
  uint64_t distinct_vertices = 0;
  uint64_t raw_bytes = 0;      // column-encoded bytes before general codec
  uint64_t stored_bytes = 0;   // bytes on storage
};

// Writes one (date, edge type, pid) directory. `edges` must be sorted by
// (src, dst, ts) and every edge must map to `pid` under the manifest
// layout; violations throw UnsortedInput / PartitionMismatch.
EdgeDirWriteResult write_edge_dir(StorageBackend& backend,
                                  const std::string& dir,
                                  std::span<const Edge> edges,
                                  const EdgeTypeSchema& type_schema,
                                  const GraphManifest& manifest,
                                  EdgePartitionId pid);

// ---------------------------------------------------------------------------
// Streaming reader over one directory, in (src, dst, ts) order.
// ---------------------------------------------------------------------------

enum class FilterRole : uint8_t {
  kNone,    // no id filter
  kSrc,     // match edges whose src is in the filter (index can skip blocks)
  kDst,     // match by dst (leaf scan, no block skipping)
  kEither,  // match if src or dst is in the filter
};

struct ReadOptions {
  TimeRange range = TimeRange::all();
  FilterRole role = FilterRole::kNone;
  std::vector<VertexId> filter;       // sorted global ids
  std::optional<std::vector<std::string>> columns;  // nullopt = all columns
  // When set, requested columns absent on an edge type are dropped from
  // that type's rows instead of raising UnknownAttribute. The engine uses
  // this for per-type optional columns such as SSSP weights.
  bool lenient_columns = false;
  // Extra blocks coalesced into each storage read during scans.
  uint32_t read_ahead = 0;

  static ReadOptions all() { return {}; }
};

class EdgeDirReader {
 public:
  EdgeDirReader(StorageBackend& backend, const std::string& dir,
                const EdgeTypeSchema& type_schema,
                const GraphManifest& manifest, ReadOptions options,
                BlockStats* stats = nullptr);

  // Next matching edge in (src, dst, ts) order; false at end of stream.
  bool next(Edge& out);

  // The directory's global-id table (sorted ascending).
  const std::vector<VertexId>& g2l() const { return g2l_; }

  size_t struct_block_count() const {
    return struct_reader_ ? struct_reader_->block_count() : 0;
  }

 private:
  void load_block(size_t block);
  bool block_may_match(size_t block) const;

  StorageBackend& backend_;
  std::string dir_;
  const EdgeTypeSchema type_schema_;
  const GraphManifest manifest_;
  ReadOptions options_;
  BlockStats* stats_;

  std::vector<VertexId> g2l_;
  std::vector<LocalId> local_filter_;  // sorted locals present in this dir
  std::unique_ptr<FileReader> struct_reader_;
  std::vector<std::unique_ptr<FileReader>> attr_readers_;  // one per column read
  std::vector<size_t> attr_schema_idx_;  // schema column index per reader

  size_t next_block_ = 0;
  std::vector<Edge> pending_;  // decoded matches of the current block
  size_t pending_pos_ = 0;
};

// Decoded whole-directory scan used by index-soundness cross checks: reads
// every block unconditionally, ignoring filters.
std::vector<Edge> scan_edge_dir(StorageBackend& backend, const std::string& dir,
                                const EdgeTypeSchema& type_schema,
                                const GraphManifest& manifest);

}  // namespace tsgraph::tgf

#endif  // TSGRAPH_EDGE_FILES_HPP
