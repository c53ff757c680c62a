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

// Vertex partition files: id.tgf (ascending distinct ids), route.tgf
// (per vertex, the packed role/partition entries linking it to edge
// partitions) and attr.<name>.tgf (per vertex, the full version timeline
// of one attribute). Route and attribute rows follow id-file order.

#ifndef TSGRAPH_VERTEX_FILES_HPP
#define TSGRAPH_VERTEX_FILES_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tsgraph/format.hpp"
#include "tsgraph/manifest.hpp"
#include "tsgraph/types.hpp"

namespace tsgraph::tgf {

// ---------------------------------------------------------------------------
// RouteEntry: packed u32, bits 31..30 role flag (SRC=01, DST=10, BOTH=11),
// bits 29..0 edge partition id.
// ---------------------------------------------------------------------------

struct RouteEntry {
  RoleFlag flag = RoleFlag::kSrc;
  EdgePartitionId pid = 0;

  bool operator==(const RouteEntry& o) const = default;
  bool operator<(const RouteEntry& o) const {
    return pid != o.pid ? pid < o.pid : flag < o.flag;
  }
};

inline uint32_t route_entry_pack(RouteEntry e) {
  if (e.pid >= kMaxEdgePartitions)
    throw InvalidArgument("partition id exceeds 30 bits");
  return (static_cast<uint32_t>(role_flag_encode(e.flag)) << 30) | e.pid;
}

inline RouteEntry route_entry_unpack(uint32_t packed) {
  RouteEntry e;
  e.flag = role_flag_decode(static_cast<uint8_t>(packed >> 30));
  e.pid = packed & (kMaxEdgePartitions - 1);
  return e;
}

// ---------------------------------------------------------------------------
// AttributeHistory: parallel value/timestamp arrays, timestamps strictly
// ascending. Ties between updates resolve last-write-wins.
// ---------------------------------------------------------------------------

struct AttributeHistory {
  std::vector<AttributeValue> values;
  std::vector<Timestamp> timestamps;

  size_t size() const { return values.size(); }

  // Largest-timestamp version <= t, or nullopt.
  std::optional<AttributeValue> at(Timestamp t) const;

  static AttributeHistory from_updates(
      std::vector<std::pair<Timestamp, AttributeValue>> updates);

  bool operator==(const AttributeHistory& o) const = default;
};

struct VertexRecord {
  VertexId id = kInvalidVertex;
  std::vector<RouteEntry> routes;  // sorted by pid
  std::map<std::string, AttributeHistory> attrs;
};

struct VertexDirWriteResult {
  uint64_t vertex_count = 0;
  uint64_t raw_bytes = 0;
  uint64_t stored_bytes = 0;
};

// Records must be sorted by id and distinct; attribute names must appear in
// the schema's vertex_attrs. Every declared attribute file is written even
// when all rows are empty.
VertexDirWriteResult write_vertex_dir(StorageBackend& backend,
                                      const std::string& dir,
                                      std::span<const VertexRecord> records,
                                      const GraphManifest& manifest);

// ---------------------------------------------------------------------------
// Reader with per-block caches; one instance per partition directory.
// ---------------------------------------------------------------------------

class VertexDirReader {
 public:
  VertexDirReader(StorageBackend& backend, const std::string& dir,
                  const GraphManifest& manifest, BlockStats* stats = nullptr);

  const std::vector<VertexId>& ids() const { return ids_; }
  std::optional<size_t> row_of(VertexId id) const;

  std::vector<RouteEntry> routes(size_t row);

  // Full history of one declared attribute; throws UnknownAttribute for
  // names outside the schema.
  const AttributeHistory& history(size_t row, const std::string& name);

  std::optional<AttributeValue> attribute_at(size_t row,
                                             const std::string& name,
                                             Timestamp t);

 private:
  struct AttrFile {
    std::unique_ptr<FileReader> reader;
    AttrType type;
    std::map<size_t, std::vector<AttributeHistory>> cache;  // block -> rows
  };

  size_t block_of_row(const FileReader& reader, size_t row) const;
  AttrFile& attr_file(const std::string& name);

  StorageBackend& backend_;
  std::string dir_;
  GraphManifest manifest_;
  BlockStats* stats_;

  std::vector<VertexId> ids_;
  std::unique_ptr<FileReader> route_reader_;
  std::map<size_t, std::vector<std::vector<RouteEntry>>> route_cache_;
  std::map<std::string, AttrFile> attr_files_;
};

}  // namespace tsgraph::tgf

#endif  // TSGRAPH_VERTEX_FILES_HPP
