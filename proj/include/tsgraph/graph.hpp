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

// Read handle over one graph on a storage backend, plus time-scoped views.
// Edge reads merge the per-(date, type) directories of a partition into one
// (src, dst, ts)-ordered stream; date directories outside the range are
// pruned before any file is opened.

#ifndef TSGRAPH_GRAPH_HPP
#define TSGRAPH_GRAPH_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "tsgraph/edge_files.hpp"
#include "tsgraph/manifest.hpp"
#include "tsgraph/storage.hpp"
#include "tsgraph/vertex_files.hpp"

namespace tsgraph {

struct EdgeDirInfo {
  std::string date;
  std::string edge_type;
  EdgePartitionId pid = 0;
  std::string path;

  bool operator<(const EdgeDirInfo& o) const {
    return std::tie(date, edge_type, pid) < std::tie(o.date, o.edge_type, o.pid);
  }
};

class GraphView;

class Graph {
 public:
  Graph(std::shared_ptr<StorageBackend> backend, std::string root,
        const std::string& graph_id);

  static bool exists(StorageBackend& backend, const std::string& root,
                     const std::string& graph_id);

  const GraphManifest& manifest() const { return manifest_; }
  const PartitionLayout& layout() const { return manifest_.layout; }
  const std::string& root() const { return root_; }
  StorageBackend& backend() { return *backend_; }

  GraphView view(Timestamp at) const;
  GraphView view(TimeRange range) const;

  // Existing edge directories, pruned by date range, optionally limited to
  // one partition; sorted by (date, edge_type, pid).
  std::vector<EdgeDirInfo> edge_dirs(const TimeRange& range,
                                     std::optional<EdgePartitionId> pid = {}) const;

  // Merged (src, dst, ts)-ordered stream over one partition.
  void read_edges(EdgePartitionId pid, const tgf::ReadOptions& options,
                  const std::function<void(Edge&&)>& sink) const;

  // Same merge over an explicit directory list (callers pass subsets of
  // edge_dirs(), e.g. one matrix row).
  void read_edges_dirs(const std::vector<EdgeDirInfo>& dirs,
                       const tgf::ReadOptions& options,
                       const std::function<void(Edge&&)>& sink) const;

  // All partitions, globally sorted. Convenience for full exports.
  std::vector<Edge> read_all_edges(const TimeRange& range) const;

  // Vertex side. Partition readers are cached on the handle.
  tgf::VertexDirReader& vertex_reader(VertexPartitionId vpid) const;
  std::vector<VertexId> all_vertex_ids() const;
  uint64_t vertex_count() const;

  // Decoded route lists; ids absent from the graph map to empty lists.
  std::unordered_map<VertexId, std::vector<tgf::RouteEntry>> resolve_routes(
      std::span<const VertexId> ids) const;

  // Latest version <= t, nullopt when the vertex is unknown or has no
  // version by t. Unknown attribute names throw.
  std::optional<AttributeValue> attribute_at(VertexId id,
                                             const std::string& name,
                                             Timestamp t) const;

  tgf::BlockStats& block_stats() const { return block_stats_; }

 private:
  std::shared_ptr<StorageBackend> backend_;
  std::string root_;
  GraphManifest manifest_;
  mutable tgf::BlockStats block_stats_;
  mutable std::map<VertexPartitionId, std::unique_ptr<tgf::VertexDirReader>>
      vertex_readers_;
  mutable std::mutex vertex_readers_mutex_;
};

// Immutable time-scoped read view: edges outside the range are invisible
// and attributes evaluate at the range end. No data is copied; filters
// apply at block scan time.
class GraphView {
 public:
  GraphView(const Graph& graph, TimeRange range)
      : graph_(&graph), range_(range) {}

  const Graph& graph() const { return *graph_; }
  const TimeRange& range() const { return range_; }
  Timestamp at() const { return range_.end; }

  void read_edges(EdgePartitionId pid, tgf::ReadOptions options,
                  const std::function<void(Edge&&)>& sink) const;
  std::vector<Edge> all_edges() const;

  std::optional<AttributeValue> attribute_at(VertexId id,
                                             const std::string& name) const {
    return graph_->attribute_at(id, name, range_.end);
  }

 private:
  const Graph* graph_;
  TimeRange range_;
};

}  // namespace tsgraph

#endif  // TSGRAPH_GRAPH_HPP
