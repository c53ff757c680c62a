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

#include "tsgraph/graph.hpp"

#include <algorithm>
#include <queue>

namespace tsgraph {

Graph::Graph(std::shared_ptr<StorageBackend> backend, std::string root,
             const std::string& graph_id)
    : backend_(std::move(backend)),
      root_(std::move(root)),
      manifest_(GraphManifest::load(*backend_, root_, graph_id)) {}

bool Graph::exists(StorageBackend& backend, const std::string& root,
                   const std::string& graph_id) {
  return backend.exists(paths::manifest(root, graph_id));
}

GraphView Graph::view(Timestamp at) const {
  return GraphView(*this, TimeRange::up_to(at));
}

GraphView Graph::view(TimeRange range) const { return GraphView(*this, range); }

std::vector<EdgeDirInfo> Graph::edge_dirs(
    const TimeRange& range, std::optional<EdgePartitionId> pid) const {
  std::vector<EdgeDirInfo> dirs;
  std::string groot = paths::graph_root(root_, manifest_.graph_id());
  std::string min_date = utc_date_string(range.start);
  std::string max_date = utc_date_string(range.end);
  for (const std::string& dt_name : backend_->list(groot)) {
    auto date = paths::parse_dt(dt_name);
    if (!date) continue;
    // Dates are zero-padded ISO strings, so lexicographic pruning is exact.
    if (*date < min_date || *date > max_date) continue;
    std::string dt_path = groot + "/" + dt_name;
    for (const std::string& type_name : backend_->list(dt_path)) {
      if (manifest_.schema.find_edge_type(type_name) == nullptr) continue;
      std::string type_path = dt_path + "/" + type_name;
      for (const std::string& part_name : backend_->list(type_path)) {
        auto part = paths::parse_part(part_name);
        if (!part) continue;
        if (pid.has_value() && *part != *pid) continue;
        dirs.push_back({*date, type_name, *part, type_path + "/" + part_name});
      }
    }
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

namespace {

struct MergeSource {
  std::unique_ptr<tgf::EdgeDirReader> reader;
  Edge head;
  size_t order = 0;  // position in the sorted dir list, breaks ties
};

struct MergeCompare {
  // Min-heap on (src, dst, ts, edge_type, attrs, order).
  bool operator()(const MergeSource* a, const MergeSource* b) const {
    if (edge_order_less(b->head, a->head)) return true;
    if (edge_order_less(a->head, b->head)) return false;
    return a->order > b->order;
  }
};

}  // namespace

void Graph::read_edges(EdgePartitionId pid, const tgf::ReadOptions& options,
                       const std::function<void(Edge&&)>& sink) const {
  read_edges_dirs(edge_dirs(options.range, pid), options, sink);
}

void Graph::read_edges_dirs(const std::vector<EdgeDirInfo>& dirs,
                            const tgf::ReadOptions& options,
                            const std::function<void(Edge&&)>& sink) const {
  std::vector<std::unique_ptr<MergeSource>> sources;
  for (size_t i = 0; i < dirs.size(); ++i) {
    const EdgeTypeSchema* ts = manifest_.schema.find_edge_type(dirs[i].edge_type);
    auto src = std::make_unique<MergeSource>();
    src->reader = std::make_unique<tgf::EdgeDirReader>(
        *backend_, dirs[i].path, *ts, manifest_, options, &block_stats_);
    src->order = i;
    if (src->reader->next(src->head)) sources.push_back(std::move(src));
  }

  std::priority_queue<MergeSource*, std::vector<MergeSource*>, MergeCompare>
      heap;
  for (auto& s : sources) heap.push(s.get());
  while (!heap.empty()) {
    MergeSource* top = heap.top();
    heap.pop();
    Edge out = top->head;
    if (top->reader->next(top->head)) heap.push(top);
    sink(std::move(out));
  }
}

std::vector<Edge> Graph::read_all_edges(const TimeRange& range) const {
  std::vector<Edge> edges;
  tgf::ReadOptions options;
  options.range = range;
  for (EdgePartitionId pid = 0; pid < layout().edge_partition_count(); ++pid)
    read_edges(pid, options, [&edges](Edge&& e) { edges.push_back(std::move(e)); });
  std::sort(edges.begin(), edges.end(), edge_order_less);
  return edges;
}

tgf::VertexDirReader& Graph::vertex_reader(VertexPartitionId vpid) const {
  std::lock_guard<std::mutex> lock(vertex_readers_mutex_);
  auto it = vertex_readers_.find(vpid);
  if (it == vertex_readers_.end()) {
    auto reader = std::make_unique<tgf::VertexDirReader>(
        *backend_, paths::vertex_dir(root_, manifest_.graph_id(), vpid),
        manifest_, &block_stats_);
    it = vertex_readers_.emplace(vpid, std::move(reader)).first;
  }
  return *it->second;
}

std::vector<VertexId> Graph::all_vertex_ids() const {
  std::vector<VertexId> ids;
  for (VertexPartitionId v = 0; v < layout().vertex_partitions; ++v) {
    const auto& part = vertex_reader(v).ids();
    ids.insert(ids.end(), part.begin(), part.end());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

uint64_t Graph::vertex_count() const {
  uint64_t n = 0;
  for (VertexPartitionId v = 0; v < layout().vertex_partitions; ++v)
    n += vertex_reader(v).ids().size();
  return n;
}

std::unordered_map<VertexId, std::vector<tgf::RouteEntry>>
Graph::resolve_routes(std::span<const VertexId> ids) const {
  std::unordered_map<VertexId, std::vector<tgf::RouteEntry>> out;
  out.reserve(ids.size());
  for (VertexId id : ids) {
    auto& reader = vertex_reader(vertex_partition(id, layout()));
    if (auto row = reader.row_of(id))
      out.emplace(id, reader.routes(*row));
    else
      out.emplace(id, std::vector<tgf::RouteEntry>{});
  }
  return out;
}

std::optional<AttributeValue> Graph::attribute_at(VertexId id,
                                                  const std::string& name,
                                                  Timestamp t) const {
  if (manifest_.schema.find_vertex_attr(name) == nullptr)
    throw UnknownAttribute("vertex attribute '" + name + "'");
  auto& reader = vertex_reader(vertex_partition(id, layout()));
  auto row = reader.row_of(id);
  if (!row) return std::nullopt;
  return reader.attribute_at(*row, name, t);
}

void GraphView::read_edges(EdgePartitionId pid, tgf::ReadOptions options,
                           const std::function<void(Edge&&)>& sink) const {
  options.range.start = std::max(options.range.start, range_.start);
  options.range.end = std::min(options.range.end, range_.end);
  if (options.range.start > options.range.end) return;
  graph_->read_edges(pid, options, sink);
}

std::vector<Edge> GraphView::all_edges() const {
  return graph_->read_all_edges(range_);
}

}  // namespace tsgraph
