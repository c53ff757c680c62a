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

#include <algorithm>
#include <set>

#include "tsgraph/engine.hpp"

namespace tsgraph {

Direction direction_from_name(const std::string& name) {
  if (name == "out") return Direction::kOut;
  if (name == "in") return Direction::kIn;
  if (name == "both") return Direction::kBoth;
  throw UnknownDirection("'" + name + "' (expected out, in or both)");
}

namespace {

std::vector<VertexId> sorted_unique(std::span<const VertexId> ids) {
  std::vector<VertexId> out(ids.begin(), ids.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<VertexId> traverse(const GraphView& view,
                               std::span<const VertexId> input, uint64_t hops,
                               const TraverseOptions& options) {
  const Graph& graph = view.graph();
  std::vector<VertexId> frontier = sorted_unique(input);
  if (hops == 0) return frontier;

  bool follow_out = options.direction == Direction::kOut ||
                    options.direction == Direction::kBoth;
  bool follow_in = options.direction == Direction::kIn ||
                   options.direction == Direction::kBoth;

  std::vector<std::string> columns = options.predicate_columns;
  auto admits = [&options](const Edge& e) {
    return !options.edge_predicate || options.edge_predicate(e);
  };

  for (uint64_t hop = 0; hop < hops && !frontier.empty(); ++hop) {
    auto routes = graph.resolve_routes(frontier);

    // Shuffle frontier ids to their edge partitions by route pid.
    std::map<EdgePartitionId, std::vector<VertexId>> src_ids;
    std::map<EdgePartitionId, std::vector<VertexId>> dst_ids;
    for (VertexId id : frontier) {
      for (const tgf::RouteEntry& route : routes[id]) {
        bool as_src =
            route.flag == RoleFlag::kSrc || route.flag == RoleFlag::kBoth;
        bool as_dst =
            route.flag == RoleFlag::kDst || route.flag == RoleFlag::kBoth;
        if (follow_out && as_src) src_ids[route.pid].push_back(id);
        if (follow_in && as_dst) dst_ids[route.pid].push_back(id);
      }
    }

    std::set<EdgePartitionId> pids;
    for (const auto& [pid, ids] : src_ids) pids.insert(pid);
    for (const auto& [pid, ids] : dst_ids) pids.insert(pid);

    std::set<VertexId> next;
    for (EdgePartitionId pid : pids) {
      auto si = src_ids.find(pid);
      auto di = dst_ids.find(pid);
      std::vector<VertexId>* srcs = si == src_ids.end() ? nullptr : &si->second;
      std::vector<VertexId>* dsts = di == dst_ids.end() ? nullptr : &di->second;
      if (srcs) std::sort(srcs->begin(), srcs->end());
      if (dsts) std::sort(dsts->begin(), dsts->end());

      tgf::ReadOptions read;
      read.columns = columns;
      read.read_ahead = options.read_ahead;
      if (srcs && !dsts) {
        read.role = tgf::FilterRole::kSrc;
        read.filter = *srcs;
        view.read_edges(pid, read, [&](Edge&& e) {
          if (admits(e)) next.insert(e.dst);
        });
      } else if (dsts && !srcs) {
        read.role = tgf::FilterRole::kDst;
        read.filter = *dsts;
        view.read_edges(pid, read, [&](Edge&& e) {
          if (admits(e)) next.insert(e.src);
        });
      } else {
        read.role = tgf::FilterRole::kEither;
        std::vector<VertexId> both;
        std::set_union(srcs->begin(), srcs->end(), dsts->begin(), dsts->end(),
                       std::back_inserter(both));
        read.filter = both;
        view.read_edges(pid, read, [&](Edge&& e) {
          if (!admits(e)) return;
          if (std::binary_search(srcs->begin(), srcs->end(), e.src))
            next.insert(e.dst);
          if (std::binary_search(dsts->begin(), dsts->end(), e.dst))
            next.insert(e.src);
        });
      }
    }
    frontier.assign(next.begin(), next.end());
  }
  return frontier;
}

namespace detail {

void stream_row_edges(const GraphView& view, uint32_t row,
                      const tgf::ReadOptions& options, bool dedup_links,
                      const std::function<void(const Edge&)>& sink) {
  const Graph& graph = view.graph();
  uint32_t n = graph.layout().n;
  tgf::ReadOptions scoped = options;
  scoped.range.start = std::max(scoped.range.start, view.range().start);
  scoped.range.end = std::min(scoped.range.end, view.range().end);
  if (scoped.range.start > scoped.range.end) return;

  std::vector<EdgeDirInfo> dirs;
  for (const EdgeDirInfo& dir : graph.edge_dirs(scoped.range))
    if (dir.pid / n == row) dirs.push_back(dir);

  // The merged stream is (src, dst, ts)-sorted, so parallel links are
  // adjacent and collapse with one look-back.
  VertexId prev_src = kInvalidVertex;
  VertexId prev_dst = kInvalidVertex;
  graph.read_edges_dirs(dirs, scoped, [&](Edge&& e) {
    if (dedup_links && e.src == prev_src && e.dst == prev_dst) return;
    prev_src = e.src;
    prev_dst = e.dst;
    sink(e);
  });
}

std::unordered_map<VertexId, uint64_t> out_degrees(const GraphView& view,
                                                   bool dedup_links,
                                                   unsigned workers,
                                                   uint32_t read_ahead) {
  uint32_t rows = view.graph().layout().n;
  std::vector<std::unordered_map<VertexId, uint64_t>> per_row(rows);
  parallel_for(rows, workers, [&](size_t row) {
    tgf::ReadOptions options;
    options.columns = std::vector<std::string>{};
    options.read_ahead = read_ahead;
    stream_row_edges(view, static_cast<uint32_t>(row), options, dedup_links,
                     [&](const Edge& e) { per_row[row][e.src] += 1; });
  });
  std::unordered_map<VertexId, uint64_t> degrees;
  for (auto& m : per_row)
    for (auto& [id, d] : m) degrees[id] += d;
  return degrees;
}

}  // namespace detail

}  // namespace tsgraph
