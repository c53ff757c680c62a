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

#include "tsgraph/partition.hpp"

#include <algorithm>

namespace tsgraph {

uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t seeded_hash(uint64_t seed, uint64_t value) {
  return mix64(seed + mix64(value));
}

PartitionLayout PartitionLayout::checked(uint32_t n,
                                         uint32_t vertex_partitions,
                                         uint64_t row_seed,
                                         uint64_t col_seed) {
  if (n < 1) throw InvalidArgument("matrix side n must be >= 1");
  if (vertex_partitions < 1)
    throw InvalidArgument("vertex partition count must be >= 1");
  // Route entries reserve 30 bits for the partition id.
  if (static_cast<uint64_t>(n) * n > kMaxEdgePartitions)
    throw InvalidArgument("n^2 exceeds the 2^30 partition id limit");
  PartitionLayout layout;
  layout.n = n;
  layout.vertex_partitions = vertex_partitions;
  layout.row_seed = row_seed;
  layout.col_seed = col_seed;
  return layout;
}

VertexPartitionId vertex_partition(VertexId id, const PartitionLayout& layout) {
  return static_cast<VertexPartitionId>(seeded_hash(layout.row_seed, id) %
                                        layout.vertex_partitions);
}

EdgePartitionId edge_partition(VertexId src, VertexId dst, Timestamp ts,
                               const PartitionLayout& layout) {
  uint32_t row =
      static_cast<uint32_t>(seeded_hash(layout.row_seed, src) % layout.n);
  uint64_t col_hash =
      seeded_hash(layout.col_seed, mix64(dst) + hour_bucket(ts));
  uint32_t col = static_cast<uint32_t>(col_hash % layout.n);
  return row * layout.n + col;
}

size_t VertexScatter::union_count() const {
  std::set<EdgePartitionId> all(src_partitions);
  all.insert(dst_partitions.begin(), dst_partitions.end());
  return all.size();
}

size_t ScatterReport::max_src_scatter() const {
  size_t m = 0;
  for (const auto& [id, s] : per_vertex) m = std::max(m, s.src_count());
  return m;
}

size_t ScatterReport::max_union_scatter() const {
  size_t m = 0;
  for (const auto& [id, s] : per_vertex) m = std::max(m, s.union_count());
  return m;
}

double ScatterReport::load_imbalance() const {
  uint64_t total = 0;
  uint64_t max_load = 0;
  for (uint64_t l : partition_load) {
    total += l;
    max_load = std::max(max_load, l);
  }
  if (total == 0 || partition_load.empty()) return 0.0;
  double mean = static_cast<double>(total) / partition_load.size();
  return static_cast<double>(max_load) / mean;
}

ScatterReport scatter_report(std::span<const Edge> edges,
                             const PartitionLayout& layout) {
  ScatterReport report;
  report.partition_load.assign(layout.edge_partition_count(), 0);
  for (const Edge& e : edges) {
    EdgePartitionId pid = edge_partition(e.src, e.dst, e.ts, layout);
    report.partition_load[pid]++;
    report.per_vertex[e.src].src_partitions.insert(pid);
    report.per_vertex[e.dst].dst_partitions.insert(pid);
  }
  return report;
}

}  // namespace tsgraph
