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

// Placement logic: vertex partitioning by id hash and 3-dimensional
// (src, dst, hour) edge partitioning on an n x n matrix. With the row
// derived from src alone, a vertex's source-role edges stay within one
// row (n cells); within a single hour bucket its edges in both roles
// touch at most 2n-1 partitions (one row plus one column).

#ifndef TSGRAPH_PARTITION_HPP
#define TSGRAPH_PARTITION_HPP

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "tsgraph/types.hpp"

namespace tsgraph {

// 64-bit avalanche finalizer (splitmix-style); the basis for both row and
// column hashes, keyed by per-graph seeds from the manifest.
uint64_t mix64(uint64_t x);
uint64_t seeded_hash(uint64_t seed, uint64_t value);

struct PartitionLayout {
  uint32_t n = 4;             // matrix side; edge partition count = n^2
  uint32_t vertex_partitions = 4;
  uint64_t row_seed = 0x9e3779b97f4a7c15ull;
  uint64_t col_seed = 0xc2b2ae3d27d4eb4full;

  uint32_t edge_partition_count() const { return n * n; }

  static PartitionLayout checked(uint32_t n, uint32_t vertex_partitions,
                                 uint64_t row_seed, uint64_t col_seed);

  bool operator==(const PartitionLayout& o) const = default;
};

using EdgePartitionId = uint32_t;  // row * n + col, < 2^30
using VertexPartitionId = uint32_t;

inline constexpr uint32_t kMaxEdgePartitions = 1u << 30;

// Row and column of an edge partition id.
inline uint32_t partition_row(EdgePartitionId pid, const PartitionLayout& l) {
  return pid / l.n;
}
inline uint32_t partition_col(EdgePartitionId pid, const PartitionLayout& l) {
  return pid % l.n;
}

// Vertex partition from the vertex id alone; stable across runs for a
// given layout.
VertexPartitionId vertex_partition(VertexId id, const PartitionLayout& layout);

// row = h1(src) mod n; col = h2(dst, hour_bucket(ts)) mod n.
EdgePartitionId edge_partition(VertexId src, VertexId dst, Timestamp ts,
                               const PartitionLayout& layout);

// ---------------------------------------------------------------------------
// Scatter statistics: how widely each vertex's incident edges spread over
// edge partitions, plus the per-partition load histogram.
// ---------------------------------------------------------------------------

struct VertexScatter {
  std::set<EdgePartitionId> src_partitions;
  std::set<EdgePartitionId> dst_partitions;

  size_t src_count() const { return src_partitions.size(); }
  size_t dst_count() const { return dst_partitions.size(); }
  size_t union_count() const;
};

struct ScatterReport {
  std::map<VertexId, VertexScatter> per_vertex;
  std::vector<uint64_t> partition_load;  // edges per pid

  size_t max_src_scatter() const;
  size_t max_union_scatter() const;
  double load_imbalance() const;  // max load / mean load over non-empty layout
};

ScatterReport scatter_report(std::span<const Edge> edges,
                             const PartitionLayout& layout);

}  // namespace tsgraph

#endif  // TSGRAPH_PARTITION_HPP
