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

// Workloads expressed as vertex programs or traversals over snapshot
// views: PageRank, single-source shortest paths, k-degree queries and the
// time-filtered neighbor count.

#ifndef TSGRAPH_ALGORITHMS_HPP
#define TSGRAPH_ALGORITHMS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsgraph/engine.hpp"

namespace tsgraph {

// ---------------------------------------------------------------------------
// PageRank: synchronous power iteration with uniform teleport and uniform
// redistribution of dangling mass. Parallel and time-duplicated edges
// between one (src, dst) pair count as a single link unless
// count_multiplicity is set.
// ---------------------------------------------------------------------------

struct PageRankOptions {
  double damping = 0.85;
  uint64_t max_iterations = 100;
  double tolerance = 1e-9;  // L-inf stop threshold on rank change
  bool count_multiplicity = false;
  unsigned workers = 1;
  uint32_t read_ahead = 0;
};

struct PageRankResult {
  std::vector<std::pair<VertexId, double>> ranks;  // sorted by id
  std::vector<double> rank_sums;                   // per superstep
  EngineStats stats;
};

PageRankResult pagerank(const GraphView& view, const PageRankOptions& options);

// ---------------------------------------------------------------------------
// SSSP: Bellman-Ford style vertex program with a min combiner. Unreached
// vertices keep +infinity. Weights come from an edge attribute column, or
// 1.0 per edge when none is named; negative weights abort the run.
// ---------------------------------------------------------------------------

struct SsspOptions {
  std::optional<std::string> weight_column;
  uint64_t max_supersteps = 100000;
  unsigned workers = 1;
  uint32_t read_ahead = 0;
};

struct SsspResult {
  std::vector<std::pair<VertexId, double>> distances;  // sorted by id
  EngineStats stats;
};

SsspResult sssp(const GraphView& view, VertexId source,
                const SsspOptions& options);

// ---------------------------------------------------------------------------
// k-degree query: all vertices within <= k hops of the seeds, sorted.
// ---------------------------------------------------------------------------

struct KDegreeOptions {
  Direction direction = Direction::kOut;
  uint32_t read_ahead = 0;
};

std::vector<VertexId> k_degree_query(const GraphView& view,
                                     std::span<const VertexId> seeds,
                                     uint64_t k,
                                     const KDegreeOptions& options = {});

// ---------------------------------------------------------------------------
// Time-filtered neighbor count: for each seed whose attribute passes the
// predicate at the view's timestamp, the number of distinct one-hop
// neighbors (both roles); failing or unknown seeds are absent.
// ---------------------------------------------------------------------------

// Comparison of one named vertex attribute against a literal, e.g.
// "age > 16". Numeric attributes compare numerically, strings
// lexicographically. An absent attribute value fails every predicate.
struct AttributePredicate {
  enum class Op { kLt, kLe, kGt, kGe, kEq, kNe };

  std::string attribute;
  Op op = Op::kGt;
  AttributeValue literal;

  bool eval(const std::optional<AttributeValue>& value) const;

  // Parses "name<op>value" with op in {<, <=, >, >=, ==, !=}; the literal
  // is typed by the schema.
  static AttributePredicate parse(const std::string& text,
                                  const GraphSchema& schema);
};

std::map<VertexId, uint64_t> filtered_neighbor_count(
    const GraphView& view, std::span<const VertexId> seeds,
    const AttributePredicate& predicate);

}  // namespace tsgraph

#endif  // TSGRAPH_ALGORITHMS_HPP
