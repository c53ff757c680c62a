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

#include "tsgraph/algorithms.hpp"

#include <cmath>
#include <limits>

namespace tsgraph {

namespace {

// ---------------------------------------------------------------------------
// PageRank
// ---------------------------------------------------------------------------

struct PageRankState {
  double rank = 0.0;
  uint64_t out_degree = 0;
};

// Aggregator slots: sum 0 = dangling mass, sum 1 = rank total,
// max 0 = L-inf rank change.
class PageRankProgram : public VertexProgram<PageRankState, double> {
 public:
  PageRankProgram(double damping, double tolerance, bool count_multiplicity)
      : damping_(damping),
        tolerance_(tolerance),
        count_multiplicity_(count_multiplicity) {}

  PageRankState init(const VertexInfo& info) override {
    n_ = info.vertex_count;
    return {1.0 / static_cast<double>(info.vertex_count), info.out_degree};
  }

  void compute(ComputeContext<double>& ctx, PageRankState& state,
               std::span<const double> messages) override {
    uint64_t s = ctx.superstep();
    if (s >= 2 && ctx.max(0) < tolerance_) {
      ctx.add_sum(1, state.rank);
      ctx.vote_to_halt();
      return;
    }
    if (s > 0) {
      double incoming = messages.empty() ? 0.0 : messages.front();
      double dangling = ctx.sum(0);
      double n = static_cast<double>(n_);
      double next =
          (1.0 - damping_) / n + damping_ * (incoming + dangling / n);
      ctx.add_max(0, std::fabs(next - state.rank));
      state.rank = next;
    }
    ctx.add_sum(1, state.rank);
    if (state.out_degree > 0)
      ctx.send_to_out_neighbors(state.rank /
                                static_cast<double>(state.out_degree));
    else
      ctx.add_sum(0, state.rank);
  }

  bool has_combiner() const override { return true; }
  double combine(const double& a, const double& b) const override {
    return a + b;
  }
  bool needs_out_degree() const override { return true; }
  bool dedup_parallel_edges() const override { return !count_multiplicity_; }
  AggregatorSpec aggregators() const override { return {2, 1}; }

 private:
  double damping_;
  double tolerance_;
  bool count_multiplicity_;
  uint64_t n_ = 0;
};

// ---------------------------------------------------------------------------
// SSSP
// ---------------------------------------------------------------------------

struct SsspState {
  double distance = std::numeric_limits<double>::infinity();
};

class SsspProgram : public VertexProgram<SsspState, double> {
 public:
  SsspProgram(VertexId source, std::optional<std::string> weight_column)
      : source_(source), weight_column_(std::move(weight_column)) {}

  SsspState init(const VertexInfo& info) override {
    SsspState s;
    if (info.id == source_) s.distance = 0.0;
    return s;
  }

  void compute(ComputeContext<double>& ctx, SsspState& state,
               std::span<const double> messages) override {
    bool improved = false;
    if (ctx.superstep() == 0) {
      improved = ctx.id() == source_;
    } else if (!messages.empty() && messages.front() < state.distance) {
      state.distance = messages.front();
      improved = true;
    }
    if (improved) relax(ctx, state.distance);
    ctx.vote_to_halt();
  }

  bool has_combiner() const override { return true; }
  double combine(const double& a, const double& b) const override {
    return std::min(a, b);
  }
  std::vector<std::string> scatter_columns() const override {
    if (weight_column_) return {*weight_column_};
    return {};
  }

 private:
  void relax(ComputeContext<double>& ctx, double distance) const {
    if (!weight_column_) {
      ctx.send_to_out_neighbors(distance + 1.0);
      return;
    }
    // Edge types without the weight column contribute unit weights.
    ctx.send_along_out_edges([distance](const Edge& e) {
      double w = e.attrs.empty() ? 1.0 : e.attrs.at(0).as_number();
      if (w < 0.0)
        throw NegativeWeight("edge " + std::to_string(e.src) + "->" +
                             std::to_string(e.dst));
      return distance + w;
    });
  }

  VertexId source_;
  std::optional<std::string> weight_column_;
};

}  // namespace

PageRankResult pagerank(const GraphView& view,
                        const PageRankOptions& options) {
  if (!(options.damping > 0.0 && options.damping < 1.0))
    throw InvalidArgument("damping must be in (0,1)");
  if (view.graph().vertex_count() == 0)
    throw EmptyGraph("pagerank needs at least one vertex");
  PageRankProgram program(options.damping, options.tolerance,
                          options.count_multiplicity);
  EngineConfig config;
  config.workers = options.workers;
  config.read_ahead = options.read_ahead;
  // One warm-up superstep plus one per iteration plus the halting round.
  config.max_supersteps = options.max_iterations + 2;
  auto result = run_program(view, program, config);
  PageRankResult out;
  out.ranks.reserve(result.states.size());
  for (const auto& [id, state] : result.states)
    out.ranks.emplace_back(id, state.rank);
  for (const auto& sums : result.sum_history) out.rank_sums.push_back(sums[1]);
  out.stats = result.stats;
  return out;
}

SsspResult sssp(const GraphView& view, VertexId source,
                const SsspOptions& options) {
  {
    auto& reader = view.graph().vertex_reader(
        vertex_partition(source, view.graph().layout()));
    if (!reader.row_of(source))
      throw UnknownVertex(std::to_string(source));
  }
  if (options.weight_column) {
    bool declared = false;
    for (const auto& et : view.graph().manifest().schema.edge_types)
      for (const auto& col : et.columns)
        declared = declared || col.name == *options.weight_column;
    if (!declared)
      throw UnknownAttribute("weight column '" + *options.weight_column +
                             "' on any edge type");
  }
  SsspProgram program(source, options.weight_column);
  EngineConfig config;
  config.workers = options.workers;
  config.read_ahead = options.read_ahead;
  config.max_supersteps = options.max_supersteps;
  auto result = run_program(view, program, config);
  SsspResult out;
  out.distances.reserve(result.states.size());
  for (const auto& [id, state] : result.states)
    out.distances.emplace_back(id, state.distance);
  out.stats = result.stats;
  return out;
}

std::vector<VertexId> k_degree_query(const GraphView& view,
                                     std::span<const VertexId> seeds,
                                     uint64_t k,
                                     const KDegreeOptions& options) {
  std::set<VertexId> visited(seeds.begin(), seeds.end());
  std::vector<VertexId> frontier(visited.begin(), visited.end());
  TraverseOptions traverse_options;
  traverse_options.direction = options.direction;
  traverse_options.read_ahead = options.read_ahead;
  for (uint64_t hop = 0; hop < k && !frontier.empty(); ++hop) {
    std::vector<VertexId> reached =
        traverse(view, frontier, 1, traverse_options);
    frontier.clear();
    for (VertexId id : reached)
      if (visited.insert(id).second) frontier.push_back(id);
  }
  return std::vector<VertexId>(visited.begin(), visited.end());
}

bool AttributePredicate::eval(
    const std::optional<AttributeValue>& value) const {
  if (!value.has_value()) return false;
  int cmp;
  if (value->type() == AttrType::kString) {
    cmp = value->as_string().compare(literal.as_string());
  } else {
    double lhs = value->as_number();
    double rhs = literal.as_number();
    cmp = lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  switch (op) {
    case Op::kLt: return cmp < 0;
    case Op::kLe: return cmp <= 0;
    case Op::kGt: return cmp > 0;
    case Op::kGe: return cmp >= 0;
    case Op::kEq: return cmp == 0;
    case Op::kNe: return cmp != 0;
  }
  return false;
}

AttributePredicate AttributePredicate::parse(const std::string& text,
                                             const GraphSchema& schema) {
  static const std::pair<const char*, AttributePredicate::Op> kOps[] = {
      {"<=", Op::kLe}, {">=", Op::kGe}, {"==", Op::kEq},
      {"!=", Op::kNe}, {"<", Op::kLt},  {">", Op::kGt},
  };
  for (const auto& [token, op] : kOps) {
    auto pos = text.find(token);
    if (pos == std::string::npos) continue;
    AttributePredicate p;
    p.attribute = text.substr(0, pos);
    while (!p.attribute.empty() && p.attribute.back() == ' ')
      p.attribute.pop_back();
    p.op = op;
    std::string rhs = text.substr(pos + std::strlen(token));
    while (!rhs.empty() && rhs.front() == ' ') rhs.erase(rhs.begin());
    const Column* col = schema.find_vertex_attr(p.attribute);
    if (col == nullptr)
      throw UnknownAttribute("vertex attribute '" + p.attribute + "'");
    p.literal = AttributeValue::parse(col->type, rhs);
    return p;
  }
  throw InvalidArgument("cannot parse predicate '" + text + "'");
}

std::map<VertexId, uint64_t> filtered_neighbor_count(
    const GraphView& view, std::span<const VertexId> seeds,
    const AttributePredicate& predicate) {
  std::map<VertexId, uint64_t> out;
  TraverseOptions options;
  options.direction = Direction::kBoth;
  for (VertexId seed : seeds) {
    auto value = view.attribute_at(seed, predicate.attribute);
    if (!predicate.eval(value)) continue;
    std::vector<VertexId> one = {seed};
    out[seed] = traverse(view, one, 1, options).size();
  }
  return out;
}

}  // namespace tsgraph
