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

// BSP vertex-centric runtime. A superstep delivers the previous step's
// messages, runs compute on every active vertex, then streams edge files
// to scatter broadcast messages along out-edges. Vertex state lives in
// memory, partitioned like the vertex files; edge data is only ever
// streamed block by block. Results are identical for any worker count:
// message buffers are indexed by shard or matrix row (never by worker) and
// folded in a fixed order.

#ifndef TSGRAPH_ENGINE_HPP
#define TSGRAPH_ENGINE_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <cstring>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <thread>
#include <type_traits>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "tsgraph/graph.hpp"

namespace tsgraph {

// ---------------------------------------------------------------------------
// Graph traversal over sorted edge file streams: resolve the frontier's
// routes, shuffle the ids to their edge partitions, stream-filter each
// partition and collect the opposite endpoints.
// ---------------------------------------------------------------------------

enum class Direction { kOut, kIn, kBoth };

Direction direction_from_name(const std::string& name);

struct TraverseOptions {
  Direction direction = Direction::kOut;
  // Optional predicate over fully-typed edges; `predicate_columns` names
  // the attribute columns it needs (none by default).
  std::function<bool(const Edge&)> edge_predicate;
  std::vector<std::string> predicate_columns;
  uint32_t read_ahead = 0;  // blocks coalesced per storage read
};

// Vertices reachable in exactly `hops` steps from `input` (deduplicated,
// sorted). hops = 0 returns the input set itself.
std::vector<VertexId> traverse(const GraphView& view,
                               std::span<const VertexId> input, uint64_t hops,
                               const TraverseOptions& options = {});

// ---------------------------------------------------------------------------
// Message shuffle
// ---------------------------------------------------------------------------

template <class Msg>
struct EngineMessage {
  VertexId dst = kInvalidVertex;
  VertexId sender = kInvalidVertex;
  Msg payload{};
};

namespace detail {

template <class Msg>
std::array<uint8_t, sizeof(Msg)> message_bytes(const Msg& m) {
  static_assert(std::is_trivially_copyable_v<Msg>,
                "engine messages must be trivially copyable");
  std::array<uint8_t, sizeof(Msg)> out;
  std::memcpy(out.data(), &m, sizeof(Msg));
  return out;
}

template <class Msg>
bool message_order(const EngineMessage<Msg>& a, const EngineMessage<Msg>& b) {
  if (a.dst != b.dst) return a.dst < b.dst;
  if (a.sender != b.sender) return a.sender < b.sender;
  return message_bytes(a.payload) < message_bytes(b.payload);
}

}  // namespace detail

// Groups a message multiset by destination vertex partition; batches are
// sorted by (destination id, payload) and conserve the input multiset.
template <class Msg>
std::map<VertexPartitionId, std::vector<EngineMessage<Msg>>> shuffle_messages(
    std::vector<EngineMessage<Msg>> messages, const PartitionLayout& layout) {
  std::map<VertexPartitionId, std::vector<EngineMessage<Msg>>> batches;
  for (auto& m : messages)
    batches[vertex_partition(m.dst, layout)].push_back(m);
  for (auto& [pid, batch] : batches)
    std::sort(batch.begin(), batch.end(), detail::message_order<Msg>);
  return batches;
}

// ---------------------------------------------------------------------------
// Vertex programs
// ---------------------------------------------------------------------------

struct EngineConfig {
  unsigned workers = 1;
  uint64_t max_supersteps = 100;
  uint32_t read_ahead = 0;  // blocks coalesced per storage read
};

struct AggregatorSpec {
  size_t sum_slots = 0;
  size_t max_slots = 0;
};

struct EngineStats {
  uint64_t supersteps = 0;
  uint64_t messages = 0;
  uint64_t active_compute_calls = 0;
};

template <class Msg>
class ComputeContext;

template <class State, class Msg>
class VertexProgram {
 public:
  using state_type = State;
  using message_type = Msg;

  struct VertexInfo {
    VertexId id = kInvalidVertex;
    uint64_t out_degree = 0;  // populated when needs_out_degree()
    uint64_t vertex_count = 0;
  };

  virtual ~VertexProgram() = default;

  virtual State init(const VertexInfo& info) = 0;
  virtual void compute(ComputeContext<Msg>& ctx, State& state,
                       std::span<const Msg> messages) = 0;

  // Optional associative-commutative combiner.
  virtual bool has_combiner() const { return false; }
  virtual Msg combine(const Msg& a, const Msg& b) const {
    (void)a;
    (void)b;
    throw ProgramError("combine() called on a program without a combiner");
  }

  virtual bool needs_out_degree() const { return false; }
  // Collapse parallel/time-duplicated (src, dst) edges to one link when
  // scattering and when counting out-degrees.
  virtual bool dedup_parallel_edges() const { return false; }
  // Attribute columns materialized on edges passed to scatter callbacks.
  virtual std::vector<std::string> scatter_columns() const { return {}; }
  virtual AggregatorSpec aggregators() const { return {}; }
};

template <class Msg>
class ComputeContext {
 public:
  VertexId id() const { return id_; }
  uint64_t superstep() const { return superstep_; }
  uint64_t out_degree() const { return out_degree_; }
  uint64_t vertex_count() const { return vertex_count_; }

  // Aggregate values folded at the end of the previous superstep.
  double sum(size_t slot) const { return prev_sums_->at(slot); }
  double max(size_t slot) const { return prev_maxs_->at(slot); }
  void add_sum(size_t slot, double v) { sums_->at(slot) += v; }
  void add_max(size_t slot, double v) {
    auto& m = maxs_->at(slot);
    m = std::max(m, v);
  }

  void send(VertexId target, Msg payload) {
    explicit_sends_->push_back({target, id_, payload});
  }

  // Broadcast the same payload along every out-edge.
  void send_to_out_neighbors(Msg payload) {
    *scatter_ = [payload](const Edge&) { return payload; };
  }

  // Payload computed per out-edge (weights etc.).
  void send_along_out_edges(std::function<Msg(const Edge&)> fn) {
    *scatter_ = std::move(fn);
  }

  void vote_to_halt() { voted_ = true; }
  bool voted() const { return voted_; }

  ComputeContext(VertexId id, uint64_t superstep, uint64_t out_degree,
                 uint64_t vertex_count, const std::vector<double>* prev_sums,
                 const std::vector<double>* prev_maxs,
                 std::vector<double>* sums, std::vector<double>* maxs,
                 std::vector<EngineMessage<Msg>>* explicit_sends,
                 std::function<Msg(const Edge&)>* scatter)
      : id_(id),
        superstep_(superstep),
        out_degree_(out_degree),
        vertex_count_(vertex_count),
        prev_sums_(prev_sums),
        prev_maxs_(prev_maxs),
        sums_(sums),
        maxs_(maxs),
        explicit_sends_(explicit_sends),
        scatter_(scatter) {}

 private:
  VertexId id_;
  uint64_t superstep_;
  uint64_t out_degree_;
  uint64_t vertex_count_;
  const std::vector<double>* prev_sums_;
  const std::vector<double>* prev_maxs_;
  std::vector<double>* sums_;
  std::vector<double>* maxs_;
  std::vector<EngineMessage<Msg>>* explicit_sends_;
  std::function<Msg(const Edge&)>* scatter_;
  bool voted_ = false;
};

template <class State>
struct EngineResult {
  std::vector<std::pair<VertexId, State>> states;  // sorted by id
  EngineStats stats;
  // Aggregate values per superstep, folded in shard order.
  std::vector<std::vector<double>> sum_history;
  std::vector<std::vector<double>> max_history;
};

// ---------------------------------------------------------------------------
// Worker pool helper: runs fn(i) for i in [0, count) on `workers` threads;
// the first exception wins and is rethrown after all threads join.
// ---------------------------------------------------------------------------

namespace detail {

inline void parallel_for(size_t count, unsigned workers,
                         const std::function<void(size_t)>& fn) {
  if (count == 0) return;
  if (workers <= 1 || count == 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  unsigned spawn = std::min<size_t>(workers, count);
  threads.reserve(spawn);
  for (unsigned w = 0; w < spawn; ++w) threads.emplace_back(body);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

// Streams one matrix row's directories as a single sorted edge stream.
void stream_row_edges(const GraphView& view, uint32_t row,
                      const tgf::ReadOptions& options, bool dedup_links,
                      const std::function<void(const Edge&)>& sink);

// Out-degrees for every vertex in the view (optionally counting parallel
// edges once), computed with one streaming pass per matrix row.
std::unordered_map<VertexId, uint64_t> out_degrees(const GraphView& view,
                                                   bool dedup_links,
                                                   unsigned workers,
                                                   uint32_t read_ahead = 0);

}  // namespace detail

// ---------------------------------------------------------------------------
// BSP driver
// ---------------------------------------------------------------------------

template <class State, class Msg>
EngineResult<State> run_program(const GraphView& view,
                                VertexProgram<State, Msg>& program,
                                const EngineConfig& config) {
  if (config.max_supersteps < 1)
    throw InvalidArgument("max_supersteps must be >= 1");
  const Graph& graph = view.graph();
  const PartitionLayout& layout = graph.layout();
  const uint32_t shards_n = layout.vertex_partitions;
  const uint32_t rows_n = layout.n;

  struct Shard {
    std::vector<VertexId> ids;
    std::vector<State> states;
    std::vector<uint8_t> halted;
    std::vector<uint64_t> degrees;
    // Inbox for the current superstep: messages sorted by (sender,
    // payload) or pre-combined to one element.
    std::vector<std::vector<Msg>> inbox;
    std::vector<uint8_t> has_msg;
  };
  std::vector<Shard> shards(shards_n);

  uint64_t vertex_count = 0;
  for (uint32_t s = 0; s < shards_n; ++s) {
    shards[s].ids = graph.vertex_reader(s).ids();
    vertex_count += shards[s].ids.size();
  }

  std::unordered_map<VertexId, uint64_t> degrees;
  if (program.needs_out_degree())
    degrees = detail::out_degrees(view, program.dedup_parallel_edges(),
                                  config.workers, config.read_ahead);

  AggregatorSpec agg = program.aggregators();
  std::vector<double> prev_sums(agg.sum_slots, 0.0);
  std::vector<double> prev_maxs(agg.max_slots, 0.0);

  for (uint32_t s = 0; s < shards_n; ++s) {
    Shard& shard = shards[s];
    size_t n = shard.ids.size();
    shard.states.reserve(n);
    shard.halted.assign(n, 0);
    shard.degrees.assign(n, 0);
    shard.inbox.assign(n, {});
    shard.has_msg.assign(n, 0);
    for (size_t r = 0; r < n; ++r) {
      if (program.needs_out_degree()) {
        auto it = degrees.find(shard.ids[r]);
        shard.degrees[r] = it == degrees.end() ? 0 : it->second;
      }
      typename VertexProgram<State, Msg>::VertexInfo info{
          shard.ids[r], shard.degrees[r], vertex_count};
      shard.states.push_back(program.init(info));
    }
  }

  EngineResult<State> result;
  std::vector<std::string> scatter_cols = program.scatter_columns();

  struct ShardOutput {
    std::vector<EngineMessage<Msg>> sends;
    std::vector<std::pair<VertexId, std::function<Msg(const Edge&)>>> scatter;
    std::vector<double> sums;
    std::vector<double> maxs;
    uint64_t compute_calls = 0;
  };

  for (uint64_t superstep = 0; superstep < config.max_supersteps; ++superstep) {
    // --- compute phase -----------------------------------------------------
    std::vector<ShardOutput> outputs(shards_n);
    detail::parallel_for(shards_n, config.workers, [&](size_t s) {
      Shard& shard = shards[s];
      ShardOutput& out = outputs[s];
      out.sums.assign(agg.sum_slots, 0.0);
      out.maxs.assign(agg.max_slots, 0.0);
      for (size_t r = 0; r < shard.ids.size(); ++r) {
        if (!shard.has_msg[r] && shard.halted[r]) continue;
        std::function<Msg(const Edge&)> scatter;
        ComputeContext<Msg> ctx(shard.ids[r], superstep, shard.degrees[r],
                                vertex_count, &prev_sums, &prev_maxs,
                                &out.sums, &out.maxs, &out.sends, &scatter);
        try {
          program.compute(ctx, shard.states[r], shard.inbox[r]);
        } catch (const Error&) {
          throw;
        } catch (const std::exception& e) {
          throw ProgramError("superstep " + std::to_string(superstep) +
                             ", vertex " + std::to_string(shard.ids[r]) +
                             ": " + e.what());
        }
        out.compute_calls += 1;
        shard.halted[r] = ctx.voted() ? 1 : 0;
        shard.inbox[r].clear();
        shard.has_msg[r] = 0;
        if (scatter)
          out.scatter.emplace_back(shard.ids[r], std::move(scatter));
      }
    });

    // --- scatter phase: stream edges row by row ----------------------------
    std::vector<std::unordered_map<VertexId, std::function<Msg(const Edge&)>>>
        row_senders(rows_n);
    std::vector<std::vector<VertexId>> row_filter(rows_n);
    for (uint32_t s = 0; s < shards_n; ++s) {
      for (auto& [id, fn] : outputs[s].scatter) {
        uint32_t row =
            static_cast<uint32_t>(seeded_hash(layout.row_seed, id) % rows_n);
        row_senders[row].emplace(id, std::move(fn));
        row_filter[row].push_back(id);
      }
    }
    std::vector<std::vector<EngineMessage<Msg>>> row_msgs(rows_n);
    detail::parallel_for(rows_n, config.workers, [&](size_t row) {
      if (row_senders[row].empty()) return;
      std::sort(row_filter[row].begin(), row_filter[row].end());
      tgf::ReadOptions options;
      options.role = tgf::FilterRole::kSrc;
      options.filter = row_filter[row];
      options.columns = scatter_cols;
      options.lenient_columns = true;
      options.read_ahead = config.read_ahead;
      detail::stream_row_edges(
          view, static_cast<uint32_t>(row), options,
          program.dedup_parallel_edges(), [&](const Edge& e) {
            const auto& fn = row_senders[row].find(e.src)->second;
            row_msgs[row].push_back({e.dst, e.src, fn(e)});
          });
    });

    // --- delivery: canonical buffer order, then per-vertex sort/fold -------
    uint64_t delivered = 0;
    std::atomic<uint64_t> delivered_atomic{0};
    detail::parallel_for(shards_n, config.workers, [&](size_t s) {
      Shard& shard = shards[s];
      std::vector<std::vector<std::pair<VertexId, Msg>>> incoming(
          shard.ids.size());
      uint64_t local_count = 0;
      auto deliver = [&](const EngineMessage<Msg>& m) {
        if (vertex_partition(m.dst, layout) != s) return;
        auto it = std::lower_bound(shard.ids.begin(), shard.ids.end(), m.dst);
        if (it == shard.ids.end() || *it != m.dst) return;  // unknown target
        incoming[static_cast<size_t>(it - shard.ids.begin())].emplace_back(
            m.sender, m.payload);
        ++local_count;
      };
      for (uint32_t src_shard = 0; src_shard < shards_n; ++src_shard)
        for (const auto& m : outputs[src_shard].sends) deliver(m);
      for (uint32_t row = 0; row < rows_n; ++row)
        for (const auto& m : row_msgs[row]) deliver(m);

      for (size_t r = 0; r < shard.ids.size(); ++r) {
        auto& in = incoming[r];
        if (in.empty()) continue;
        shard.has_msg[r] = 1;
        auto& box = shard.inbox[r];
        if (program.has_combiner()) {
          Msg acc = in[0].second;
          for (size_t i = 1; i < in.size(); ++i)
            acc = program.combine(acc, in[i].second);
          box.assign(1, acc);
        } else {
          std::sort(in.begin(), in.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first < b.first;
            return detail::message_bytes(a.second) <
                   detail::message_bytes(b.second);
          });
          box.clear();
          box.reserve(in.size());
          for (auto& [sender, payload] : in) box.push_back(payload);
        }
      }
      delivered_atomic += local_count;
    });
    delivered = delivered_atomic.load();

    // --- aggregates, stats, termination ------------------------------------
    std::vector<double> sums(agg.sum_slots, 0.0);
    std::vector<double> maxs(agg.max_slots, 0.0);
    for (uint32_t s = 0; s < shards_n; ++s) {
      for (size_t i = 0; i < agg.sum_slots; ++i) sums[i] += outputs[s].sums[i];
      for (size_t i = 0; i < agg.max_slots; ++i)
        maxs[i] = std::max(maxs[i], outputs[s].maxs[i]);
      result.stats.active_compute_calls += outputs[s].compute_calls;
    }
    result.sum_history.push_back(sums);
    result.max_history.push_back(maxs);
    prev_sums = std::move(sums);
    prev_maxs = std::move(maxs);
    result.stats.messages += delivered;
    result.stats.supersteps = superstep + 1;

    bool any_active = delivered > 0;
    for (uint32_t s = 0; s < shards_n && !any_active; ++s)
      for (size_t r = 0; r < shards[s].ids.size(); ++r)
        if (!shards[s].halted[r]) {
          any_active = true;
          break;
        }
    if (!any_active) break;
  }

  for (uint32_t s = 0; s < shards_n; ++s)
    for (size_t r = 0; r < shards[s].ids.size(); ++r)
      result.states.emplace_back(shards[s].ids[r], shards[s].states[r]);
  std::sort(result.states.begin(), result.states.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return result;
}

}  // namespace tsgraph

#endif  // TSGRAPH_ENGINE_HPP
