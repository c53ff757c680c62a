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

#include <doctest.h>

#include <random>

#include "tsgraph/engine.hpp"
#include "../common/replay.hpp"
#include "../common/testutil.hpp"

using namespace tsgraph;
using namespace tsgraph::testutil;

namespace {

Edge simple_edge(VertexId src, VertexId dst, Timestamp ts,
                 const std::string& type = "follows") {
  Edge e;
  e.src = src;
  e.dst = dst;
  e.edge_type = type;
  e.ts = ts;
  if (type == "follows")
    e.attrs = {AttributeValue(1.0), AttributeValue(std::string("n"))};
  else
    e.attrs = {AttributeValue(int32_t{1})};
  return e;
}

BuiltGraph tiny_graph(const std::string& root, std::vector<Edge> edges,
                      uint32_t n = 2) {
  RandomGraph g;
  g.schema = small_schema("tiny");
  g.edges = std::move(edges);
  return build_graph(root, g, PartitionLayout::checked(n, 2, 3, 4));
}

}  // namespace

TEST_CASE("traverse with zero hops returns the input set") {
  TempDir dir;
  auto built = tiny_graph(dir.path(), {simple_edge(1, 2, 100)});
  GraphView view = built.graph->view(kMaxTimestamp);
  std::vector<VertexId> input = {2, 1, 2};
  CHECK(traverse(view, input, 0) == std::vector<VertexId>{1, 2});
}

TEST_CASE("one-hop traverse follows adjacency") {
  TempDir dir;
  auto built = tiny_graph(
      dir.path(), {simple_edge(1, 2, 100), simple_edge(1, 3, 200)});
  GraphView view = built.graph->view(kMaxTimestamp);
  std::vector<VertexId> input = {1};
  CHECK(traverse(view, input, 1) == std::vector<VertexId>{2, 3});

  TraverseOptions in_dir;
  in_dir.direction = Direction::kIn;
  std::vector<VertexId> two = {2};
  CHECK(traverse(view, two, 1, in_dir) == std::vector<VertexId>{1});

  TraverseOptions both;
  both.direction = Direction::kBoth;
  std::vector<VertexId> three = {3};
  CHECK(traverse(view, three, 1, both) == std::vector<VertexId>{1});
}

TEST_CASE("traverse honors edge predicates") {
  TempDir dir;
  Edge heavy = simple_edge(1, 2, 100);
  heavy.attrs[0] = AttributeValue(9.0);
  auto built = tiny_graph(dir.path(), {heavy, simple_edge(1, 3, 200)});
  GraphView view = built.graph->view(kMaxTimestamp);
  TraverseOptions options;
  options.predicate_columns = {"weight"};
  options.edge_predicate = [](const Edge& e) {
    return !e.attrs.empty() && e.attrs[0].as_number() > 5.0;
  };
  std::vector<VertexId> input = {1};
  CHECK(traverse(view, input, 1, options) == std::vector<VertexId>{2});
}

TEST_CASE("traverse matches the BFS oracle on random graphs and snapshots") {
  Rng rng(21);
  for (int round = 0; round < 8; ++round) {
    TempDir dir;
    RandomGraphConfig cfg;
    cfg.edges = 400;
    cfg.vertices = 45;
    RandomGraph g = random_graph(rng, "bfs", cfg);
    auto built = build_graph(dir.path(), g,
                             PartitionLayout::checked(4, 4, rng(), rng()));
    ReplayOracle oracle(g.edges, g.updates);
    auto vertices = oracle.vertices();

    for (uint64_t hops : {1u, 2u, 3u}) {
      Timestamp t = rand_in(rng, cfg.ts_min, cfg.ts_max);
      GraphView view = built.graph->view(t);
      std::vector<VertexId> seeds;
      for (int s = 0; s < 3; ++s)
        seeds.push_back(vertices[rand_in(rng, 0, vertices.size() - 1)]);
      for (Direction d : {Direction::kOut, Direction::kIn, Direction::kBoth}) {
        TraverseOptions options;
        options.direction = d;
        CHECK(traverse(view, seeds, hops, options) ==
              oracle.frontier_at(seeds, hops, TimeRange::up_to(t), d));
      }
    }
  }
}

TEST_CASE("traverse output stays within the view's vertices") {
  Rng rng(22);
  TempDir dir;
  RandomGraphConfig cfg;
  cfg.edges = 150;
  cfg.vertices = 25;
  RandomGraph g = random_graph(rng, "frontier", cfg);
  auto built =
      build_graph(dir.path(), g, PartitionLayout::checked(2, 2, 1, 2));
  ReplayOracle oracle(g.edges, g.updates);
  auto vertices = oracle.vertices();
  GraphView view = built.graph->view(kMaxTimestamp);
  std::vector<VertexId> seeds = {vertices[0], vertices[1]};
  auto out = traverse(view, seeds, 2);
  for (VertexId v : out)
    CHECK(std::binary_search(vertices.begin(), vertices.end(), v));
}

TEST_CASE("shuffle groups by vertex partition and conserves messages") {
  PartitionLayout layout = PartitionLayout::checked(2, 4, 11, 12);
  CHECK(shuffle_messages<uint64_t>({}, layout).empty());

  std::vector<EngineMessage<uint64_t>> one = {{42, 7, 1}};
  auto batches = shuffle_messages(one, layout);
  REQUIRE(batches.size() == 1);
  CHECK(batches.begin()->first == vertex_partition(42, layout));

  std::mt19937_64 rng(23);
  std::vector<EngineMessage<uint64_t>> msgs;
  for (int i = 0; i < 10000; ++i)
    msgs.push_back({rng() % 500 + 1, rng() % 500 + 1, rng() % 100});
  auto grouped = shuffle_messages(msgs, layout);
  std::vector<std::tuple<VertexId, VertexId, uint64_t>> flat, orig;
  for (const auto& [pid, batch] : grouped) {
    bool sorted = std::is_sorted(
        batch.begin(), batch.end(),
        [](const auto& a, const auto& b) { return a.dst < b.dst; });
    CHECK(sorted);
    for (const auto& m : batch) {
      CHECK(vertex_partition(m.dst, layout) == pid);
      flat.emplace_back(m.dst, m.sender, m.payload);
    }
  }
  for (const auto& m : msgs) orig.emplace_back(m.dst, m.sender, m.payload);
  std::sort(flat.begin(), flat.end());
  std::sort(orig.begin(), orig.end());
  CHECK(flat == orig);
}

namespace {

// Halts immediately; state records the superstep count seen.
struct HaltProgram : VertexProgram<uint64_t, uint64_t> {
  uint64_t init(const VertexInfo& info) override { return info.id * 10; }
  void compute(ComputeContext<uint64_t>& ctx, uint64_t&,
               std::span<const uint64_t>) override {
    ctx.vote_to_halt();
  }
};

// Sends its id to the other vertex of a 2-cycle each round.
struct EchoProgram : VertexProgram<std::vector<uint64_t>, uint64_t> {
  std::vector<uint64_t> init(const VertexInfo&) override { return {}; }
  void compute(ComputeContext<uint64_t>& ctx, std::vector<uint64_t>& seen,
               std::span<const uint64_t> messages) override {
    for (uint64_t m : messages) seen.push_back(m);
    if (ctx.superstep() == 0) ctx.send_to_out_neighbors(ctx.id());
    ctx.vote_to_halt();
  }
};

struct ThrowingProgram : VertexProgram<int, uint64_t> {
  int init(const VertexInfo&) override { return 0; }
  void compute(ComputeContext<uint64_t>&, int&,
               std::span<const uint64_t>) override {
    throw std::runtime_error("boom");
  }
};

// Tracks compute calls per superstep; any compute that starts before the
// previous superstep finished everywhere trips the violation flag.
struct EpochProgram : VertexProgram<int, uint64_t> {
  std::array<std::atomic<uint64_t>, 8>* epochs;
  uint64_t expected;
  std::atomic<bool>* violated;

  int init(const VertexInfo&) override { return 0; }
  void compute(ComputeContext<uint64_t>& ctx, int&,
               std::span<const uint64_t>) override {
    uint64_t s = ctx.superstep();
    if (s > 0 && (*epochs)[s - 1].load() != expected) *violated = true;
    (*epochs)[s] += 1;
    if (s < 3) ctx.send(ctx.id(), 1);  // keep every vertex active
    ctx.vote_to_halt();
  }
};

// Every vertex sends its id to one collector vertex.
struct FanInProgram : VertexProgram<uint64_t, uint64_t> {
  VertexId target;
  uint64_t init(const VertexInfo&) override { return 0; }
  void compute(ComputeContext<uint64_t>& ctx, uint64_t& received,
               std::span<const uint64_t> messages) override {
    received += messages.size();
    if (ctx.superstep() == 0) ctx.send(target, ctx.id());
    ctx.vote_to_halt();
  }
};

}  // namespace

TEST_CASE("a program that halts immediately runs one superstep") {
  TempDir dir;
  auto built = tiny_graph(dir.path(), {simple_edge(1, 2, 100)});
  HaltProgram program;
  auto result =
      run_program(built.graph->view(kMaxTimestamp), program, {1, 10});
  CHECK(result.stats.supersteps == 1);
  REQUIRE(result.states.size() == 2);
  CHECK(result.states[0] == std::pair<VertexId, uint64_t>{1, 10});
  CHECK(result.states[1] == std::pair<VertexId, uint64_t>{2, 20});
}

TEST_CASE("messages sent at S arrive at S+1") {
  TempDir dir;
  auto built = tiny_graph(
      dir.path(), {simple_edge(1, 2, 100), simple_edge(2, 1, 100)});
  EchoProgram program;
  auto result =
      run_program(built.graph->view(kMaxTimestamp), program, {1, 3});
  REQUIRE(result.states.size() == 2);
  CHECK(result.states[0].second == std::vector<uint64_t>{2});
  CHECK(result.states[1].second == std::vector<uint64_t>{1});
  CHECK(result.stats.messages == 2);
}

TEST_CASE("user exceptions become ProgramError with the superstep") {
  TempDir dir;
  auto built = tiny_graph(dir.path(), {simple_edge(1, 2, 100)});
  ThrowingProgram program;
  try {
    run_program(built.graph->view(kMaxTimestamp), program, {1, 5});
    FAIL("expected ProgramError");
  } catch (const ProgramError& e) {
    CHECK(std::string(e.what()).find("superstep 0") != std::string::npos);
  }
}

TEST_CASE("no compute for S+1 starts before superstep S finishes") {
  Rng rng(25);
  TempDir dir;
  RandomGraphConfig cfg;
  cfg.edges = 300;
  cfg.vertices = 64;
  RandomGraph g = random_graph(rng, "epoch", cfg);
  auto built =
      build_graph(dir.path(), g, PartitionLayout::checked(2, 4, 1, 2));
  ReplayOracle oracle(g.edges, g.updates);

  std::array<std::atomic<uint64_t>, 8> epochs{};
  std::atomic<bool> violated{false};
  EpochProgram program;
  program.epochs = &epochs;
  program.expected = oracle.vertices().size();
  program.violated = &violated;
  auto result =
      run_program(built.graph->view(kMaxTimestamp), program, {8, 4});
  CHECK_FALSE(violated.load());
  CHECK(result.stats.supersteps == 4);
  for (int s = 0; s < 4; ++s) CHECK(epochs[s].load() == program.expected);
}

TEST_CASE("messages sent to live vertices are all delivered") {
  Rng rng(26);
  TempDir dir;
  RandomGraphConfig cfg;
  cfg.edges = 200;
  cfg.vertices = 50;
  RandomGraph g = random_graph(rng, "fanin", cfg);
  auto built =
      build_graph(dir.path(), g, PartitionLayout::checked(2, 4, 3, 4));
  ReplayOracle oracle(g.edges, g.updates);
  auto vertices = oracle.vertices();

  FanInProgram program;
  program.target = vertices[vertices.size() / 2];
  auto result =
      run_program(built.graph->view(kMaxTimestamp), program, {4, 5});
  uint64_t received = 0;
  for (const auto& [id, count] : result.states)
    if (id == program.target) received = count;
  CHECK(received == vertices.size());       // conservation, pre-combiner
  CHECK(result.stats.messages == vertices.size());
}

TEST_CASE("edge data is streamed block-wise, never slurped") {
  Rng rng(24);
  TempDir dir;
  RandomGraphConfig cfg;
  cfg.edges = 4000;
  cfg.vertices = 300;
  RandomGraph g = random_graph(rng, "stream", cfg);
  CodecConfig codec_cfg;
  codec_cfg.block_size = 1024;
  codec_cfg.general = codec::GeneralCodec::kNone;

  auto inner = std::shared_ptr<StorageBackend>(make_local_backend());
  auto instrumented = std::make_shared<InstrumentedBackend>(inner);
  IngestOptions options;
  options.root = dir.path();
  options.schema = g.schema;
  options.layout = PartitionLayout::checked(2, 2, 5, 6);
  options.codec_config = codec_cfg;
  ingest_graph(*instrumented, options, g.edges, g.updates);

  Graph graph(instrumented, dir.path(), g.schema.graph_id);
  instrumented->stats().reset();
  ReplayOracle oracle(g.edges, g.updates);
  auto vertices = oracle.vertices();
  std::vector<VertexId> seeds(vertices.begin(), vertices.begin() + 10);
  traverse(graph.view(kMaxTimestamp), seeds, 3);

  // Struct blocks target 1 KiB raw; no single read may approach file size.
  CHECK(instrumented->stats().max_read_len <=
        8 * codec_cfg.block_size + 4096);
  CHECK(instrumented->stats().read_calls > 10);
}
