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

// tsgraph: ingest edge lists into the on-disk graph format, inspect graphs,
// run queries and vertex programs, and benchmark the block codecs.
//
// Exit codes: 0 ok, 2 input error, 3 query error, 4 program error,
// 5 codec error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "tsgraph/algorithms.hpp"
#include "tsgraph/engine.hpp"
#include "tsgraph/graph.hpp"
#include "tsgraph/ingest.hpp"

namespace {

using namespace tsgraph;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitQuery = 3;
constexpr int kExitProgram = 4;
constexpr int kExitCodec = 5;

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UnsupportedCodec*>(&e)) return kExitCodec;
  if (dynamic_cast<const ProgramError*>(&e) ||
      dynamic_cast<const NegativeWeight*>(&e) ||
      dynamic_cast<const EmptyGraph*>(&e))
    return kExitProgram;
  if (dynamic_cast<const UnknownVertex*>(&e) ||
      dynamic_cast<const UnknownAttribute*>(&e) ||
      dynamic_cast<const UnknownDirection*>(&e))
    return kExitQuery;
  return kExitInput;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void for_each_line(const std::string& path,
                   const std::function<void(size_t, const std::string&)>& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(lineno, line);
  }
}

std::vector<VertexId> parse_id_list(const std::string& text) {
  std::vector<VertexId> ids;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    ids.push_back(std::stoull(item));
  }
  if (ids.empty()) throw InvalidArgument("empty id list");
  return ids;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct GlobalFlags {
  std::string root;
  std::string graph;
  unsigned workers = 1;
  Timestamp at = kMaxTimestamp;
  uint32_t read_ahead = 0;
};

std::ostream& open_output(const std::string& out_path, std::ofstream& file) {
  if (out_path.empty()) return std::cout;
  file.open(out_path);
  if (!file) throw IoError("cannot open output " + out_path);
  return file;
}

// ---------------------------------------------------------------------------
// ingest
// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string schema_path;
  std::vector<std::string> edge_paths;
  std::string vertex_path;
  uint32_t n = 4;
  uint32_t pv = 4;
  uint64_t row_seed = 0x9e3779b97f4a7c15ull;
  uint64_t col_seed = 0xc2b2ae3d27d4eb4full;
  std::string general = "zstd";
  uint32_t block_size = 64 * 1024;
  std::string struct_index = "range";
  double bloom_fp = 0.01;
};

int cmd_ingest(const GlobalFlags& flags, const IngestArgs& args) {
  IngestOptions options;
  options.root = flags.root;
  options.schema = schema_from_json(read_file(args.schema_path));
  if (!flags.graph.empty()) options.schema.graph_id = flags.graph;
  options.layout = PartitionLayout::checked(args.n, args.pv, args.row_seed,
                                            args.col_seed);
  options.codec_config.general = codec::general_codec_from_name(args.general);
  options.codec_config.block_size = args.block_size;
  options.codec_config.struct_index = args.struct_index == "bloom"
                                          ? tgf::IndexKind::kBloom
                                          : tgf::IndexKind::kRange;
  options.codec_config.bloom_fp = args.bloom_fp;

  std::vector<Edge> edges;
  uint64_t input_bytes = 0;
  for (const std::string& path : args.edge_paths) {
    for_each_line(path, [&](size_t lineno, const std::string& line) {
      input_bytes += line.size() + 1;
      try {
        edges.push_back(parse_edge_line(line, options.schema));
      } catch (const std::exception& e) {
        throw InvalidArgument(path + ":" + std::to_string(lineno) + ": " +
                              e.what());
      }
    });
  }
  std::vector<VertexUpdate> updates;
  if (!args.vertex_path.empty()) {
    for_each_line(args.vertex_path, [&](size_t lineno, const std::string& line) {
      input_bytes += line.size() + 1;
      try {
        updates.push_back(parse_vertex_line(line, options.schema));
      } catch (const std::exception& e) {
        throw InvalidArgument(args.vertex_path + ":" + std::to_string(lineno) +
                              ": " + e.what());
      }
    });
  }

  auto backend = make_local_backend();
  IngestReport report = ingest_graph(*backend, options, edges, updates);
  std::cout << report.to_text();
  std::cout << "input_bytes=" << input_bytes << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// query
// ---------------------------------------------------------------------------

struct QueryArgs {
  std::string subcommand;
  std::string seeds;
  uint64_t k = 1;
  std::string direction = "out";
  uint64_t vertex = 0;
  std::string attribute;
  std::string predicate;
};

int cmd_query(const GlobalFlags& flags, const QueryArgs& args) {
  auto backend = std::shared_ptr<StorageBackend>(make_local_backend());
  Graph graph(backend, flags.root, flags.graph);
  GraphView view = graph.view(flags.at);

  if (args.subcommand == "khop") {
    KDegreeOptions options;
    options.direction = direction_from_name(args.direction);
    options.read_ahead = flags.read_ahead;
    auto ids = parse_id_list(args.seeds);
    for (VertexId id : k_degree_query(view, ids, args.k, options))
      std::cout << id << "\n";
    return kExitOk;
  }
  if (args.subcommand == "attribute-at") {
    if (args.vertex == 0) throw UnknownVertex("vertex id required");
    auto& reader =
        graph.vertex_reader(vertex_partition(args.vertex, graph.layout()));
    if (!reader.row_of(args.vertex))
      throw UnknownVertex(std::to_string(args.vertex));
    auto value = view.attribute_at(args.vertex, args.attribute);
    std::cout << (value ? value->to_text() : std::string("absent")) << "\n";
    return kExitOk;
  }
  if (args.subcommand == "neighbors-filtered") {
    auto predicate =
        AttributePredicate::parse(args.predicate, graph.manifest().schema);
    auto ids = parse_id_list(args.seeds);
    for (const auto& [seed, count] :
         filtered_neighbor_count(view, ids, predicate))
      std::cout << seed << "\t" << count << "\n";
    return kExitOk;
  }
  throw InvalidArgument("unknown query subcommand '" + args.subcommand + "'");
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

struct RunArgs {
  std::string algorithm;
  std::string out_path;
  double damping = 0.85;
  uint64_t max_iters = 100;
  double tolerance = 1e-9;
  bool count_multiplicity = false;
  uint64_t source = 0;
  std::string weight_attr;
};

int cmd_run(const GlobalFlags& flags, const RunArgs& args) {
  auto backend = std::shared_ptr<StorageBackend>(make_local_backend());
  Graph graph(backend, flags.root, flags.graph);
  GraphView view = graph.view(flags.at);
  std::ofstream file;
  std::ostream& out = open_output(args.out_path, file);

  EngineStats stats;
  if (args.algorithm == "pagerank") {
    PageRankOptions options;
    options.damping = args.damping;
    options.max_iterations = args.max_iters;
    options.tolerance = args.tolerance;
    options.count_multiplicity = args.count_multiplicity;
    options.workers = flags.workers;
    options.read_ahead = flags.read_ahead;
    auto result = pagerank(view, options);
    for (const auto& [id, rank] : result.ranks)
      out << id << "\t" << format_double(rank) << "\n";
    stats = result.stats;
  } else if (args.algorithm == "sssp") {
    if (args.source == 0) throw UnknownVertex("--source is required");
    SsspOptions options;
    if (!args.weight_attr.empty()) options.weight_column = args.weight_attr;
    options.workers = flags.workers;
    options.read_ahead = flags.read_ahead;
    auto result = sssp(view, args.source, options);
    for (const auto& [id, dist] : result.distances)
      out << id << "\t" << format_double(dist) << "\n";
    stats = result.stats;
  } else {
    throw InvalidArgument("unknown algorithm '" + args.algorithm + "'");
  }

  std::cerr << "supersteps=" << stats.supersteps
            << " messages=" << stats.messages
            << " blocks_read=" << graph.block_stats().blocks_read
            << " blocks_skipped=" << graph.block_stats().blocks_skipped
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
  std::string input;
  std::string type = "ts";
  std::string codecs = "none,varint,delta_ts,dfcm,none+deflate,none+zstd";
  uint32_t block_size = 64 * 1024;
  bool json = false;
};

int cmd_bench(const BenchArgs& args) {
  codec::BenchColumn column;
  column.type = args.type;
  for_each_line(args.input, [&](size_t lineno, const std::string& line) {
    try {
      if (args.type == "ts")
        column.u64s.push_back(std::stoull(line));
      else if (args.type == "int" || args.type == "long")
        column.i64s.push_back(std::stoll(line));
      else if (args.type == "double")
        column.doubles.push_back(std::stod(line));
      else if (args.type == "string")
        column.strs.push_back(line);
      else
        throw InvalidArgument("unknown column type '" + args.type + "'");
    } catch (const std::invalid_argument&) {
      throw InvalidArgument(args.input + ":" + std::to_string(lineno) +
                            ": not a " + args.type);
    }
  });

  std::vector<codec::BenchSpec> specs;
  std::istringstream in(args.codecs);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) specs.push_back(codec::bench_spec_parse(item));

  auto rows = codec::bench_codecs(column, specs, args.block_size);
  if (args.json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows)
      j.push_back({{"codec", r.codec},
                   {"encode_ms", r.encode_ms},
                   {"decode_ms", r.decode_ms},
                   {"raw_bytes", r.raw_bytes},
                   {"encoded_bytes", r.encoded_bytes},
                   {"ratio", r.ratio}});
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("%-22s %12s %12s %14s %14s %8s\n", "codec", "encode_ms",
                "decode_ms", "raw_bytes", "encoded_bytes", "ratio");
    for (const auto& r : rows)
      std::printf("%-22s %12.3f %12.3f %14llu %14llu %8.4f\n", r.codec.c_str(),
                  r.encode_ms, r.decode_ms,
                  static_cast<unsigned long long>(r.raw_bytes),
                  static_cast<unsigned long long>(r.encoded_bytes), r.ratio);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

int cmd_stats(const GlobalFlags& flags) {
  auto backend = std::shared_ptr<StorageBackend>(make_local_backend());
  Graph graph(backend, flags.root, flags.graph);
  const auto& layout = graph.layout();
  std::cout << "graph=" << graph.manifest().graph_id() << " n=" << layout.n
            << " edge_partitions=" << layout.edge_partition_count()
            << " vertex_partitions=" << layout.vertex_partitions << "\n";
  std::cout << "vertices=" << graph.vertex_count() << "\n";
  auto dirs = graph.edge_dirs(TimeRange::all());
  uint64_t files = 0, blocks = 0, bytes = 0, edges = 0;
  for (const auto& dir : dirs) {
    for (const std::string& name : backend->list(dir.path)) {
      std::string path = dir.path + "/" + name;
      tgf::FileReader reader(*backend, path);
      files += 1;
      blocks += reader.block_count();
      if (name == "struct.tgf") edges += reader.total_rows();
      auto file = backend->open_read(path);
      bytes += file->size();
    }
  }
  std::cout << "edge_dirs=" << dirs.size() << " files=" << files
            << " blocks=" << blocks << " stored_bytes=" << bytes
            << " edges=" << edges << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-series graph store and BSP engine"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--root", flags.root, "storage root directory");
  app.add_option("--graph", flags.graph, "graph id");
  app.add_option("--workers", flags.workers, "worker thread count");
  app.add_option("--at", flags.at, "snapshot timestamp (ms, inclusive)");
  app.add_option("--read-ahead", flags.read_ahead,
                 "extra blocks coalesced per storage read");

  IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "load an edge list into a graph");
  ingest->add_option("--schema", ingest_args.schema_path, "schema json")
      ->required();
  ingest->add_option("--edges", ingest_args.edge_paths, "edge list file(s)")
      ->required();
  ingest->add_option("--vertices", ingest_args.vertex_path,
                     "vertex attribute update file");
  ingest->add_option("--n", ingest_args.n, "partition matrix side");
  ingest->add_option("--pv", ingest_args.pv, "vertex partition count");
  ingest->add_option("--row-seed", ingest_args.row_seed, "row hash seed");
  ingest->add_option("--col-seed", ingest_args.col_seed, "column hash seed");
  ingest->add_option("--general", ingest_args.general,
                     "general compressor: none|deflate|zstd");
  ingest->add_option("--block-size", ingest_args.block_size,
                     "target uncompressed block bytes");
  ingest->add_option("--struct-index", ingest_args.struct_index,
                     "struct file index kind: range|bloom");
  ingest->add_option("--bloom-fp", ingest_args.bloom_fp,
                     "bloom index false-positive target");

  QueryArgs query_args;
  auto* query = app.add_subcommand("query", "read queries against a graph");
  query->add_option("subcommand", query_args.subcommand,
                    "khop | neighbors-filtered | attribute-at")
      ->required();
  query->add_option("--seeds", query_args.seeds, "comma-separated vertex ids");
  query->add_option("--k", query_args.k, "hop count");
  query->add_option("--direction", query_args.direction, "out|in|both");
  query->add_option("--vertex", query_args.vertex, "vertex id");
  query->add_option("--attr", query_args.attribute, "attribute name");
  query->add_option("--predicate", query_args.predicate,
                    "attribute predicate, e.g. 'age>16'");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run a vertex program");
  run->add_option("algorithm", run_args.algorithm, "pagerank | sssp")
      ->required();
  run->add_option("--out", run_args.out_path, "result file (default stdout)");
  run->add_option("--damping", run_args.damping, "pagerank damping factor");
  run->add_option("--max-iters", run_args.max_iters, "pagerank iteration cap");
  run->add_option("--tolerance", run_args.tolerance, "pagerank stop threshold");
  run->add_flag("--count-multiplicity", run_args.count_multiplicity,
                "weight parallel edges by multiplicity");
  run->add_option("--source", run_args.source, "sssp source vertex");
  run->add_option("--weight-attr", run_args.weight_attr,
                  "sssp weight attribute column");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "codec benchmark table");
  bench->add_option("--input", bench_args.input, "one value per line")
      ->required();
  bench->add_option("--type", bench_args.type,
                    "ts|int|long|double|string");
  bench->add_option("--codecs", bench_args.codecs,
                    "comma list, e.g. delta_ts,dfcm+zstd");
  bench->add_option("--block-size", bench_args.block_size, "block bytes");
  bench->add_flag("--json", bench_args.json, "machine-readable output");

  auto* stats = app.add_subcommand("stats", "graph layout and file statistics");
  (void)stats;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInput;
  }

  try {
    if (app.got_subcommand(ingest)) return cmd_ingest(flags, ingest_args);
    if (app.got_subcommand(query)) return cmd_query(flags, query_args);
    if (app.got_subcommand(run)) return cmd_run(flags, run_args);
    if (app.got_subcommand(bench)) return cmd_bench(bench_args);
    if (app.got_subcommand(stats)) return cmd_stats(flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kExitInput;
}
