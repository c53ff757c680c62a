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

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsgraph/algorithms.hpp"
#include "tsgraph/engine.hpp"
#include "tsgraph/graph.hpp"
#include "tsgraph/ingest.hpp"

namespace py = pybind11;

namespace {

using namespace tsgraph;

AttributeValue value_from_py(AttrType type, const py::handle& obj) {
  switch (type) {
    case AttrType::kInt:
      return AttributeValue(obj.cast<int32_t>());
    case AttrType::kLong:
      return AttributeValue(obj.cast<int64_t>());
    case AttrType::kDouble:
      return AttributeValue(obj.cast<double>());
    case AttrType::kString:
      return AttributeValue(obj.cast<std::string>());
  }
  throw InvalidArgument("unknown attribute type");
}

py::object value_to_py(const AttributeValue& v) {
  switch (v.type()) {
    case AttrType::kInt: return py::cast(v.as_int());
    case AttrType::kLong: return py::cast(v.as_long());
    case AttrType::kDouble: return py::cast(v.as_double());
    case AttrType::kString: return py::cast(v.as_string());
  }
  return py::none();
}

Edge edge_from_tuple(const GraphSchema& schema, const py::sequence& t) {
  if (t.size() != 5)
    throw InvalidArgument("edge tuples are (src, dst, type, ts, attrs)");
  Edge e;
  e.src = t[0].cast<VertexId>();
  e.dst = t[1].cast<VertexId>();
  e.edge_type = t[2].cast<std::string>();
  e.ts = t[3].cast<Timestamp>();
  const EdgeTypeSchema* et = schema.find_edge_type(e.edge_type);
  if (et == nullptr)
    throw InvalidArgument("edge_type '" + e.edge_type + "' not in schema");
  py::sequence attrs = t[4].cast<py::sequence>();
  if (attrs.size() != et->columns.size())
    throw InvalidArgument("expected " + std::to_string(et->columns.size()) +
                          " attributes for edge_type '" + e.edge_type + "'");
  for (size_t i = 0; i < et->columns.size(); ++i)
    e.attrs.push_back(value_from_py(et->columns[i].type, attrs[i]));
  return e;
}

py::tuple edge_to_tuple(const Edge& e) {
  py::list attrs;
  for (const auto& v : e.attrs) attrs.append(value_to_py(v));
  return py::make_tuple(e.src, e.dst, e.edge_type, e.ts, attrs);
}

Timestamp at_or_max(std::optional<Timestamp> at) {
  return at.value_or(kMaxTimestamp);
}

class PyGraph {
 public:
  PyGraph(const std::string& root, const std::string& graph_id)
      : backend_(std::shared_ptr<StorageBackend>(make_local_backend())),
        graph_(backend_, root, graph_id) {}

  std::string schema_json() const {
    return schema_to_json(graph_.manifest().schema);
  }

  py::list edges(std::optional<Timestamp> at) const {
    py::list out;
    for (const Edge& e :
         graph_.read_all_edges(TimeRange::up_to(at_or_max(at))))
      out.append(edge_to_tuple(e));
    return out;
  }

  std::vector<VertexId> vertices() const { return graph_.all_vertex_ids(); }

  std::vector<VertexId> khop(const std::vector<VertexId>& seeds, uint64_t k,
                             std::optional<Timestamp> at,
                             const std::string& direction) const {
    KDegreeOptions options;
    options.direction = direction_from_name(direction);
    return k_degree_query(graph_.view(at_or_max(at)), seeds, k, options);
  }

  std::vector<VertexId> frontier(const std::vector<VertexId>& seeds,
                                 uint64_t hops, std::optional<Timestamp> at,
                                 const std::string& direction) const {
    TraverseOptions options;
    options.direction = direction_from_name(direction);
    return traverse(graph_.view(at_or_max(at)), seeds, hops, options);
  }

  py::object attribute_at(VertexId id, const std::string& name,
                          std::optional<Timestamp> at) const {
    auto v = graph_.attribute_at(id, name, at_or_max(at));
    return v ? value_to_py(*v) : py::none();
  }

  py::dict pagerank(std::optional<Timestamp> at, double damping,
                    double tolerance, uint64_t max_iterations,
                    unsigned workers, bool count_multiplicity) const {
    PageRankOptions options;
    options.damping = damping;
    options.tolerance = tolerance;
    options.max_iterations = max_iterations;
    options.workers = workers;
    options.count_multiplicity = count_multiplicity;
    py::dict out;
    for (const auto& [id, rank] :
         tsgraph::pagerank(graph_.view(at_or_max(at)), options).ranks)
      out[py::cast(id)] = rank;
    return out;
  }

  py::dict sssp(VertexId source, std::optional<std::string> weight_attr,
                std::optional<Timestamp> at, unsigned workers) const {
    SsspOptions options;
    options.weight_column = std::move(weight_attr);
    options.workers = workers;
    py::dict out;
    for (const auto& [id, dist] :
         tsgraph::sssp(graph_.view(at_or_max(at)), source, options).distances)
      out[py::cast(id)] = dist;
    return out;
  }

  py::dict neighbors_filtered(const std::vector<VertexId>& seeds,
                              const std::string& predicate,
                              std::optional<Timestamp> at) const {
    auto parsed =
        AttributePredicate::parse(predicate, graph_.manifest().schema);
    py::dict out;
    for (const auto& [seed, count] : filtered_neighbor_count(
             graph_.view(at_or_max(at)), seeds, parsed))
      out[py::cast(seed)] = count;
    return out;
  }

  py::dict resolve_routes(const std::vector<VertexId>& ids) const {
    py::dict out;
    for (const auto& [id, routes] : graph_.resolve_routes(ids)) {
      py::list entries;
      for (const auto& r : routes)
        entries.append(py::make_tuple(role_flag_name(r.flag), r.pid));
      out[py::cast(id)] = entries;
    }
    return out;
  }

  py::dict stats() const {
    py::dict out;
    out["graph_id"] = graph_.manifest().graph_id();
    out["n"] = graph_.layout().n;
    out["edge_partitions"] = graph_.layout().edge_partition_count();
    out["vertex_partitions"] = graph_.layout().vertex_partitions;
    out["vertices"] = graph_.vertex_count();
    out["blocks_read"] = graph_.block_stats().blocks_read.load();
    out["blocks_skipped"] = graph_.block_stats().blocks_skipped.load();
    return out;
  }

 private:
  std::shared_ptr<StorageBackend> backend_;
  Graph graph_;
};

py::dict py_ingest(const std::string& root, const std::string& schema_json,
                   const py::iterable& edges, const py::iterable& updates,
                   uint32_t n, uint32_t vertex_partitions,
                   std::optional<uint64_t> row_seed,
                   std::optional<uint64_t> col_seed,
                   const std::string& general, uint32_t block_size,
                   const std::string& struct_index, double bloom_fp) {
  IngestOptions options;
  options.root = root;
  options.schema = schema_from_json(schema_json);
  options.layout = PartitionLayout::checked(
      n, vertex_partitions, row_seed.value_or(0x9e3779b97f4a7c15ull),
      col_seed.value_or(0xc2b2ae3d27d4eb4full));
  options.codec_config.general = codec::general_codec_from_name(general);
  options.codec_config.block_size = block_size;
  options.codec_config.struct_index = struct_index == "bloom"
                                          ? tgf::IndexKind::kBloom
                                          : tgf::IndexKind::kRange;
  options.codec_config.bloom_fp = bloom_fp;

  std::vector<Edge> parsed_edges;
  for (const py::handle& item : edges)
    parsed_edges.push_back(
        edge_from_tuple(options.schema, item.cast<py::sequence>()));
  std::vector<VertexUpdate> parsed_updates;
  for (const py::handle& item : updates) {
    py::sequence t = item.cast<py::sequence>();
    if (t.size() != 4)
      throw InvalidArgument("vertex updates are (id, attr, ts, value)");
    VertexUpdate u;
    u.id = t[0].cast<VertexId>();
    u.attribute = t[1].cast<std::string>();
    u.ts = t[2].cast<Timestamp>();
    const Column* col = options.schema.find_vertex_attr(u.attribute);
    if (col == nullptr)
      throw InvalidArgument("vertex attribute '" + u.attribute +
                            "' not in schema");
    u.value = value_from_py(col->type, t[3]);
    parsed_updates.push_back(std::move(u));
  }

  auto backend = make_local_backend();
  IngestReport report =
      ingest_graph(*backend, options, parsed_edges, parsed_updates);
  py::dict out;
  out["edges"] = report.edges;
  out["vertices"] = report.vertices;
  out["raw_bytes"] = report.raw_bytes;
  out["stored_bytes"] = report.stored_bytes;
  return out;
}

py::list py_bench(const py::list& values, const std::string& type,
                  const std::vector<std::string>& codecs,
                  uint32_t block_size) {
  codec::BenchColumn column;
  column.type = type;
  for (const py::handle& v : values) {
    if (type == "ts")
      column.u64s.push_back(v.cast<uint64_t>());
    else if (type == "int" || type == "long")
      column.i64s.push_back(v.cast<int64_t>());
    else if (type == "double")
      column.doubles.push_back(v.cast<double>());
    else if (type == "string")
      column.strs.push_back(v.cast<std::string>());
    else
      throw InvalidArgument("unknown column type '" + type + "'");
  }
  std::vector<codec::BenchSpec> specs;
  for (const std::string& name : codecs)
    specs.push_back(codec::bench_spec_parse(name));
  py::list out;
  for (const auto& row : codec::bench_codecs(column, specs, block_size)) {
    py::dict r;
    r["codec"] = row.codec;
    r["encode_ms"] = row.encode_ms;
    r["decode_ms"] = row.decode_ms;
    r["raw_bytes"] = row.raw_bytes;
    r["encoded_bytes"] = row.encoded_bytes;
    r["ratio"] = row.ratio;
    out.append(r);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "time-series graph store and BSP engine";

  py::register_exception<InvalidArgument>(m, "InvalidArgumentError",
                                          PyExc_ValueError);
  py::register_exception<UnknownVertex>(m, "UnknownVertexError",
                                        PyExc_KeyError);
  py::register_exception<UnknownAttribute>(m, "UnknownAttributeError",
                                           PyExc_KeyError);

  m.def("ingest", &py_ingest, py::arg("root"), py::arg("schema"),
        py::arg("edges"), py::arg("vertex_updates") = py::list(),
        py::arg("n") = 4, py::arg("vertex_partitions") = 4,
        py::arg("row_seed") = py::none(), py::arg("col_seed") = py::none(),
        py::arg("general") = "zstd", py::arg("block_size") = 64 * 1024,
        py::arg("struct_index") = "range", py::arg("bloom_fp") = 0.01,
        "Write a new graph from (src, dst, type, ts, attrs) tuples.");

  m.def("bench", &py_bench, py::arg("values"), py::arg("type"),
        py::arg("codecs"), py::arg("block_size") = 64 * 1024,
        "Codec benchmark rows for one column of values.");

  m.def("hour_bucket", &hour_bucket, py::arg("ts_ms"));

  py::class_<PyGraph>(m, "Graph")
      .def(py::init<const std::string&, const std::string&>(),
           py::arg("root"), py::arg("graph_id"))
      .def("schema_json", &PyGraph::schema_json)
      .def("edges", &PyGraph::edges, py::arg("at") = py::none())
      .def("vertices", &PyGraph::vertices)
      .def("khop", &PyGraph::khop, py::arg("seeds"), py::arg("k"),
           py::arg("at") = py::none(), py::arg("direction") = "out")
      .def("frontier", &PyGraph::frontier, py::arg("seeds"), py::arg("hops"),
           py::arg("at") = py::none(), py::arg("direction") = "out")
      .def("attribute_at", &PyGraph::attribute_at, py::arg("vertex"),
           py::arg("name"), py::arg("at") = py::none())
      .def("pagerank", &PyGraph::pagerank, py::arg("at") = py::none(),
           py::arg("damping") = 0.85, py::arg("tolerance") = 1e-9,
           py::arg("max_iterations") = 100, py::arg("workers") = 1,
           py::arg("count_multiplicity") = false)
      .def("sssp", &PyGraph::sssp, py::arg("source"),
           py::arg("weight_attr") = py::none(), py::arg("at") = py::none(),
           py::arg("workers") = 1)
      .def("neighbors_filtered", &PyGraph::neighbors_filtered,
           py::arg("seeds"), py::arg("predicate"), py::arg("at") = py::none())
      .def("resolve_routes", &PyGraph::resolve_routes, py::arg("ids"))
      .def("stats", &PyGraph::stats);
}
