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

#include "tsgraph/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace tsgraph {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

uint64_t parse_u64(const std::string& text, const char* what) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size())
    throw InvalidArgument(std::string(what) + ": '" + text + "'");
  return v;
}

}  // namespace

Edge parse_edge_line(const std::string& line, const GraphSchema& schema) {
  std::vector<std::string> fields = split_tabs(line);
  if (fields.size() < 4)
    throw InvalidArgument("expected at least 4 tab-separated fields");
  Edge e;
  e.src = parse_u64(fields[0], "src");
  e.dst = parse_u64(fields[1], "dst");
  e.edge_type = fields[2];
  e.ts = parse_u64(fields[3], "timestamp");
  const EdgeTypeSchema* et = schema.find_edge_type(e.edge_type);
  if (et == nullptr)
    throw InvalidArgument("edge_type '" + e.edge_type + "' not in schema");
  if (fields.size() - 4 != et->columns.size())
    throw InvalidArgument("expected " + std::to_string(et->columns.size()) +
                          " attribute fields, got " +
                          std::to_string(fields.size() - 4));
  e.attrs.reserve(et->columns.size());
  for (size_t i = 0; i < et->columns.size(); ++i)
    e.attrs.push_back(AttributeValue::parse(et->columns[i].type, fields[4 + i]));
  if (auto violation = validate_edge(e, schema))
    throw InvalidArgument(*violation);
  return e;
}

VertexUpdate parse_vertex_line(const std::string& line,
                               const GraphSchema& schema) {
  std::vector<std::string> fields = split_tabs(line);
  if (fields.size() != 4)
    throw InvalidArgument("expected 4 tab-separated fields");
  VertexUpdate u;
  u.id = parse_u64(fields[0], "vertex id");
  if (u.id == kInvalidVertex) throw InvalidArgument("vertex id 0 is reserved");
  u.attribute = fields[1];
  u.ts = parse_u64(fields[2], "timestamp");
  if (u.ts == 0) throw InvalidArgument("timestamp must be > 0");
  const Column* col = schema.find_vertex_attr(u.attribute);
  if (col == nullptr)
    throw InvalidArgument("vertex attribute '" + u.attribute +
                          "' not in schema");
  u.value = AttributeValue::parse(col->type, fields[3]);
  return u;
}

std::string IngestReport::to_text() const {
  std::ostringstream out;
  out << "edges=" << edges << " vertices=" << vertices << "\n";
  out << "raw_bytes=" << raw_bytes << " stored_bytes=" << stored_bytes << "\n";
  for (const auto& p : edge_partitions)
    out << "  " << p.dir << " edges=" << p.edges << " bytes=" << p.bytes
        << "\n";
  for (const auto& p : vertex_partitions)
    out << "  " << p.dir << " vertices=" << p.edges << " bytes=" << p.bytes
        << "\n";
  return out.str();
}

IngestReport ingest_graph(StorageBackend& backend,
                          const IngestOptions& options,
                          std::span<const Edge> edges,
                          std::span<const VertexUpdate> updates) {
  if (auto violation = options.schema.validate())
    throw InvalidArgument("schema: " + *violation);
  GraphManifest manifest;
  manifest.schema = options.schema;
  manifest.layout = options.layout;
  manifest.codec_config = options.codec_config;

  if (Graph::exists(backend, options.root, manifest.graph_id()))
    throw InvalidArgument("graph '" + manifest.graph_id() +
                          "' already exists under " + options.root);

  for (size_t i = 0; i < edges.size(); ++i) {
    if (auto violation = validate_edge(edges[i], options.schema))
      throw InvalidArgument("edge " + std::to_string(i) + ": " + *violation);
  }
  for (size_t i = 0; i < updates.size(); ++i) {
    const VertexUpdate& u = updates[i];
    const Column* col = options.schema.find_vertex_attr(u.attribute);
    if (u.id == kInvalidVertex || u.ts == 0 || col == nullptr ||
        col->type != u.value.type())
      throw InvalidArgument("vertex update " + std::to_string(i) +
                            " is invalid");
  }

  IngestReport report;
  report.edges = edges.size();

  // Partition edges by (date, edge type, pid).
  using GroupKey = std::tuple<std::string, std::string, EdgePartitionId>;
  std::map<GroupKey, std::vector<Edge>> groups;
  for (const Edge& e : edges) {
    EdgePartitionId pid = edge_partition(e.src, e.dst, e.ts, options.layout);
    groups[{utc_date_string(e.ts), e.edge_type, pid}].push_back(e);
  }

  // Vertex roles per edge partition.
  std::map<VertexId, std::map<EdgePartitionId, uint8_t>> roles;
  for (const Edge& e : edges) {
    EdgePartitionId pid = edge_partition(e.src, e.dst, e.ts, options.layout);
    roles[e.src][pid] |= role_flag_encode(RoleFlag::kSrc);
    roles[e.dst][pid] |= role_flag_encode(RoleFlag::kDst);
  }

  for (auto& [key, group] : groups) {
    const auto& [date, type, pid] = key;
    std::stable_sort(group.begin(), group.end(), edge_order_less);
    std::string dir =
        paths::edge_dir(options.root, manifest.graph_id(), date, type, pid);
    const EdgeTypeSchema* et = options.schema.find_edge_type(type);
    auto result =
        tgf::write_edge_dir(backend, dir, group, *et, manifest, pid);
    report.raw_bytes += result.raw_bytes;
    report.stored_bytes += result.stored_bytes;
    report.edge_partitions.push_back(
        {dir, result.edge_count, result.stored_bytes});
  }

  // Vertex records: everything seen as an endpoint or updated.
  std::map<VertexId, std::map<std::string,
                              std::vector<std::pair<Timestamp, AttributeValue>>>>
      vertex_updates;
  for (const VertexUpdate& u : updates)
    vertex_updates[u.id][u.attribute].emplace_back(u.ts, u.value);

  std::map<VertexPartitionId, std::vector<tgf::VertexRecord>> vertex_groups;
  auto make_record = [&](VertexId id) {
    tgf::VertexRecord rec;
    rec.id = id;
    if (auto it = roles.find(id); it != roles.end()) {
      for (const auto& [pid, bits] : it->second)
        rec.routes.push_back({role_flag_decode(bits), pid});
    }
    if (auto it = vertex_updates.find(id); it != vertex_updates.end()) {
      for (auto& [name, versions] : it->second)
        rec.attrs[name] = tgf::AttributeHistory::from_updates(versions);
    }
    return rec;
  };
  {
    std::vector<VertexId> all_ids;
    for (const auto& [id, r] : roles) all_ids.push_back(id);
    for (const auto& [id, u] : vertex_updates) all_ids.push_back(id);
    std::sort(all_ids.begin(), all_ids.end());
    all_ids.erase(std::unique(all_ids.begin(), all_ids.end()), all_ids.end());
    report.vertices = all_ids.size();
    for (VertexId id : all_ids)
      vertex_groups[vertex_partition(id, options.layout)].push_back(
          make_record(id));
  }

  for (VertexPartitionId vpid = 0; vpid < options.layout.vertex_partitions;
       ++vpid) {
    std::string dir = paths::vertex_dir(options.root, manifest.graph_id(), vpid);
    auto it = vertex_groups.find(vpid);
    std::span<const tgf::VertexRecord> records;
    if (it != vertex_groups.end()) records = it->second;
    auto result = tgf::write_vertex_dir(backend, dir, records, manifest);
    report.raw_bytes += result.raw_bytes;
    report.stored_bytes += result.stored_bytes;
    report.vertex_partitions.push_back(
        {dir, result.vertex_count, result.stored_bytes});
  }

  // Publish last: the manifest is the commit marker.
  manifest.store(backend, options.root);
  return report;
}

}  // namespace tsgraph
