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

#include "tsgraph/manifest.hpp"

#include <json.hpp>

namespace tsgraph {

using nlohmann::json;

namespace {

json schema_to_json_obj(const GraphSchema& schema) {
  json types = json::object();
  for (const auto& et : schema.edge_types) {
    json cols = json::array();
    for (const auto& c : et.columns)
      cols.push_back({{"col", c.name}, {"type", attr_type_name(c.type)}});
    types[et.name] = cols;
  }
  json vattrs = json::array();
  for (const auto& c : schema.vertex_attrs)
    vattrs.push_back({{"name", c.name}, {"type", attr_type_name(c.type)}});
  return json{{"graph_id", schema.graph_id},
              {"edge_types", types},
              {"vertex_attrs", vattrs}};
}

AttrType parse_type(const json& j, const std::string& what) {
  auto t = attr_type_from_name(j.get<std::string>());
  if (!t) throw InvalidArgument("unknown type '" + j.get<std::string>() +
                                "' for " + what);
  return *t;
}

GraphSchema schema_from_json_obj(const json& j) {
  GraphSchema schema;
  schema.graph_id = j.at("graph_id").get<std::string>();
  for (const auto& [name, cols] : j.at("edge_types").items()) {
    EdgeTypeSchema et;
    et.name = name;
    for (const auto& c : cols) {
      Column col;
      col.name = c.at("col").get<std::string>();
      col.type = parse_type(c.at("type"), "column " + col.name);
      et.columns.push_back(std::move(col));
    }
    schema.edge_types.push_back(std::move(et));
  }
  std::sort(schema.edge_types.begin(), schema.edge_types.end(),
            [](const auto& a, const auto& b) { return a.name < b.name; });
  if (j.contains("vertex_attrs")) {
    for (const auto& c : j.at("vertex_attrs")) {
      Column col;
      col.name = c.at("name").get<std::string>();
      col.type = parse_type(c.at("type"), "vertex attribute " + col.name);
      schema.vertex_attrs.push_back(std::move(col));
    }
  }
  if (auto violation = schema.validate())
    throw InvalidArgument("schema: " + *violation);
  return schema;
}

}  // namespace

std::string schema_to_json(const GraphSchema& schema) {
  return schema_to_json_obj(schema).dump(2);
}

GraphSchema schema_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("schema json: ") + e.what());
  }
  try {
    return schema_from_json_obj(j);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("schema json: ") + e.what());
  }
}

std::string GraphManifest::to_json() const {
  json j;
  j["format_version"] = format_version;
  j["schema"] = schema_to_json_obj(schema);
  j["layout"] = {{"n", layout.n},
                 {"vertex_partitions", layout.vertex_partitions},
                 {"row_seed", layout.row_seed},
                 {"col_seed", layout.col_seed}};
  j["codec"] = {{"general", codec::general_codec_name(codec_config.general)},
                {"block_size", codec_config.block_size},
                {"struct_index", codec_config.struct_index ==
                                         tgf::IndexKind::kBloom
                                     ? "bloom"
                                     : "range"},
                {"bloom_fp", codec_config.bloom_fp},
                {"dfcm_table_bits", codec_config.dfcm_table_bits}};
  return j.dump(2);
}

GraphManifest GraphManifest::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw CorruptFile(std::string("manifest json: ") + e.what());
  }
  try {
    GraphManifest m;
    m.format_version = j.at("format_version").get<uint16_t>();
    if (m.format_version != tgf::kFormatVersion)
      throw CorruptFile("unsupported manifest format version");
    m.schema = schema_from_json_obj(j.at("schema"));
    const json& l = j.at("layout");
    m.layout = PartitionLayout::checked(
        l.at("n").get<uint32_t>(), l.at("vertex_partitions").get<uint32_t>(),
        l.at("row_seed").get<uint64_t>(), l.at("col_seed").get<uint64_t>());
    const json& c = j.at("codec");
    m.codec_config.general =
        codec::general_codec_from_name(c.at("general").get<std::string>());
    m.codec_config.block_size = c.at("block_size").get<uint32_t>();
    m.codec_config.struct_index =
        c.at("struct_index").get<std::string>() == "bloom"
            ? tgf::IndexKind::kBloom
            : tgf::IndexKind::kRange;
    m.codec_config.bloom_fp = c.at("bloom_fp").get<double>();
    m.codec_config.dfcm_table_bits = c.at("dfcm_table_bits").get<unsigned>();
    return m;
  } catch (const json::exception& e) {
    throw CorruptFile(std::string("manifest json: ") + e.what());
  }
}

void GraphManifest::store(StorageBackend& backend,
                          const std::string& root) const {
  std::string text = to_json();
  auto file = backend.create_atomic(paths::manifest(root, graph_id()));
  file->append(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(text.data()), text.size()));
  file->commit();
}

GraphManifest GraphManifest::load(StorageBackend& backend,
                                  const std::string& root,
                                  const std::string& graph_id) {
  std::string path = paths::manifest(root, graph_id);
  if (!backend.exists(path))
    throw IoError("graph '" + graph_id + "' has no manifest under " + root);
  auto file = backend.open_read(path);
  std::string text(file->size(), '\0');
  file->read_at(0, std::span<uint8_t>(reinterpret_cast<uint8_t*>(text.data()),
                                      text.size()));
  return from_json(text);
}

namespace paths {

std::string graph_root(const std::string& root, const std::string& graph_id) {
  return root + "/" + graph_id;
}

std::string manifest(const std::string& root, const std::string& graph_id) {
  return graph_root(root, graph_id) + "/manifest.json";
}

std::string edge_dir(const std::string& root, const std::string& graph_id,
                     const std::string& date, const std::string& edge_type,
                     EdgePartitionId pid) {
  return graph_root(root, graph_id) + "/dt=" + date + "/" + edge_type +
         "/part-" + std::to_string(pid);
}

std::string vertex_dir(const std::string& root, const std::string& graph_id,
                       VertexPartitionId vpid) {
  return graph_root(root, graph_id) + "/vertex/part-" + std::to_string(vpid);
}

std::optional<uint32_t> parse_part(const std::string& name) {
  if (name.rfind("part-", 0) != 0) return std::nullopt;
  std::string digits = name.substr(5);
  if (digits.empty()) return std::nullopt;
  uint64_t v = 0;
  for (char ch : digits) {
    if (ch < '0' || ch > '9') return std::nullopt;
    v = v * 10 + static_cast<uint64_t>(ch - '0');
    if (v > kMaxEdgePartitions) return std::nullopt;
  }
  return static_cast<uint32_t>(v);
}

std::optional<std::string> parse_dt(const std::string& name) {
  if (name.rfind("dt=", 0) != 0) return std::nullopt;
  std::string date = name.substr(3);
  if (date.size() != 10 || date[4] != '-' || date[7] != '-')
    return std::nullopt;
  return date;
}

}  // namespace paths

}  // namespace tsgraph
