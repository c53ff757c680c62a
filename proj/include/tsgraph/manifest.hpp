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

#ifndef TSGRAPH_MANIFEST_HPP
#define TSGRAPH_MANIFEST_HPP

#include <string>

#include "tsgraph/codec.hpp"
#include "tsgraph/format.hpp"
#include "tsgraph/partition.hpp"
#include "tsgraph/storage.hpp"
#include "tsgraph/types.hpp"

namespace tsgraph {

struct CodecConfig {
  codec::GeneralCodec general = codec::GeneralCodec::kZstd;
  uint32_t block_size = 64 * 1024;  // target uncompressed block bytes
  tgf::IndexKind struct_index = tgf::IndexKind::kRange;
  double bloom_fp = 0.01;
  unsigned dfcm_table_bits = 16;

  bool operator==(const CodecConfig& o) const = default;
};

// Written once at graph creation; every file under the graph root conforms
// to it. The manifest doubles as the commit marker: readers refuse graphs
// without one.
struct GraphManifest {
  uint16_t format_version = tgf::kFormatVersion;
  GraphSchema schema;  // schema.graph_id names the graph
  PartitionLayout layout;
  CodecConfig codec_config;

  const std::string& graph_id() const { return schema.graph_id; }

  std::string to_json() const;
  static GraphManifest from_json(const std::string& text);

  void store(StorageBackend& backend, const std::string& root) const;
  static GraphManifest load(StorageBackend& backend, const std::string& root,
                            const std::string& graph_id);

  bool operator==(const GraphManifest& o) const = default;
};

// Schema document accepted by the CLI:
// {"graph_id":..., "edge_types":{name:[{"col":..., "type":...}, ...]},
//  "vertex_attrs":[{"name":..., "type":...}, ...]}
GraphSchema schema_from_json(const std::string& text);
std::string schema_to_json(const GraphSchema& schema);

// ---------------------------------------------------------------------------
// Path layout. All paths are '/'-joined strings handed to the backend.
// ---------------------------------------------------------------------------

namespace paths {

std::string graph_root(const std::string& root, const std::string& graph_id);
std::string manifest(const std::string& root, const std::string& graph_id);
std::string edge_dir(const std::string& root, const std::string& graph_id,
                     const std::string& date, const std::string& edge_type,
                     EdgePartitionId pid);
std::string vertex_dir(const std::string& root, const std::string& graph_id,
                       VertexPartitionId vpid);

inline std::string struct_file(const std::string& edge_dir) {
  return edge_dir + "/struct.tgf";
}
inline std::string g2l_file(const std::string& edge_dir) {
  return edge_dir + "/g2l.tgf";
}
inline std::string edge_attr_file(const std::string& edge_dir,
                                  const std::string& column) {
  return edge_dir + "/attr." + column + ".tgf";
}
inline std::string id_file(const std::string& vertex_dir) {
  return vertex_dir + "/id.tgf";
}
inline std::string route_file(const std::string& vertex_dir) {
  return vertex_dir + "/route.tgf";
}
inline std::string vertex_attr_file(const std::string& vertex_dir,
                                    const std::string& name) {
  return vertex_dir + "/attr." + name + ".tgf";
}

// Parses "part-<pid>" / "dt=<date>" path components; nullopt if malformed.
std::optional<uint32_t> parse_part(const std::string& name);
std::optional<std::string> parse_dt(const std::string& name);

}  // namespace paths

}  // namespace tsgraph

#endif  // TSGRAPH_MANIFEST_HPP
