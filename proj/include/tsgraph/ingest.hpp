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

// Ingest: validate, partition, sort and write a graph from edge tuples and
// vertex attribute updates. Text formats are tab-separated, one record per
// line:
//   edges:    src  dst  edge_type  timestamp_ms  attr1 ...
//   vertices: id   attribute_name  timestamp_ms  value

#ifndef TSGRAPH_INGEST_HPP
#define TSGRAPH_INGEST_HPP

#include <map>
#include <string>
#include <vector>

#include "tsgraph/graph.hpp"

namespace tsgraph {

struct VertexUpdate {
  VertexId id = kInvalidVertex;
  std::string attribute;
  Timestamp ts = 0;
  AttributeValue value;
};

Edge parse_edge_line(const std::string& line, const GraphSchema& schema);
VertexUpdate parse_vertex_line(const std::string& line,
                               const GraphSchema& schema);

struct IngestOptions {
  std::string root;
  GraphSchema schema;
  PartitionLayout layout;
  CodecConfig codec_config;
};

struct IngestReport {
  uint64_t edges = 0;
  uint64_t vertices = 0;
  uint64_t raw_bytes = 0;     // column-encoded bytes before general codec
  uint64_t stored_bytes = 0;  // bytes written to storage
  struct PartitionSize {
    std::string dir;
    uint64_t edges = 0;
    uint64_t bytes = 0;
  };
  std::vector<PartitionSize> edge_partitions;
  std::vector<PartitionSize> vertex_partitions;

  std::string to_text() const;
};

// Writes a new graph; the manifest lands last and doubles as the commit
// marker. Ingesting into an existing graph id fails.
IngestReport ingest_graph(StorageBackend& backend, const IngestOptions& options,
                          std::span<const Edge> edges,
                          std::span<const VertexUpdate> updates);

}  // namespace tsgraph

#endif  // TSGRAPH_INGEST_HPP
