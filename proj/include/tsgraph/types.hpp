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

#ifndef TSGRAPH_TYPES_HPP
#define TSGRAPH_TYPES_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tsgraph/errors.hpp"

namespace tsgraph {

// Global vertex ids are 8-byte; id 0 is reserved as a sentinel and rejected
// on ingest.
using VertexId = uint64_t;
using Timestamp = uint64_t;  // milliseconds since the UTC epoch, always > 0

inline constexpr VertexId kInvalidVertex = 0;
inline constexpr Timestamp kMaxTimestamp =
    std::numeric_limits<Timestamp>::max();
inline constexpr uint64_t kMsPerHour = 3'600'000;
inline constexpr uint64_t kMsPerDay = 86'400'000;

// Hour buckets are UTC epoch hours: floor(ms / 1h).
inline uint64_t hour_bucket(Timestamp ts_ms) { return ts_ms / kMsPerHour; }

// ---------------------------------------------------------------------------
// RoleFlag: how a vertex participates in an edge partition.
// Encodes to 2 bits: SRC=01, DST=10, BOTH=11; 00 is invalid.
// ---------------------------------------------------------------------------

enum class RoleFlag : uint8_t {
  kSrc = 0b01,
  kDst = 0b10,
  kBoth = 0b11,
};

inline uint8_t role_flag_encode(RoleFlag f) { return static_cast<uint8_t>(f); }

inline RoleFlag role_flag_decode(uint8_t bits) {
  if (bits == 0 || bits > 3)
    throw CorruptFile("invalid role flag bits " + std::to_string(bits));
  return static_cast<RoleFlag>(bits);
}

inline RoleFlag role_flag_union(RoleFlag a, RoleFlag b) {
  return static_cast<RoleFlag>(static_cast<uint8_t>(a) |
                               static_cast<uint8_t>(b));
}

inline const char* role_flag_name(RoleFlag f) {
  switch (f) {
    case RoleFlag::kSrc: return "SRC";
    case RoleFlag::kDst: return "DST";
    case RoleFlag::kBoth: return "BOTH";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Attribute values: tagged union of the four column types.
// ---------------------------------------------------------------------------

enum class AttrType : uint8_t {
  kInt = 0,     // signed 32-bit
  kLong = 1,    // signed 64-bit
  kDouble = 2,  // IEEE-754 binary64
  kString = 3,  // UTF-8
};

const char* attr_type_name(AttrType t);
std::optional<AttrType> attr_type_from_name(const std::string& name);

class AttributeValue {
 public:
  AttributeValue() : v_(int32_t{0}) {}
  explicit AttributeValue(int32_t v) : v_(v) {}
  explicit AttributeValue(int64_t v) : v_(v) {}
  explicit AttributeValue(double v) : v_(v) {}
  explicit AttributeValue(std::string v) : v_(std::move(v)) {}

  AttrType type() const {
    return static_cast<AttrType>(static_cast<uint8_t>(v_.index()));
  }

  int32_t as_int() const { return std::get<int32_t>(v_); }
  int64_t as_long() const { return std::get<int64_t>(v_); }
  double as_double() const { return std::get<double>(v_); }
  const std::string& as_string() const { return std::get<std::string>(v_); }

  // Numeric view used by predicates and edge weights. Throws for strings.
  double as_number() const;

  // Text form used in TSV output; parse() is its inverse for a known type.
  std::string to_text() const;
  static AttributeValue parse(AttrType type, const std::string& text);

  bool operator==(const AttributeValue& o) const = default;
  bool operator<(const AttributeValue& o) const { return v_ < o.v_; }

 private:
  std::variant<int32_t, int64_t, double, std::string> v_;
};

// ---------------------------------------------------------------------------
// Edge: the 5-field ingest unit.
// ---------------------------------------------------------------------------

struct Edge {
  VertexId src = kInvalidVertex;
  VertexId dst = kInvalidVertex;
  std::string edge_type;
  Timestamp ts = 0;
  std::vector<AttributeValue> attrs;

  bool operator==(const Edge& o) const = default;
};

// Canonical edge ordering used by writers and readers: (src, dst, ts),
// then edge_type and attributes to make sorts total.
bool edge_order_less(const Edge& a, const Edge& b);

// ---------------------------------------------------------------------------
// TimeRange: inclusive [start, end].
// ---------------------------------------------------------------------------

struct TimeRange {
  Timestamp start = 1;
  Timestamp end = kMaxTimestamp;

  bool contains(Timestamp t) const { return t >= start && t <= end; }

  static TimeRange all() { return {1, kMaxTimestamp}; }
  static TimeRange up_to(Timestamp t) { return {1, t}; }

  static TimeRange checked(Timestamp start, Timestamp end) {
    if (start > end)
      throw InvalidArgument("TimeRange start > end");
    return {start, end};
  }

  bool operator==(const TimeRange& o) const = default;
};

// ---------------------------------------------------------------------------
// GraphSchema: column layout per edge type plus declared vertex attributes.
// ---------------------------------------------------------------------------

struct Column {
  std::string name;
  AttrType type = AttrType::kInt;

  bool operator==(const Column& o) const = default;
};

struct EdgeTypeSchema {
  std::string name;
  std::vector<Column> columns;

  bool operator==(const EdgeTypeSchema& o) const = default;
};

struct GraphSchema {
  std::string graph_id;
  std::vector<EdgeTypeSchema> edge_types;  // sorted by name on load
  std::vector<Column> vertex_attrs;

  const EdgeTypeSchema* find_edge_type(const std::string& name) const;
  const Column* find_vertex_attr(const std::string& name) const;

  // Checks column-name uniqueness and path-safe identifiers; returns a
  // violation description or nullopt.
  std::optional<std::string> validate() const;

  bool operator==(const GraphSchema& o) const = default;
};

// ok == nullopt; otherwise a violation naming the offending field.
std::optional<std::string> validate_edge(const Edge& edge,
                                         const GraphSchema& schema);

// True for names safe to embed in file paths (graph ids, edge types,
// attribute names): [A-Za-z0-9_.-]+, no leading dot, length <= 255.
bool path_safe_name(const std::string& name);

// UTC calendar date "YYYY-MM-DD" for the dt= path component.
std::string utc_date_string(Timestamp ts_ms);

}  // namespace tsgraph

#endif  // TSGRAPH_TYPES_HPP
