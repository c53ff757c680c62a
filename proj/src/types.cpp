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

#include "tsgraph/types.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

namespace tsgraph {

const char* attr_type_name(AttrType t) {
  switch (t) {
    case AttrType::kInt: return "int";
    case AttrType::kLong: return "long";
    case AttrType::kDouble: return "double";
    case AttrType::kString: return "string";
  }
  return "?";
}

std::optional<AttrType> attr_type_from_name(const std::string& name) {
  if (name == "int") return AttrType::kInt;
  if (name == "long") return AttrType::kLong;
  if (name == "double") return AttrType::kDouble;
  if (name == "string") return AttrType::kString;
  return std::nullopt;
}

double AttributeValue::as_number() const {
  switch (type()) {
    case AttrType::kInt: return static_cast<double>(as_int());
    case AttrType::kLong: return static_cast<double>(as_long());
    case AttrType::kDouble: return as_double();
    case AttrType::kString:
      throw InvalidArgument("string attribute used in numeric context");
  }
  return 0.0;
}

std::string AttributeValue::to_text() const {
  switch (type()) {
    case AttrType::kInt: return std::to_string(as_int());
    case AttrType::kLong: return std::to_string(as_long());
    case AttrType::kDouble: {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", as_double());
      return buf;
    }
    case AttrType::kString: return as_string();
  }
  return {};
}

AttributeValue AttributeValue::parse(AttrType type, const std::string& text) {
  switch (type) {
    case AttrType::kInt: {
      int32_t v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size())
        throw InvalidArgument("not an int: '" + text + "'");
      return AttributeValue(v);
    }
    case AttrType::kLong: {
      int64_t v = 0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || p != text.data() + text.size())
        throw InvalidArgument("not a long: '" + text + "'");
      return AttributeValue(v);
    }
    case AttrType::kDouble: {
      char* end = nullptr;
      double v = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size())
        throw InvalidArgument("not a double: '" + text + "'");
      return AttributeValue(v);
    }
    case AttrType::kString:
      return AttributeValue(text);
  }
  throw InvalidArgument("unknown attribute type");
}

bool edge_order_less(const Edge& a, const Edge& b) {
  if (a.src != b.src) return a.src < b.src;
  if (a.dst != b.dst) return a.dst < b.dst;
  if (a.ts != b.ts) return a.ts < b.ts;
  if (a.edge_type != b.edge_type) return a.edge_type < b.edge_type;
  return a.attrs < b.attrs;
}

const EdgeTypeSchema* GraphSchema::find_edge_type(
    const std::string& name) const {
  for (const auto& et : edge_types)
    if (et.name == name) return &et;
  return nullptr;
}

const Column* GraphSchema::find_vertex_attr(const std::string& name) const {
  for (const auto& c : vertex_attrs)
    if (c.name == name) return &c;
  return nullptr;
}

std::optional<std::string> GraphSchema::validate() const {
  if (!path_safe_name(graph_id))
    return "graph_id '" + graph_id + "' is not a path-safe name";
  std::set<std::string> type_names;
  for (const auto& et : edge_types) {
    if (!path_safe_name(et.name))
      return "edge_type '" + et.name + "' is not a path-safe name";
    if (!type_names.insert(et.name).second)
      return "duplicate edge_type '" + et.name + "'";
    std::set<std::string> cols;
    for (const auto& c : et.columns) {
      if (!path_safe_name(c.name))
        return "column '" + c.name + "' is not a path-safe name";
      if (!cols.insert(c.name).second)
        return "duplicate column '" + c.name + "' in edge_type '" + et.name +
               "'";
    }
  }
  std::set<std::string> vattrs;
  for (const auto& c : vertex_attrs) {
    if (!path_safe_name(c.name))
      return "vertex attribute '" + c.name + "' is not a path-safe name";
    if (!vattrs.insert(c.name).second)
      return "duplicate vertex attribute '" + c.name + "'";
  }
  return std::nullopt;
}

std::optional<std::string> validate_edge(const Edge& edge,
                                         const GraphSchema& schema) {
  if (edge.src == kInvalidVertex) return std::optional<std::string>("src");
  if (edge.dst == kInvalidVertex) return std::optional<std::string>("dst");
  if (edge.ts == 0) return std::optional<std::string>("timestamp");
  if (edge.edge_type.empty() || edge.edge_type.size() > 255)
    return std::optional<std::string>("edge_type");
  const EdgeTypeSchema* et = schema.find_edge_type(edge.edge_type);
  if (et == nullptr)
    return std::optional<std::string>("edge_type '" + edge.edge_type +
                                      "' not in schema");
  if (edge.attrs.size() != et->columns.size())
    return std::optional<std::string>(
        "attributes: expected " + std::to_string(et->columns.size()) +
        " values, got " + std::to_string(edge.attrs.size()));
  for (size_t i = 0; i < edge.attrs.size(); ++i) {
    if (edge.attrs[i].type() != et->columns[i].type)
      return std::optional<std::string>(
          "attributes[" + std::to_string(i) + "]: expected " +
          attr_type_name(et->columns[i].type) + ", got " +
          attr_type_name(edge.attrs[i].type()));
  }
  return std::nullopt;
}

bool path_safe_name(const std::string& name) {
  if (name.empty() || name.size() > 255 || name[0] == '.') return false;
  for (char ch : name) {
    bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
              (ch >= '0' && ch <= '9') || ch == '_' || ch == '-' || ch == '.';
    if (!ok) return false;
  }
  return true;
}

std::string utc_date_string(Timestamp ts_ms) {
  using namespace std::chrono;
  // Clamp to 9999-12-31 so sentinel timestamps stay inside chrono's range
  // and dt= components keep 4-digit, lexicographically ordered years.
  constexpr Timestamp kMaxDateMs = 253402300799999ull;
  ts_ms = std::min(ts_ms, kMaxDateMs);
  sys_days day{floor<days>(sys_time<milliseconds>(milliseconds(ts_ms)))};
  year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

}  // namespace tsgraph
