#pragma once

// JSON text format for graphs and drawings. Field names follow the domain
// types one-to-one; this is the exchange format for the CLI, the event logs
// and the HTTP service.
//
//   Graph:   {"nodes": [0, 1, 2], "edges": [[0, 1], [1, 2]]}
//   Drawing: {"graph": {...}, "positions": [[x, y], ...], "curvatures": [...],
//             "canvas": {"width": w, "height": h},
//             "node_radius": r, "stroke_width": s}

#include <filesystem>
#include <string>

#include "json.hpp"

#include "gaw/model.hpp"

namespace gaw {

using Json = nlohmann::json;

void to_json(Json& j, const Point& p);
void from_json(const Json& j, Point& p);
void to_json(Json& j, const Edge& e);
void from_json(const Json& j, Edge& e);
void to_json(Json& j, const Graph& g);
void from_json(const Json& j, Graph& g);
void to_json(Json& j, const Canvas& c);
void from_json(const Json& j, Canvas& c);
void to_json(Json& j, const Drawing& d);
void from_json(const Json& j, Drawing& d);
void to_json(Json& j, const MetricResult& r);

/// Parses and validates; throws gaw::Error(malformed_payload) with the
/// violation list on failure.
Drawing drawing_from_json(const Json& j);
Graph graph_from_json(const Json& j);

/// Canonical serialization (compact, sorted keys).
std::string canonical_text(const Drawing& d);
/// Stable content hash of a drawing; two drawings are equal iff hashes match
/// (up to FNV collisions).
std::string drawing_hash(const Drawing& d);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
Json read_json_file(const std::filesystem::path& path);

}  // namespace gaw
