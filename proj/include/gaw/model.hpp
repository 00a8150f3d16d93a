#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gaw {

using NodeId = std::uint32_t;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
inline Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }

/// Undirected edge. Stored as given; comparisons treat (u,v) and (v,u) alike.
struct Edge {
    NodeId u = 0;
    NodeId v = 0;

    bool touches(NodeId n) const { return u == n || v == n; }
    bool shares_endpoint(const Edge& o) const { return touches(o.u) || touches(o.v); }
    std::pair<NodeId, NodeId> key() const { return u < v ? std::pair{u, v} : std::pair{v, u}; }

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Simple undirected graph over dense node ids 0..n-1.
struct Graph {
    std::vector<NodeId> nodes;
    std::vector<Edge> edges;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }

    /// Builds a graph with nodes 0..n-1.
    static Graph with_nodes(std::size_t n, std::vector<Edge> edges = {});

    std::vector<std::size_t> degrees() const;
    std::vector<std::vector<NodeId>> adjacency() const;

    friend bool operator==(const Graph&, const Graph&) = default;
};

struct Canvas {
    double width = 1000.0;
    double height = 1000.0;

    double area() const { return width * height; }
    double diagonal() const;

    friend bool operator==(const Canvas&, const Canvas&) = default;
};

/// A graph together with its 2-D embedding. Edges are quadratic Beziers whose
/// control point sits on the chord's perpendicular bisector, displaced by
/// curvature * chord length (positive = left of the u->v direction).
struct Drawing {
    Graph graph;
    std::vector<Point> positions;
    std::vector<double> curvatures;
    Canvas canvas;
    double node_radius = 8.0;
    double stroke_width = 2.0;

    friend bool operator==(const Drawing&, const Drawing&) = default;
};

/// Returns one human-readable message per violated Drawing/Graph invariant.
std::vector<std::string> validate_drawing(const Drawing& d);
std::vector<std::string> validate_graph(const Graph& g);

/// Straight-line drawing helper used throughout tests and the CLI.
Drawing make_drawing(Graph g, std::vector<Point> positions, std::vector<double> curvatures = {},
                     Canvas canvas = {});

// ---------------------------------------------------------------------------
// Aesthetic catalog

enum class MetricId : std::uint8_t {
    angular_resolution,
    area,
    aspect_ratio,
    cluster_similar_nodes,
    convex_faces,
    consistent_flow_direction,
    crossing_angle,
    degree_of_edge_bends,
    difference_between_angles,
    distribute_nodes_evenly,
    edge_orthogonality,
    global_symmetry,
    keep_nodes_apart_from_edges,
    local_symmetry,
    maximum_bends,
    maximum_edge_length,
    node_orthogonality,
    nodes_should_not_overlap,
    number_of_bends,
    number_of_branches,
    number_of_edge_crossings,
    path_bendiness,
    shortest_path_length,
    crossing_angle_sd,
    angular_resolution_sd,
    total_edge_length,
    uniform_edge_bends,
    uniform_edge_lengths,
    whitespace_to_ink_ratio,
    face_area,
    uniform_faces,
};

inline constexpr std::size_t kMetricCount = 31;

enum class AestheticCategory : std::uint8_t { visual_mapping, composition };

struct AestheticCatalogEntry {
    MetricId id;
    std::string_view display_name;
    AestheticCategory category;
    bool evaluated;
    bool novel;
};

/// The full registry: literature aesthetics in table order, then the two
/// face aesthetics elicited in the interviews.
const std::array<AestheticCatalogEntry, kMetricCount>& catalog();
const AestheticCatalogEntry& catalog_entry(MetricId id);

std::string_view to_string(MetricId id);
std::optional<MetricId> parse_metric_id(std::string_view s);
/// Throws std::invalid_argument for names outside the catalog.
MetricId metric_id_from_string(std::string_view s);

std::string_view to_string(AestheticCategory c);

struct MetricResult {
    MetricId id{};
    double raw = 0.0;
    double score = 0.0;
    bool defined = false;

    static MetricResult undefined(MetricId id);
};

}  // namespace gaw
