#include "gaw/model.hpp"

#include <cmath>
#include <set>

namespace gaw {

Graph Graph::with_nodes(std::size_t n, std::vector<Edge> edges) {
    Graph g;
    g.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.nodes[i] = static_cast<NodeId>(i);
    g.edges = std::move(edges);
    return g;
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> deg(nodes.size(), 0);
    for (const auto& e : edges) {
        ++deg.at(e.u);
        ++deg.at(e.v);
    }
    return deg;
}

std::vector<std::vector<NodeId>> Graph::adjacency() const {
    std::vector<std::vector<NodeId>> adj(nodes.size());
    for (const auto& e : edges) {
        adj.at(e.u).push_back(e.v);
        adj.at(e.v).push_back(e.u);
    }
    return adj;
}

double Canvas::diagonal() const { return std::hypot(width, height); }

std::vector<std::string> validate_graph(const Graph& g) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i] != i) {
            out.push_back("nodes[" + std::to_string(i) + "]: id " + std::to_string(g.nodes[i]) +
                          " is not dense (expected " + std::to_string(i) + ")");
        }
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        const std::string where = "edges[" + std::to_string(i) + "]";
        if (e.u >= g.nodes.size() || e.v >= g.nodes.size()) {
            out.push_back(where + ": endpoint out of range");
            continue;
        }
        if (e.u == e.v) {
            out.push_back(where + ": self-loop on node " + std::to_string(e.u));
            continue;
        }
        if (!seen.insert(e.key()).second) {
            out.push_back(where + ": duplicate of an earlier edge {" + std::to_string(e.u) + "," +
                          std::to_string(e.v) + "}");
        }
    }
    return out;
}

std::vector<std::string> validate_drawing(const Drawing& d) {
    std::vector<std::string> out = validate_graph(d.graph);
    const auto& c = d.canvas;
    if (!(c.width > 0.0) || !(c.height > 0.0) || !std::isfinite(c.width) || !std::isfinite(c.height)) {
        out.push_back("canvas: width and height must be positive and finite");
    }
    if (!(d.node_radius > 0.0) || !std::isfinite(d.node_radius)) out.push_back("node_radius: must be > 0");
    if (!(d.stroke_width > 0.0) || !std::isfinite(d.stroke_width)) out.push_back("stroke_width: must be > 0");
    if (d.positions.size() != d.graph.nodes.size()) {
        out.push_back("positions: expected " + std::to_string(d.graph.nodes.size()) + " entries, got " +
                      std::to_string(d.positions.size()));
    }
    for (std::size_t i = 0; i < d.positions.size(); ++i) {
        const Point p = d.positions[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < 0.0 || p.y < 0.0 || p.x > c.width ||
            p.y > c.height) {
            out.push_back("positions[" + std::to_string(i) + "]: node " + std::to_string(i) +
                          " lies outside the canvas");
        }
    }
    if (d.curvatures.size() != d.graph.edges.size()) {
        out.push_back("curvatures: expected " + std::to_string(d.graph.edges.size()) + " entries, got " +
                      std::to_string(d.curvatures.size()));
    }
    for (std::size_t i = 0; i < d.curvatures.size(); ++i) {
        const double k = d.curvatures[i];
        if (!std::isfinite(k) || std::abs(k) > 1.0) {
            out.push_back("curvatures[" + std::to_string(i) + "]: edge " + std::to_string(i) +
                          " has |curvature| > 1");
        }
    }
    return out;
}

Drawing make_drawing(Graph g, std::vector<Point> positions, std::vector<double> curvatures, Canvas canvas) {
    Drawing d;
    if (curvatures.empty()) curvatures.assign(g.edges.size(), 0.0);
    d.graph = std::move(g);
    d.positions = std::move(positions);
    d.curvatures = std::move(curvatures);
    d.canvas = canvas;
    return d;
}

// ---------------------------------------------------------------------------

namespace {

using C = AestheticCategory;

constexpr std::array<AestheticCatalogEntry, kMetricCount> kCatalog{{
    {MetricId::angular_resolution, "Angular resolution", C::composition, true, false},
    {MetricId::area, "Area", C::composition, true, false},
    {MetricId::aspect_ratio, "Aspect ratio", C::composition, false, false},
    {MetricId::cluster_similar_nodes, "Cluster similar nodes", C::composition, true, false},
    {MetricId::convex_faces, "Convex faces", C::composition, false, false},
    {MetricId::consistent_flow_direction, "Consistent flow direction", C::composition, false, false},
    {MetricId::crossing_angle, "Crossing angle", C::composition, true, false},
    {MetricId::degree_of_edge_bends, "Degree of edge bends", C::visual_mapping, true, false},
    {MetricId::difference_between_angles, "Difference between angles", C::composition, false, false},
    {MetricId::distribute_nodes_evenly, "Distribute nodes evenly", C::composition, false, false},
    {MetricId::edge_orthogonality, "Edge orthogonality", C::visual_mapping, true, false},
    {MetricId::global_symmetry, "Global symmetry", C::composition, true, false},
    {MetricId::keep_nodes_apart_from_edges, "Keep nodes apart from edges", C::composition, false, false},
    {MetricId::local_symmetry, "Local symmetry", C::composition, true, false},
    {MetricId::maximum_bends, "Maximum bends", C::composition, false, false},
    {MetricId::maximum_edge_length, "Maximum edge length", C::composition, false, false},
    {MetricId::node_orthogonality, "Node orthogonality", C::composition, false, false},
    {MetricId::nodes_should_not_overlap, "Nodes should not overlap", C::composition, false, false},
    {MetricId::number_of_bends, "Number of bends", C::composition, false, false},
    {MetricId::number_of_branches, "Number of branches", C::composition, true, false},
    {MetricId::number_of_edge_crossings, "Number of edge crossings", C::composition, true, false},
    {MetricId::path_bendiness, "Path bendiness", C::composition, true, false},
    {MetricId::shortest_path_length, "Shortest path length", C::composition, true, false},
    {MetricId::crossing_angle_sd, "SD of crossing angles", C::composition, false, false},
    {MetricId::angular_resolution_sd, "SD of angular resolution", C::composition, false, false},
    {MetricId::total_edge_length, "Total edge length", C::composition, false, false},
    {MetricId::uniform_edge_bends, "Uniform edge bends", C::visual_mapping, false, false},
    {MetricId::uniform_edge_lengths, "Uniform edge lengths", C::visual_mapping, false, false},
    {MetricId::whitespace_to_ink_ratio, "Whitespace to ink ratio", C::composition, true, false},
    {MetricId::face_area, "Face area", C::composition, false, true},
    {MetricId::uniform_faces, "Uniform faces", C::composition, false, true},
}};

constexpr std::array<std::string_view, kMetricCount> kNames{
    "angular_resolution",
    "area",
    "aspect_ratio",
    "cluster_similar_nodes",
    "convex_faces",
    "consistent_flow_direction",
    "crossing_angle",
    "degree_of_edge_bends",
    "difference_between_angles",
    "distribute_nodes_evenly",
    "edge_orthogonality",
    "global_symmetry",
    "keep_nodes_apart_from_edges",
    "local_symmetry",
    "maximum_bends",
    "maximum_edge_length",
    "node_orthogonality",
    "nodes_should_not_overlap",
    "number_of_bends",
    "number_of_branches",
    "number_of_edge_crossings",
    "path_bendiness",
    "shortest_path_length",
    "crossing_angle_sd",
    "angular_resolution_sd",
    "total_edge_length",
    "uniform_edge_bends",
    "uniform_edge_lengths",
    "whitespace_to_ink_ratio",
    "face_area",
    "uniform_faces",
};

constexpr bool catalog_matches_enum() {
    for (std::size_t i = 0; i < kCatalog.size(); ++i) {
        if (static_cast<std::size_t>(kCatalog[i].id) != i) return false;
    }
    return true;
}
static_assert(catalog_matches_enum(), "catalog rows must follow MetricId order");

}  // namespace

const std::array<AestheticCatalogEntry, kMetricCount>& catalog() { return kCatalog; }

const AestheticCatalogEntry& catalog_entry(MetricId id) { return kCatalog.at(static_cast<std::size_t>(id)); }

std::string_view to_string(MetricId id) { return kNames.at(static_cast<std::size_t>(id)); }

std::optional<MetricId> parse_metric_id(std::string_view s) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == s) return static_cast<MetricId>(i);
    }
    return std::nullopt;
}

MetricId metric_id_from_string(std::string_view s) {
    if (auto id = parse_metric_id(s)) return *id;
    throw std::invalid_argument("unknown metric id '" + std::string(s) + "'");
}

std::string_view to_string(AestheticCategory c) {
    return c == AestheticCategory::visual_mapping ? "visual_mapping" : "composition";
}

MetricResult MetricResult::undefined(MetricId id) {
    MetricResult r;
    r.id = id;
    r.raw = 0.0;
    r.score = 0.0;
    r.defined = false;
    return r;
}

}  // namespace gaw
