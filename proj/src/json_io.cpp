#include "gaw/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gaw/error.hpp"
#include "gaw/hash.hpp"

namespace gaw {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::invalid_argument: return "invalid_argument";
        case Errc::malformed_payload: return "malformed_payload";
        case Errc::not_found: return "not_found";
        case Errc::session_finished: return "session_finished";
        case Errc::invalid_construct: return "invalid_construct";
        case Errc::precondition_failed: return "precondition_failed";
        case Errc::infeasible: return "infeasible";
        case Errc::degenerate_geometry: return "degenerate_geometry";
        case Errc::conflict: return "conflict";
        case Errc::io_error: return "io_error";
    }
    return "unknown";
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void to_json(Json& j, const Point& p) { j = Json::array({p.x, p.y}); }

void from_json(const Json& j, Point& p) {
    if (!j.is_array() || j.size() != 2) throw Error(Errc::malformed_payload, "point must be [x, y]");
    p.x = j[0].get<double>();
    p.y = j[1].get<double>();
}

void to_json(Json& j, const Edge& e) { j = Json::array({e.u, e.v}); }

void from_json(const Json& j, Edge& e) {
    if (!j.is_array() || j.size() != 2) throw Error(Errc::malformed_payload, "edge must be [u, v]");
    e.u = j[0].get<NodeId>();
    e.v = j[1].get<NodeId>();
}

void to_json(Json& j, const Graph& g) { j = Json{{"nodes", g.nodes}, {"edges", g.edges}}; }

void from_json(const Json& j, Graph& g) {
    g.nodes = j.at("nodes").get<std::vector<NodeId>>();
    g.edges = j.at("edges").get<std::vector<Edge>>();
}

void to_json(Json& j, const Canvas& c) { j = Json{{"width", c.width}, {"height", c.height}}; }

void from_json(const Json& j, Canvas& c) {
    c.width = j.at("width").get<double>();
    c.height = j.at("height").get<double>();
}

void to_json(Json& j, const Drawing& d) {
    j = Json{{"graph", d.graph},
             {"positions", d.positions},
             {"curvatures", d.curvatures},
             {"canvas", d.canvas},
             {"node_radius", d.node_radius},
             {"stroke_width", d.stroke_width}};
}

void from_json(const Json& j, Drawing& d) {
    d.graph = j.at("graph").get<Graph>();
    d.positions = j.at("positions").get<std::vector<Point>>();
    d.curvatures = j.contains("curvatures") ? j.at("curvatures").get<std::vector<double>>()
                                            : std::vector<double>(d.graph.edges.size(), 0.0);
    d.canvas = j.contains("canvas") ? j.at("canvas").get<Canvas>() : Canvas{};
    d.node_radius = j.value("node_radius", 8.0);
    d.stroke_width = j.value("stroke_width", 2.0);
}

void to_json(Json& j, const MetricResult& r) {
    if (r.defined) {
        j = Json{{"raw", r.raw}, {"score", r.score}, {"defined", true}};
    } else {
        j = Json{{"raw", nullptr}, {"score", nullptr}, {"defined", false}};
    }
}

namespace {

template <typename T>
T parse_or_throw(const Json& j, const char* what) {
    try {
        return j.get<T>();
    } catch (const Json::exception& e) {
        throw Error(Errc::malformed_payload, std::string(what) + ": " + e.what());
    }
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) {
        if (!s.empty()) s += "; ";
        s += x;
    }
    return s;
}

}  // namespace

Drawing drawing_from_json(const Json& j) {
    auto d = parse_or_throw<Drawing>(j, "drawing");
    if (auto v = validate_drawing(d); !v.empty()) throw Error(Errc::malformed_payload, "invalid drawing: " + join(v));
    return d;
}

Graph graph_from_json(const Json& j) {
    auto g = parse_or_throw<Graph>(j, "graph");
    if (auto v = validate_graph(g); !v.empty()) throw Error(Errc::malformed_payload, "invalid graph: " + join(v));
    return g;
}

std::string canonical_text(const Drawing& d) { return Json(d).dump(); }

std::string drawing_hash(const Drawing& d) { return content_hash(canonical_text(d)); }

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(Errc::io_error, "write failed for " + path.string());
}

Json read_json_file(const std::filesystem::path& path) {
    try {
        return Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw Error(Errc::malformed_payload, path.string() + ": " + e.what());
    }
}

}  // namespace gaw
