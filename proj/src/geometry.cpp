#include "gaw/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "gaw/error.hpp"

namespace gaw::geometry {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a) { return std::hypot(a.x, a.y); }
double distance(Point a, Point b) { return norm(a - b); }

double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * t);
}

double Polyline::length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) s += distance(points[i - 1], points[i]);
    return s;
}

double point_polyline_distance(Point p, const Polyline& line) {
    if (line.points.size() == 1) return distance(p, line.points[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < line.points.size(); ++i) {
        best = std::min(best, point_segment_distance(p, line.points[i - 1], line.points[i]));
    }
    return best;
}

double signed_area(std::span<const Point> ring) {
    if (ring.size() < 3) return 0.0;
    // Anchored at ring[0] to keep cancellation small for far-from-origin rings.
    const Point o = ring[0];
    double s = 0.0;
    for (std::size_t i = 1; i + 1 < ring.size(); ++i) s += cross(ring[i] - o, ring[i + 1] - o);
    return 0.5 * s;
}

Point EdgeCurve::at(double t) const {
    const double s = 1.0 - t;
    return from * (s * s) + control * (2.0 * s * t) + to * (t * t);
}

EdgeCurve edge_curve(const Drawing& d, std::size_t edge_index) {
    const Edge& e = d.graph.edges.at(edge_index);
    const Point a = d.positions.at(e.u);
    const Point b = d.positions.at(e.v);
    const Point chord = b - a;
    const double len = norm(chord);
    if (len == 0.0) {
        throw Error(Errc::degenerate_geometry,
                    "edge " + std::to_string(edge_index) + " has coincident endpoints");
    }
    const double k = edge_index < d.curvatures.size() ? d.curvatures[edge_index] : 0.0;
    const Point normal{-chord.y / len, chord.x / len};
    return {a, (a + b) * 0.5 + normal * (k * len), b};
}

Polyline flatten_edge(const Drawing& d, std::size_t edge_index, double tolerance) {
    const EdgeCurve c = edge_curve(d, edge_index);
    Polyline out;
    const Point second_diff = c.from - c.control * 2.0 + c.to;
    const double dev = norm(second_diff);
    // Chord error of uniform steps h is |P0 - 2C + P2| h^2 / 4.
    std::size_t n = 1;
    if (dev > 0.0) n = static_cast<std::size_t>(std::ceil(std::sqrt(dev / (4.0 * tolerance))));
    n = std::max<std::size_t>(n, 1);
    out.points.reserve(n + 1);
    out.points.push_back(c.from);
    for (std::size_t i = 1; i < n; ++i) out.points.push_back(c.at(static_cast<double>(i) / n));
    out.points.push_back(c.to);
    return out;
}

std::vector<Polyline> flatten_edges(const Drawing& d, double tolerance) {
    std::vector<Polyline> out;
    out.reserve(d.graph.edges.size());
    for (std::size_t i = 0; i < d.graph.edges.size(); ++i) out.push_back(flatten_edge(d, i, tolerance));
    return out;
}

namespace {

struct Segment {
    std::size_t edge;
    std::size_t index;  // position within the edge polyline
    Point a;
    Point b;
    double min_x, max_x, min_y, max_y;
};

std::vector<Segment> collect_segments(std::span<const Polyline> edges) {
    std::vector<Segment> segs;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto& pts = edges[e].points;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            const Point a = pts[i - 1];
            const Point b = pts[i];
            segs.push_back({e, i - 1, a, b, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
                            std::max(a.y, b.y)});
        }
    }
    return segs;
}

/// Sweep over x; calls f(i, j) for every segment pair whose boxes overlap.
template <typename F>
void for_each_box_pair(const std::vector<Segment>& segs, F&& f) {
    std::vector<std::size_t> order(segs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        return segs[l].min_x < segs[r].min_x || (segs[l].min_x == segs[r].min_x && l < r);
    });
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
        const Segment& s = segs[order[oi]];
        for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
            const Segment& t = segs[order[oj]];
            if (t.min_x > s.max_x) break;
            if (t.max_y < s.min_y || t.min_y > s.max_y) continue;
            f(std::min(order[oi], order[oj]), std::max(order[oi], order[oj]));
        }
    }
}

struct Hit {
    double t;
    double u;
    Point point;
};

/// Intersection of two non-parallel segments, closed on both parameter ranges
/// up to `slack`. Parallel and collinear pairs report nothing.
std::optional<Hit> intersect(const Segment& s1, const Segment& s2, double slack) {
    const Point r = s1.b - s1.a;
    const Point s = s2.b - s2.a;
    const double denom = cross(r, s);
    if (std::abs(denom) <= 1e-12 * norm(r) * norm(s)) return std::nullopt;
    const Point qp = s2.a - s1.a;
    const double t = cross(qp, s) / denom;
    const double u = cross(qp, r) / denom;
    if (t < -slack || t > 1.0 + slack || u < -slack || u > 1.0 + slack) return std::nullopt;
    return Hit{std::clamp(t, 0.0, 1.0), std::clamp(u, 0.0, 1.0), s1.a + r * std::clamp(t, 0.0, 1.0)};
}

double acute_angle_deg(Point r, Point s) {
    return std::atan2(std::abs(cross(r, s)), std::abs(dot(r, s))) * 180.0 / std::numbers::pi;
}

}  // namespace

std::vector<Crossing> find_crossings(const Drawing& d, std::span<const Polyline> edges) {
    const auto segs = collect_segments(edges);
    const auto& graph_edges = d.graph.edges;
    std::vector<Crossing> out;
    for_each_box_pair(segs, [&](std::size_t i, std::size_t j) {
        const Segment& s1 = segs[i];
        const Segment& s2 = segs[j];
        if (s1.edge == s2.edge) return;
        if (graph_edges[s1.edge].shares_endpoint(graph_edges[s2.edge])) return;
        const auto hit = intersect(s1, s2, 0.0);
        if (!hit) return;
        // Half-open segments so a hit on an interior polyline vertex counts once.
        if (hit->t >= 1.0 || hit->u >= 1.0) return;
        const auto& pa = edges[s1.edge].points;
        const auto& pb = edges[s2.edge].points;
        for (Point endpoint : {pa.front(), pa.back(), pb.front(), pb.back()}) {
            if (distance(hit->point, endpoint) <= kSnapEpsilon) return;
        }
        Crossing c;
        c.edge_a = std::min(s1.edge, s2.edge);
        c.edge_b = std::max(s1.edge, s2.edge);
        c.point = hit->point;
        c.angle = acute_angle_deg(s1.b - s1.a, s2.b - s2.a);
        out.push_back(c);
    });
    std::sort(out.begin(), out.end(), [](const Crossing& l, const Crossing& r) {
        if (l.edge_a != r.edge_a) return l.edge_a < r.edge_a;
        if (l.edge_b != r.edge_b) return l.edge_b < r.edge_b;
        if (l.point.x != r.point.x) return l.point.x < r.point.x;
        return l.point.y < r.point.y;
    });
    return out;
}

std::vector<Crossing> find_crossings(const Drawing& d) {
    const auto edges = flatten_edges(d);
    return find_crossings(d, edges);
}

// ---------------------------------------------------------------------------
// Planar arrangement

namespace {

struct VertexKey {
    long long x;
    long long y;
    auto operator<=>(const VertexKey&) const = default;
};

VertexKey snap(Point p) {
    return {std::llround(p.x / kSnapGrid), std::llround(p.y / kSnapGrid)};
}

class Arrangement {
public:
    explicit Arrangement(std::span<const Polyline> edges) { build(edges); }

    std::vector<Face> faces() const;

private:
    struct HalfEdge {
        std::size_t origin;
        std::size_t target;
        std::size_t twin;
        double angle;
    };

    void build(std::span<const Polyline> edges);
    std::size_t vertex_for(Point p);

    std::map<VertexKey, std::size_t> index_;
    std::vector<Point> vertices_;
    std::vector<HalfEdge> half_edges_;
    std::vector<std::vector<std::size_t>> outgoing_;  // CCW by angle
    std::vector<std::size_t> slot_;                   // position of a half-edge in its origin's list
};

std::size_t Arrangement::vertex_for(Point p) {
    const VertexKey key = snap(p);
    auto [it, inserted] = index_.try_emplace(key, vertices_.size());
    if (inserted) vertices_.push_back({key.x * kSnapGrid, key.y * kSnapGrid});
    return it->second;
}

void Arrangement::build(std::span<const Polyline> edges) {
    const auto segs = collect_segments(edges);
    // Split parameters per segment, with the exact point each one maps to.
    std::vector<std::vector<std::pair<double, Point>>> splits(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        splits[i].push_back({0.0, segs[i].a});
        splits[i].push_back({1.0, segs[i].b});
    }
    for_each_box_pair(segs, [&](std::size_t i, std::size_t j) {
        const Segment& s1 = segs[i];
        const Segment& s2 = segs[j];
        if (s1.edge == s2.edge) return;  // a quadratic Bezier never self-intersects
        const auto hit = intersect(s1, s2, 1e-12);
        if (!hit) return;
        // Reuse exact endpoints so touching segments share a vertex.
        Point p = hit->point;
        if (hit->t == 0.0) p = s1.a;
        else if (hit->t == 1.0) p = s1.b;
        else if (hit->u == 0.0) p = s2.a;
        else if (hit->u == 1.0) p = s2.b;
        splits[i].push_back({hit->t, p});
        splits[j].push_back({hit->u, p});
    });

    std::set<std::pair<std::size_t, std::size_t>> links;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        auto& sp = splits[i];
        std::sort(sp.begin(), sp.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
        std::size_t prev = vertex_for(sp.front().second);
        for (std::size_t k = 1; k < sp.size(); ++k) {
            const std::size_t cur = vertex_for(sp[k].second);
            if (cur != prev) links.insert({std::min(prev, cur), std::max(prev, cur)});
            prev = cur;
        }
    }

    outgoing_.assign(vertices_.size(), {});
    for (const auto& [a, b] : links) {
        const std::size_t h = half_edges_.size();
        const Point da = vertices_[b] - vertices_[a];
        half_edges_.push_back({a, b, h + 1, std::atan2(da.y, da.x)});
        half_edges_.push_back({b, a, h, std::atan2(-da.y, -da.x)});
        outgoing_[a].push_back(h);
        outgoing_[b].push_back(h + 1);
    }
    slot_.assign(half_edges_.size(), 0);
    for (auto& out : outgoing_) {
        std::sort(out.begin(), out.end(),
                  [&](std::size_t l, std::size_t r) { return half_edges_[l].angle < half_edges_[r].angle; });
        for (std::size_t k = 0; k < out.size(); ++k) slot_[out[k]] = k;
    }
}

bool point_in_ring(Point p, const std::vector<Point>& ring) {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const Point a = ring[i];
        const Point b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

bool ring_is_convex(const std::vector<Point>& ring) {
    const std::size_t n = ring.size();
    if (n < 3) return false;
    const double max_reflex = kConvexToleranceDeg * std::numbers::pi / 180.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point prev = ring[(i + n - 1) % n];
        const Point cur = ring[i];
        const Point next = ring[(i + 1) % n];
        const Point in = cur - prev;
        const Point out = next - cur;
        const double turn = std::atan2(cross(in, out), dot(in, out));
        if (turn < -max_reflex) return false;
        if (turn > std::numbers::pi - 1e-9) return false;  // spike into the face
    }
    return true;
}

struct Cycle {
    std::vector<Point> ring;
    double area;
    std::size_t component;
};

std::vector<Face> Arrangement::faces() const {
    // Connected components of the arrangement.
    std::vector<std::size_t> comp(vertices_.size(), static_cast<std::size_t>(-1));
    std::size_t n_comp = 0;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
        if (comp[v] != static_cast<std::size_t>(-1) || outgoing_[v].empty()) continue;
        std::vector<std::size_t> stack{v};
        comp[v] = n_comp;
        while (!stack.empty()) {
            const std::size_t x = stack.back();
            stack.pop_back();
            for (std::size_t h : outgoing_[x]) {
                const std::size_t y = half_edges_[h].target;
                if (comp[y] == static_cast<std::size_t>(-1)) {
                    comp[y] = n_comp;
                    stack.push_back(y);
                }
            }
        }
        ++n_comp;
    }

    // Trace every cycle keeping its face on the left.
    std::vector<Cycle> cycles;
    std::vector<bool> used(half_edges_.size(), false);
    for (std::size_t start = 0; start < half_edges_.size(); ++start) {
        if (used[start]) continue;
        Cycle c{{}, 0.0, comp[half_edges_[start].origin]};
        std::size_t h = start;
        while (!used[h]) {
            used[h] = true;
            c.ring.push_back(vertices_[half_edges_[h].origin]);
            const std::size_t twin = half_edges_[h].twin;
            const auto& around = outgoing_[half_edges_[h].target];
            h = around[(slot_[twin] + around.size() - 1) % around.size()];
        }
        c.area = signed_area(c.ring);
        cycles.push_back(std::move(c));
    }

    // The outer cycle of each component is its minimum-area cycle.
    std::vector<std::size_t> outer(n_comp, static_cast<std::size_t>(-1));
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        auto& o = outer[cycles[i].component];
        if (o == static_cast<std::size_t>(-1) || cycles[i].area < cycles[o].area) o = i;
    }
    std::vector<bool> is_outer(cycles.size(), false);
    for (std::size_t o : outer) is_outer[o] = true;

    std::vector<Face> faces;
    std::vector<std::size_t> face_cycle;
    for (std::size_t i = 0; i < cycles.size(); ++i) {
        if (is_outer[i]) continue;
        Face f;
        f.boundary.points = cycles[i].ring;
        f.area = cycles[i].area;
        f.bounded = true;
        f.convex = ring_is_convex(cycles[i].ring);
        faces.push_back(std::move(f));
        face_cycle.push_back(i);
    }

    // Components nested inside a bounded face of another component are holes
    // of the smallest such face.
    std::size_t unbounded_ring = static_cast<std::size_t>(-1);
    for (std::size_t c = 0; c < n_comp; ++c) {
        const Cycle& hole = cycles[outer[c]];
        const Point probe = hole.ring.front();
        std::size_t best = static_cast<std::size_t>(-1);
        for (std::size_t fi = 0; fi < faces.size(); ++fi) {
            if (cycles[face_cycle[fi]].component == c) continue;
            if (!point_in_ring(probe, faces[fi].boundary.points)) continue;
            if (best == static_cast<std::size_t>(-1) || cycles[face_cycle[fi]].area < cycles[face_cycle[best]].area) {
                best = fi;
            }
        }
        if (best != static_cast<std::size_t>(-1)) {
            faces[best].area += hole.area;  // hole.area <= 0
            faces[best].convex = false;
        } else if (unbounded_ring == static_cast<std::size_t>(-1) ||
                   hole.area < cycles[unbounded_ring].area) {
            unbounded_ring = outer[c];
        }
    }

    Face outside;
    outside.area = std::numeric_limits<double>::infinity();
    outside.bounded = false;
    outside.convex = false;
    if (unbounded_ring != static_cast<std::size_t>(-1)) outside.boundary.points = cycles[unbounded_ring].ring;
    faces.push_back(std::move(outside));
    return faces;
}

}  // namespace

std::vector<Face> compute_faces(std::span<const Polyline> edges) { return Arrangement(edges).faces(); }

std::vector<Face> compute_faces(const Drawing& d) {
    const auto edges = flatten_edges(d);
    return compute_faces(edges);
}

// ---------------------------------------------------------------------------

std::vector<double> incident_directions(const Drawing& d, NodeId node) {
    std::vector<double> dirs;
    for (std::size_t i = 0; i < d.graph.edges.size(); ++i) {
        const Edge& e = d.graph.edges[i];
        if (!e.touches(node)) continue;
        const EdgeCurve c = edge_curve(d, i);
        const Point origin = e.u == node ? c.from : c.to;
        const Point t = c.control - origin;
        dirs.push_back(std::atan2(t.y, t.x));
    }
    return dirs;
}

std::optional<std::vector<double>> incident_angles(const Drawing& d, NodeId node) {
    auto dirs = incident_directions(d, node);
    if (dirs.size() < 2) return std::nullopt;
    constexpr double to_deg = 180.0 / std::numbers::pi;
    for (double& a : dirs) {
        a *= to_deg;
        if (a < 0.0) a += 360.0;
    }
    std::sort(dirs.begin(), dirs.end());
    std::vector<double> out;
    out.reserve(dirs.size());
    for (std::size_t i = 1; i < dirs.size(); ++i) out.push_back(dirs[i] - dirs[i - 1]);
    out.push_back(360.0 - (dirs.back() - dirs.front()));
    return out;
}

}  // namespace gaw::geometry
