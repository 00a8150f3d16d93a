#pragma once

// Fixtures and independent oracles shared by the test binaries. Nothing here
// calls into the geometry or metric implementations it is used to check.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "gaw/model.hpp"

namespace gaw::fixtures {

inline Drawing triangle(double scale = 100.0) {
    return make_drawing(Graph::with_nodes(3, {{0, 1}, {1, 2}, {2, 0}}),
                        {{100, 100}, {100 + scale, 100}, {100, 100 + scale}});
}

/// Two straight edges crossing at right angles at (5,5).
inline Drawing x_drawing() {
    return make_drawing(Graph::with_nodes(4, {{0, 1}, {2, 3}}), {{0, 0}, {10, 10}, {0, 10}, {10, 0}},
                        {}, Canvas{100, 100});
}

inline Drawing path_drawing() {
    return make_drawing(Graph::with_nodes(4, {{0, 1}, {1, 2}, {2, 3}}),
                        {{100, 100}, {300, 150}, {500, 100}, {700, 300}});
}

inline Graph complete_graph(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) e.push_back({u, v});
    return Graph::with_nodes(n, std::move(e));
}

// --- brute-force straight segment oracle -----------------------------------

struct OracleCrossing {
    std::size_t a, b;
    double x, y;
    double angle;
};

inline double orient(Point a, Point b, Point c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Proper intersection via strict orientation signs; angle from the
/// difference of absolute chord directions folded into [0, 90].
inline std::vector<OracleCrossing> brute_force_crossings(const Drawing& d) {
    std::vector<OracleCrossing> out;
    const auto& E = d.graph.edges;
    const auto& P = d.positions;
    for (std::size_t i = 0; i < E.size(); ++i) {
        for (std::size_t j = i + 1; j < E.size(); ++j) {
            if (E[i].u == E[j].u || E[i].u == E[j].v || E[i].v == E[j].u || E[i].v == E[j].v) continue;
            const Point a = P[E[i].u], b = P[E[i].v], c = P[E[j].u], e = P[E[j].v];
            const double o1 = orient(a, b, c), o2 = orient(a, b, e);
            const double o3 = orient(c, e, a), o4 = orient(c, e, b);
            if (!((o1 > 0) != (o2 > 0) && o1 != 0 && o2 != 0)) continue;
            if (!((o3 > 0) != (o4 > 0) && o3 != 0 && o4 != 0)) continue;
            // Line-line intersection by Cramer's rule.
            const double a1 = b.y - a.y, b1 = a.x - b.x, c1 = a1 * a.x + b1 * a.y;
            const double a2 = e.y - c.y, b2 = c.x - e.x, c2 = a2 * c.x + b2 * c.y;
            const double det = a1 * b2 - a2 * b1;
            const double x = (b2 * c1 - b1 * c2) / det;
            const double y = (a1 * c2 - a2 * c1) / det;
            double diff = std::abs(std::atan2(b.y - a.y, b.x - a.x) - std::atan2(e.y - c.y, e.x - c.x)) * 180.0 /
                          std::numbers::pi;
            diff = std::fmod(diff, 180.0);
            const double angle = std::min(diff, 180.0 - diff);
            out.push_back({i, j, x, y, angle});
        }
    }
    return out;
}

/// Random straight-line drawing with n nodes and up to m distinct edges.
inline Drawing random_straight_drawing(std::mt19937_64& rng, std::size_t n, std::size_t m, double size = 1000.0) {
    std::uniform_real_distribution<double> coord(0.0, size);
    std::vector<Point> pos;
    for (std::size_t i = 0; i < n; ++i) pos.push_back({coord(rng), coord(rng)});
    std::vector<Edge> all;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) all.push_back({u, v});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(std::min(m, all.size()));
    return make_drawing(Graph::with_nodes(n, all), pos, {}, Canvas{size, size});
}

/// Crossing-free connected straight-line drawing: Euclidean MST plus extra
/// edges that cross nothing already present (checked with the oracle above).
inline Drawing random_plane_drawing(std::mt19937_64& rng, std::size_t n, std::size_t extra, double size = 1000.0) {
    std::uniform_real_distribution<double> coord(0.0, size);
    std::vector<Point> pos;
    for (std::size_t i = 0; i < n; ++i) pos.push_back({coord(rng), coord(rng)});
    auto dist = [&](NodeId a, NodeId b) { return std::hypot(pos[a].x - pos[b].x, pos[a].y - pos[b].y); };

    // Prim's MST.
    std::vector<Edge> edges;
    std::vector<bool> in(n, false);
    in[0] = true;
    for (std::size_t k = 1; k < n; ++k) {
        double best = 1e300;
        Edge be{};
        for (NodeId a = 0; a < n; ++a) {
            if (!in[a]) continue;
            for (NodeId b = 0; b < n; ++b) {
                if (in[b]) continue;
                if (dist(a, b) < best) {
                    best = dist(a, b);
                    be = {a, b};
                }
            }
        }
        in[be.v] = true;
        edges.push_back(be);
    }
    std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
    for (std::size_t tries = 0; tries < extra * 20 && edges.size() < n - 1 + extra; ++tries) {
        Edge cand{pick(rng), pick(rng)};
        if (cand.u == cand.v) continue;
        bool dup = false;
        for (const auto& e : edges) dup = dup || e.key() == cand.key();
        if (dup) continue;
        auto trial = edges;
        trial.push_back(cand);
        const auto d = make_drawing(Graph::with_nodes(n, trial), pos, {}, Canvas{size, size});
        bool crosses = false;
        for (const auto& c : brute_force_crossings(d)) crosses = crosses || c.b == trial.size() - 1;
        // Reject near-collinear contacts too: keep a margin from every node.
        for (NodeId v = 0; v < n && !crosses; ++v) {
            if (cand.touches(v)) continue;
            const Point a = pos[cand.u], b = pos[cand.v], p = pos[v];
            const double t = std::clamp(((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) /
                                            ((b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y)),
                                        0.0, 1.0);
            crosses = std::hypot(a.x + t * (b.x - a.x) - p.x, a.y + t * (b.y - a.y) - p.y) < 1e-3;
        }
        if (!crosses) edges = std::move(trial);
    }
    return make_drawing(Graph::with_nodes(n, edges), pos, {}, Canvas{size, size});
}

}  // namespace gaw::fixtures
