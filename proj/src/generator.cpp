#include "gaw/generator.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "gaw/error.hpp"
#include "gaw/hash.hpp"

namespace gaw::gen {

namespace {

enum Stream : std::uint64_t { kGraphStream = 1, kDrawingStream = 2 };

std::size_t max_pairs(std::size_t n) { return n * (n - 1) / 2; }

/// Smallest node count that admits `edges` distinct pairs.
std::size_t min_nodes_for(std::size_t edges) {
    std::size_t n = 2;
    while (max_pairs(n) < edges) ++n;
    return n;
}

std::size_t effective_max_edges(const GeneratorParams& p) {
    return std::min(p.max_edges, max_pairs(p.max_nodes));
}

}  // namespace

void check_params(const GeneratorParams& p) {
    auto fail = [](const std::string& msg) { throw Error(Errc::infeasible, msg); };
    if (p.min_edges < 1) fail("min_edges must be >= 1");
    if (p.max_edges < p.min_edges) fail("max_edges must be >= min_edges");
    if (p.min_nodes < 2) fail("min_nodes must be >= 2");
    if (p.max_nodes < p.min_nodes) fail("max_nodes must be >= min_nodes");
    if (max_pairs(p.max_nodes) < p.min_edges) {
        fail("max_nodes " + std::to_string(p.max_nodes) + " cannot hold " + std::to_string(p.min_edges) + " edges");
    }
    if (!(p.canvas.width > 0.0) || !(p.canvas.height > 0.0)) fail("canvas must have positive size");
    if (p.max_curvature < 0.0 || p.max_curvature > 1.0) fail("max_curvature must lie in [0, 1]");
    if (!(p.node_radius > 0.0) || !(p.stroke_width > 0.0)) fail("node_radius and stroke_width must be > 0");
}

Graph generate_graph(const GeneratorParams& p) {
    check_params(p);
    std::mt19937_64 rng(mix_seed(p.seed, kGraphStream));
    const std::size_t n_lo = std::max(p.min_nodes, min_nodes_for(p.min_edges));
    const std::size_t n = std::uniform_int_distribution<std::size_t>(n_lo, p.max_nodes)(rng);
    const std::size_t m_hi = std::min(p.max_edges, max_pairs(n));
    const std::size_t m = std::uniform_int_distribution<std::size_t>(p.min_edges, m_hi)(rng);

    std::vector<Edge> pairs;
    pairs.reserve(max_pairs(n));
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) pairs.push_back({u, v});
    }
    // Partial Fisher-Yates: the first m slots are a uniform m-subset.
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = std::uniform_int_distribution<std::size_t>(i, pairs.size() - 1)(rng);
        std::swap(pairs[i], pairs[j]);
    }
    pairs.resize(m);
    std::sort(pairs.begin(), pairs.end(), [](const Edge& a, const Edge& b) { return a.key() < b.key(); });
    return Graph::with_nodes(n, std::move(pairs));
}

Drawing random_drawing(const Graph& g, const GeneratorParams& p) {
    check_params(p);
    std::mt19937_64 rng(mix_seed(p.seed, kDrawingStream));
    std::uniform_real_distribution<double> xs(0.0, p.canvas.width);
    std::uniform_real_distribution<double> ys(0.0, p.canvas.height);
    std::uniform_real_distribution<double> ks(-p.max_curvature, p.max_curvature);
    Drawing d;
    d.graph = g;
    d.canvas = p.canvas;
    d.node_radius = p.node_radius;
    d.stroke_width = p.stroke_width;
    d.positions.reserve(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const double x = xs(rng);
        const double y = ys(rng);
        d.positions.push_back({x, y});
    }
    d.curvatures.reserve(g.edge_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i) d.curvatures.push_back(p.max_curvature > 0.0 ? ks(rng) : 0.0);
    return d;
}

std::vector<Drawing> generate_element_set(const GeneratorParams& p, std::size_t count) {
    check_params(p);
    if (count < 1) throw Error(Errc::invalid_argument, "element count must be >= 1");
    const std::size_t span_needed = (effective_max_edges(p) - p.min_edges + 1) / 2;
    for (std::size_t round = 0; round < kMaxResampleRounds; ++round) {
        std::vector<Drawing> set;
        set.reserve(count);
        std::size_t lo = SIZE_MAX, hi = 0;
        for (std::size_t i = 0; i < count; ++i) {
            GeneratorParams q = p;
            q.seed = mix_seed(mix_seed(p.seed, round), i);
            Graph g = generate_graph(q);
            lo = std::min(lo, g.edge_count());
            hi = std::max(hi, g.edge_count());
            set.push_back(random_drawing(g, q));
        }
        if (count == 1 || hi - lo >= span_needed) return set;
    }
    throw Error(Errc::infeasible, "no element set with the required edge-count span after " +
                                      std::to_string(kMaxResampleRounds) + " rounds");
}

}  // namespace gaw::gen
