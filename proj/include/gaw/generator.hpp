#pragma once

#include <cstdint>
#include <vector>

#include "gaw/model.hpp"

namespace gaw::gen {

struct GeneratorParams {
    std::uint64_t seed = 0;
    std::size_t min_edges = 5;
    std::size_t max_edges = 69;
    std::size_t min_nodes = 4;
    std::size_t max_nodes = 40;
    Canvas canvas{};
    double max_curvature = 0.8;
    double node_radius = 8.0;
    double stroke_width = 2.0;
};

/// Throws gaw::Error(infeasible) describing the first broken constraint.
void check_params(const GeneratorParams& p);

/// G(n, m): n uniform over the node range (restricted to counts that admit
/// min_edges), m uniform over [min_edges, min(max_edges, n(n-1)/2)], then m
/// distinct node pairs uniformly without replacement. Edges come out sorted.
Graph generate_graph(const GeneratorParams& p);

/// Positions i.i.d. uniform over the canvas, curvatures i.i.d. uniform over
/// [-max_curvature, max_curvature]. Overlapping nodes are kept.
Drawing random_drawing(const Graph& g, const GeneratorParams& p);

/// `count` independent drawings whose edge counts span at least half of the
/// admissible edge range; resamples whole sets up to 1000 times.
std::vector<Drawing> generate_element_set(const GeneratorParams& p, std::size_t count = 12);

inline constexpr std::size_t kMaxResampleRounds = 1000;

}  // namespace gaw::gen
