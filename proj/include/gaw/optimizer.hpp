#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "gaw/json_io.hpp"
#include "gaw/model.hpp"

namespace gaw::opt {

enum class UndefinedPolicy { skip, worst };

struct Objective {
    std::map<MetricId, double> weights;
    UndefinedPolicy undefined_policy = UndefinedPolicy::skip;
};

/// Uniform weights over the aesthetics with published readability evidence.
Objective default_objective();

/// Throws gaw::Error(invalid_argument) for negative/non-finite weights or
/// when no weight is strictly positive.
void check_objective(const Objective& o);

/// Weighted mean of scores in [0,1]. Under `skip`, undefined metrics drop out
/// of numerator and denominator; under `worst` they score 0. Throws
/// gaw::Error(precondition_failed) when every weighted metric is undefined
/// under `skip`.
double objective_value(const Drawing& d, const Objective& o);

/// Same as objective_value, but nullopt instead of throwing.
std::optional<double> try_objective_value(const Drawing& d, const Objective& o);

struct AnnealConfig {
    std::uint64_t seed = 0;
    std::size_t max_iterations = 20000;
    double initial_temperature = 0.1;
    double cooling_factor = 0.9997;
    double node_sigma = 0.02;       // Gaussian step, fraction of canvas size per axis
    double curvature_delta = 0.1;   // uniform step half-width
    // Start drawing (random layout) parameters.
    Canvas canvas{};
    double node_radius = 8.0;
    double stroke_width = 2.0;
    double max_curvature = 0.8;
};

void check_config(const AnnealConfig& c);

struct SearchResult {
    Drawing drawing;                    // best drawing seen
    double value = 0.0;                 // objective of `drawing`
    std::vector<double> best_trace;     // [0] = start, then best value after each iteration
    std::vector<double> current_trace;  // [0] = start, then current value after each iteration
    std::vector<bool> accepted;         // one entry per iteration
};

/// Simulated annealing from a random drawing of `g`: each iteration moves one
/// node (Gaussian) or one curvature (uniform), accepts when the objective does
/// not drop, else with probability exp(delta / T); T cools geometrically.
/// Candidates that collapse an edge onto a point are rejected.
SearchResult optimize_layout(const Graph& g, const Objective& o, const AnnealConfig& c);

/// Annealing from a given drawing.
SearchResult anneal(const Drawing& start, const Objective& o, const AnnealConfig& c);

/// Hill climbing: same moves, only strict improvements are kept.
SearchResult greedy_refine(const Drawing& d, const Objective& o, const AnnealConfig& c);

Json to_json(const Objective& o);
/// {"weights": {id: w}, "undefined_policy": "skip" | "worst"}
Objective objective_from_json(const Json& j);

}  // namespace gaw::opt
