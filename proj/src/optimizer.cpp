#include "gaw/optimizer.hpp"

#include <cmath>
#include <random>

#include "gaw/error.hpp"
#include "gaw/generator.hpp"
#include "gaw/hash.hpp"
#include "gaw/metrics.hpp"

namespace gaw::opt {

Objective default_objective() {
    Objective o;
    for (const auto& e : catalog()) {
        if (e.evaluated) o.weights[e.id] = 1.0;
    }
    return o;
}

void check_objective(const Objective& o) {
    bool any_positive = false;
    for (const auto& [id, w] : o.weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw Error(Errc::invalid_argument, "weight for " + std::string(to_string(id)) + " must be >= 0");
        }
        any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) throw Error(Errc::invalid_argument, "objective needs at least one positive weight");
}

namespace {

/// Objective evaluation with weights pre-normalized once.
class Evaluator {
public:
    explicit Evaluator(const Objective& o) : policy_(o.undefined_policy) {
        check_objective(o);
        for (const auto& [id, w] : o.weights) {
            if (w > 0.0) {
                ids_.push_back(id);
                weights_.push_back(w);
            }
        }
    }

    std::optional<double> operator()(const Drawing& d) const {
        const auto results = metrics::evaluate_many(d, ids_);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results[i].defined) {
                num += weights_[i] * results[i].score;
                den += weights_[i];
            } else if (policy_ == UndefinedPolicy::worst) {
                den += weights_[i];
            }
        }
        if (den <= 0.0) return std::nullopt;
        return num / den;
    }

private:
    UndefinedPolicy policy_;
    std::vector<MetricId> ids_;
    std::vector<double> weights_;
};

enum class Mode { anneal, greedy };

bool has_degenerate_edge(const Drawing& d, NodeId moved) {
    for (const auto& e : d.graph.edges) {
        if (e.touches(moved) && d.positions[e.u] == d.positions[e.v]) return true;
    }
    return false;
}

SearchResult search(const Drawing& start, const Objective& o, const AnnealConfig& c, Mode mode) {
    check_config(c);
    const Evaluator eval(o);
    // Undefined candidates (possible under `skip`) rank below every defined value.
    auto value_of = [&](const Drawing& d) { return eval(d).value_or(0.0); };

    std::mt19937_64 rng(mix_seed(c.seed, 3));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    Drawing cur = start;
    double cur_value = value_of(cur);
    SearchResult res;
    res.drawing = cur;
    res.value = cur_value;
    res.best_trace.push_back(cur_value);
    res.current_trace.push_back(cur_value);

    const std::size_t n = cur.graph.node_count();
    const std::size_t m = cur.graph.edge_count();
    if (n + m == 0) return res;

    double temperature = c.initial_temperature;
    for (std::size_t it = 0; it < c.max_iterations; ++it) {
        const auto var = std::uniform_int_distribution<std::size_t>(0, n + m - 1)(rng);
        bool valid = true;
        Point old_pos{};
        double old_curv = 0.0;
        if (var < n) {
            const double dx = gauss(rng) * c.node_sigma * cur.canvas.width;
            const double dy = gauss(rng) * c.node_sigma * cur.canvas.height;
            old_pos = cur.positions[var];
            cur.positions[var] = {std::clamp(old_pos.x + dx, 0.0, cur.canvas.width),
                                  std::clamp(old_pos.y + dy, 0.0, cur.canvas.height)};
            valid = !has_degenerate_edge(cur, static_cast<NodeId>(var));
        } else {
            const double step = (2.0 * unit(rng) - 1.0) * c.curvature_delta;
            old_curv = cur.curvatures[var - n];
            cur.curvatures[var - n] = std::clamp(old_curv + step, -1.0, 1.0);
        }
        // Drawn every iteration so the random stream does not depend on outcomes.
        const double u = unit(rng);

        bool accept = false;
        double cand_value = cur_value;
        if (valid) {
            cand_value = value_of(cur);
            const double delta = cand_value - cur_value;
            if (mode == Mode::greedy) {
                accept = delta > 0.0;
            } else {
                accept = delta >= 0.0 || (temperature > 0.0 && u < std::exp(delta / temperature));
            }
        }
        if (accept) {
            cur_value = cand_value;
            if (cur_value > res.value) {
                res.value = cur_value;
                res.drawing = cur;
            }
        } else if (var < n) {
            cur.positions[var] = old_pos;
        } else {
            cur.curvatures[var - n] = old_curv;
        }
        res.accepted.push_back(accept);
        res.best_trace.push_back(res.value);
        res.current_trace.push_back(cur_value);
        temperature *= c.cooling_factor;
    }
    return res;
}

}  // namespace

std::optional<double> try_objective_value(const Drawing& d, const Objective& o) { return Evaluator(o)(d); }

double objective_value(const Drawing& d, const Objective& o) {
    if (auto v = try_objective_value(d, o)) return *v;
    throw Error(Errc::precondition_failed, "every weighted metric is undefined for this drawing");
}

void check_config(const AnnealConfig& c) {
    if (!(c.cooling_factor > 0.0 && c.cooling_factor < 1.0)) {
        throw Error(Errc::invalid_argument, "cooling_factor must lie in (0, 1)");
    }
    if (!(c.initial_temperature >= 0.0)) throw Error(Errc::invalid_argument, "initial_temperature must be >= 0");
    if (!(c.node_sigma >= 0.0) || !(c.curvature_delta >= 0.0)) {
        throw Error(Errc::invalid_argument, "move scales must be >= 0");
    }
}

SearchResult anneal(const Drawing& start, const Objective& o, const AnnealConfig& c) {
    return search(start, o, c, Mode::anneal);
}

SearchResult optimize_layout(const Graph& g, const Objective& o, const AnnealConfig& c) {
    gen::GeneratorParams p;
    p.seed = c.seed;
    p.canvas = c.canvas;
    p.max_curvature = c.max_curvature;
    p.node_radius = c.node_radius;
    p.stroke_width = c.stroke_width;
    return search(gen::random_drawing(g, p), o, c, Mode::anneal);
}

SearchResult greedy_refine(const Drawing& d, const Objective& o, const AnnealConfig& c) {
    return search(d, o, c, Mode::greedy);
}

Json to_json(const Objective& o) {
    Json w = Json::object();
    for (const auto& [id, v] : o.weights) w[std::string(to_string(id))] = v;
    return Json{{"weights", w}, {"undefined_policy", o.undefined_policy == UndefinedPolicy::skip ? "skip" : "worst"}};
}

Objective objective_from_json(const Json& j) {
    Objective o;
    try {
        for (const auto& [k, v] : j.at("weights").items()) {
            const auto id = parse_metric_id(k);
            if (!id) throw Error(Errc::invalid_argument, "unknown metric id '" + k + "'");
            o.weights[*id] = v.get<double>();
        }
        const auto policy = j.value("undefined_policy", std::string("skip"));
        if (policy == "skip") o.undefined_policy = UndefinedPolicy::skip;
        else if (policy == "worst") o.undefined_policy = UndefinedPolicy::worst;
        else throw Error(Errc::invalid_argument, "undefined_policy must be 'skip' or 'worst'");
    } catch (const Json::exception& e) {
        throw Error(Errc::malformed_payload, std::string("objective: ") + e.what());
    }
    check_objective(o);
    return o;
}

}  // namespace gaw::opt
