#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaw/json_io.hpp"
#include "gaw/model.hpp"

namespace gaw::metrics {

/// Path metrics use every connected pair up to this many pairs, otherwise a
/// fixed-seed sample of this size.
inline constexpr std::size_t kPathPairCap = 200;
/// Path bendiness is expressed per unit length of this reference canvas diagonal.
inline constexpr double kReferenceDiagonal = 1414.2135623730951;  // 1000 x 1000

struct MetricVector {
    std::vector<MetricResult> results;  // catalog order
    std::string drawing_hash;

    const MetricResult& operator[](MetricId id) const { return results.at(static_cast<std::size_t>(id)); }
};

MetricResult evaluate(const Drawing& d, MetricId id);
/// Throws std::invalid_argument for an id outside the catalog.
MetricResult evaluate(const Drawing& d, std::string_view id);

/// Evaluates a subset with one shared geometry pass (crossings, faces and
/// shortest paths are computed at most once).
std::vector<MetricResult> evaluate_many(const Drawing& d, std::span<const MetricId> ids);

MetricVector evaluate_all(const Drawing& d);

/// Formula text for the raw value and its score mapping.
std::string_view explain(MetricId id);
std::string_view explain(std::string_view id);

/// {"drawing_hash": ..., "results": {id: {"raw", "score", "defined"}}}
Json to_json(const MetricVector& v);
MetricVector metric_vector_from_json(const Json& j);

/// Plain-text table (id, defined, raw, score).
std::string render_text(const MetricVector& v);

}  // namespace gaw::metrics
