#include "gaw/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <sstream>

#include "gaw/error.hpp"
#include "gaw/geometry.hpp"

namespace gaw::metrics {

namespace geo = gaw::geometry;

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;
constexpr double kBendThreshold = 0.05;
constexpr double kLocalSymmetryToleranceDeg = 10.0;
constexpr int kGlobalSymmetryAxes = 16;
constexpr int kNodeGridDivisions = 16;
constexpr std::uint64_t kPairSampleSeed = 0x5A17ED5EEDULL;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

double mean(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double stddev(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

double coefficient_of_variation(std::span<const double> v) {
    const double m = mean(v);
    return m > 0.0 ? stddev(v) / m : 0.0;
}

MetricResult make(MetricId id, double raw, double score) {
    MetricResult r;
    r.id = id;
    r.raw = raw;
    r.score = clamp01(score);
    r.defined = std::isfinite(raw) && std::isfinite(score);
    if (!r.defined) return MetricResult::undefined(id);
    return r;
}

/// Average ranks (ties share the mean rank).
std::vector<double> ranks(std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
    return sab / std::sqrt(saa * sbb);
}

/// Smallest absolute difference between two directions, in degrees [0, 180].
double direction_gap_deg(double a_rad, double b_rad) {
    double d = std::fmod(std::abs(a_rad - b_rad) * kDeg, 360.0);
    return d > 180.0 ? 360.0 - d : d;
}

/// Lazily computed, shared geometry for one drawing.
class Context {
public:
    explicit Context(const Drawing& d) : d_(d) {}

    const Drawing& drawing() const { return d_; }
    std::size_t n() const { return d_.graph.nodes.size(); }
    std::size_t m() const { return d_.graph.edges.size(); }

    const std::vector<geo::Polyline>& polylines() {
        if (!polylines_) polylines_ = geo::flatten_edges(d_);
        return *polylines_;
    }

    const std::vector<double>& lengths() {
        if (!lengths_) {
            lengths_.emplace();
            for (const auto& p : polylines()) lengths_->push_back(p.length());
        }
        return *lengths_;
    }

    const std::vector<geo::Crossing>& crossings() {
        if (!crossings_) crossings_ = geo::find_crossings(d_, polylines());
        return *crossings_;
    }

    const std::vector<double>& crossing_angles() {
        if (!crossing_angles_) {
            crossing_angles_.emplace();
            for (const auto& c : crossings()) crossing_angles_->push_back(c.angle);
        }
        return *crossing_angles_;
    }

    const std::vector<geo::Face>& bounded_faces() {
        if (!faces_) {
            faces_.emplace();
            for (auto& f : geo::compute_faces(polylines())) {
                if (f.bounded) faces_->push_back(std::move(f));
            }
        }
        return *faces_;
    }

    const std::vector<std::size_t>& degrees() {
        if (!degrees_) degrees_ = d_.graph.degrees();
        return *degrees_;
    }

    /// Incident angle lists for nodes of degree >= 2 (node, angles).
    const std::vector<std::pair<NodeId, std::vector<double>>>& node_angles() {
        if (!node_angles_) {
            node_angles_.emplace();
            for (NodeId v = 0; v < n(); ++v) {
                if (degrees()[v] < 2) continue;
                node_angles_->push_back({v, *geo::incident_angles(d_, v)});
            }
        }
        return *node_angles_;
    }

    /// Ink bounding box: node discs plus stroked edge polylines.
    struct Box {
        double min_x, min_y, max_x, max_y;
        double width() const { return max_x - min_x; }
        double height() const { return max_y - min_y; }
    };
    std::optional<Box> ink_box() {
        if (n() == 0) return std::nullopt;
        Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        auto grow = [&](Point p, double r) {
            b.min_x = std::min(b.min_x, p.x - r);
            b.min_y = std::min(b.min_y, p.y - r);
            b.max_x = std::max(b.max_x, p.x + r);
            b.max_y = std::max(b.max_y, p.y + r);
        };
        for (Point p : d_.positions) grow(p, d_.node_radius);
        for (const auto& line : polylines()) {
            for (Point p : line.points) grow(p, 0.5 * d_.stroke_width);
        }
        return b;
    }

    const std::vector<std::vector<NodeId>>& adjacency() {
        if (!adjacency_) {
            adjacency_ = d_.graph.adjacency();
            for (auto& a : *adjacency_) std::sort(a.begin(), a.end());
        }
        return *adjacency_;
    }

    /// BFS distances (hops) from every node; -1 when unreachable.
    const std::vector<std::vector<int>>& hop_distances() {
        if (!hops_) {
            hops_.emplace(n(), std::vector<int>(n(), -1));
            for (NodeId s = 0; s < n(); ++s) {
                auto& dist = (*hops_)[s];
                std::queue<NodeId> q;
                dist[s] = 0;
                q.push(s);
                while (!q.empty()) {
                    const NodeId x = q.front();
                    q.pop();
                    for (NodeId y : adjacency()[x]) {
                        if (dist[y] < 0) {
                            dist[y] = dist[x] + 1;
                            q.push(y);
                        }
                    }
                }
            }
        }
        return *hops_;
    }

    const std::vector<std::pair<NodeId, NodeId>>& connected_pairs() {
        if (!connected_pairs_) {
            connected_pairs_.emplace();
            for (NodeId s = 0; s < n(); ++s) {
                for (NodeId t = s + 1; t < n(); ++t) {
                    if (hop_distances()[s][t] > 0) connected_pairs_->push_back({s, t});
                }
            }
        }
        return *connected_pairs_;
    }

    /// Graph-shortest paths (node sequences) for the path-metric pair sample.
    const std::vector<std::vector<NodeId>>& sampled_paths() {
        if (!paths_) {
            std::vector<std::pair<NodeId, NodeId>> pairs = connected_pairs();
            if (n() > 12 && pairs.size() > kPathPairCap) {
                std::mt19937_64 rng(kPairSampleSeed);
                for (std::size_t i = 0; i < kPathPairCap; ++i) {
                    std::uniform_int_distribution<std::size_t> pick(i, pairs.size() - 1);
                    std::swap(pairs[i], pairs[pick(rng)]);
                }
                pairs.resize(kPathPairCap);
            }
            paths_.emplace();
            for (auto [s, t] : pairs) paths_->push_back(shortest_path(s, t));
        }
        return *paths_;
    }

    /// Flattened geometry of a node path, oriented from its first node.
    std::vector<Point> path_points(const std::vector<NodeId>& path) {
        std::vector<Point> pts{d_.positions[path.front()]};
        for (std::size_t i = 1; i < path.size(); ++i) {
            const std::size_t e = edge_index(path[i - 1], path[i]);
            const auto& line = polylines()[e].points;
            if (d_.graph.edges[e].u == path[i - 1]) {
                pts.insert(pts.end(), line.begin() + 1, line.end());
            } else {
                pts.insert(pts.end(), line.rbegin() + 1, line.rend());
            }
        }
        return pts;
    }

private:
    std::size_t edge_index(NodeId a, NodeId b) {
        if (!edge_lookup_) {
            edge_lookup_.emplace();
            for (std::size_t i = 0; i < m(); ++i) edge_lookup_->emplace(d_.graph.edges[i].key(), i);
        }
        return edge_lookup_->at(a < b ? std::pair{a, b} : std::pair{b, a});
    }

    /// Walks BFS distances back from t, always taking the smallest-id
    /// predecessor, so ties resolve deterministically.
    std::vector<NodeId> shortest_path(NodeId s, NodeId t) {
        const auto& dist = hop_distances()[s];
        std::vector<NodeId> rev{t};
        NodeId cur = t;
        while (cur != s) {
            for (NodeId p : adjacency()[cur]) {
                if (dist[p] == dist[cur] - 1) {
                    cur = p;
                    break;
                }
            }
            rev.push_back(cur);
        }
        return {rev.rbegin(), rev.rend()};
    }

    const Drawing& d_;
    std::optional<std::vector<geo::Polyline>> polylines_;
    std::optional<std::vector<double>> lengths_;
    std::optional<std::vector<geo::Crossing>> crossings_;
    std::optional<std::vector<double>> crossing_angles_;
    std::optional<std::vector<geo::Face>> faces_;
    std::optional<std::vector<std::size_t>> degrees_;
    std::optional<std::vector<std::pair<NodeId, std::vector<double>>>> node_angles_;
    std::optional<std::vector<std::vector<NodeId>>> adjacency_;
    std::optional<std::vector<std::vector<int>>> hops_;
    std::optional<std::vector<std::pair<NodeId, NodeId>>> connected_pairs_;
    std::optional<std::vector<std::vector<NodeId>>> paths_;
    std::optional<std::map<std::pair<NodeId, NodeId>, std::size_t>> edge_lookup_;
};

// --- individual metrics ------------------------------------------------------

MetricResult angular_resolution(Context& c) {
    constexpr auto id = MetricId::angular_resolution;
    const auto& na = c.node_angles();
    if (na.empty()) return MetricResult::undefined(id);
    double min_angle = std::numeric_limits<double>::infinity();
    double ideal = std::numeric_limits<double>::infinity();
    for (const auto& [v, angles] : na) {
        min_angle = std::min(min_angle, *std::min_element(angles.begin(), angles.end()));
        ideal = std::min(ideal, 360.0 / static_cast<double>(angles.size()));
    }
    return make(id, min_angle, min_angle / ideal);
}

MetricResult angular_resolution_sd(Context& c) {
    constexpr auto id = MetricId::angular_resolution_sd;
    std::vector<double> all;
    for (const auto& [v, angles] : c.node_angles()) all.insert(all.end(), angles.begin(), angles.end());
    if (all.empty()) return MetricResult::undefined(id);
    const double sd = stddev(all);
    return make(id, sd, 1.0 / (1.0 + sd / 36.0));
}

MetricResult area(Context& c) {
    constexpr auto id = MetricId::area;
    const auto box = c.ink_box();
    if (!box) return MetricResult::undefined(id);
    const double a = box->width() * box->height();
    return make(id, a, 1.0 - a / c.drawing().canvas.area());
}

MetricResult aspect_ratio(Context& c) {
    constexpr auto id = MetricId::aspect_ratio;
    const auto box = c.ink_box();
    if (!box) return MetricResult::undefined(id);
    const double r = box->width() / box->height();
    return make(id, r, std::min(r, 1.0 / r));
}

MetricResult cluster_similar_nodes(Context& c) {
    constexpr auto id = MetricId::cluster_similar_nodes;
    const auto& pairs = c.connected_pairs();
    if (pairs.size() < 2) return MetricResult::undefined(id);
    std::vector<double> hops, euclid;
    for (auto [s, t] : pairs) {
        hops.push_back(c.hop_distances()[s][t]);
        euclid.push_back(geo::distance(c.drawing().positions[s], c.drawing().positions[t]));
    }
    const auto rho = pearson(ranks(hops), ranks(euclid));
    if (!rho) return MetricResult::undefined(id);
    return make(id, *rho, (*rho + 1.0) / 2.0);
}

MetricResult convex_faces(Context& c) {
    constexpr auto id = MetricId::convex_faces;
    const auto& faces = c.bounded_faces();
    if (faces.empty()) return MetricResult::undefined(id);
    const auto convex = std::count_if(faces.begin(), faces.end(), [](const auto& f) { return f.convex; });
    const double frac = static_cast<double>(convex) / static_cast<double>(faces.size());
    return make(id, frac, frac);
}

MetricResult consistent_flow_direction(Context& c) {
    constexpr auto id = MetricId::consistent_flow_direction;
    if (c.m() == 0) return MetricResult::undefined(id);
    double sx = 0.0, sy = 0.0;
    for (const auto& e : c.drawing().graph.edges) {
        const Point chord = c.drawing().positions[e.v] - c.drawing().positions[e.u];
        const double theta = std::atan2(chord.y, chord.x);
        sx += std::cos(2.0 * theta);
        sy += std::sin(2.0 * theta);
    }
    const double r = std::hypot(sx, sy) / static_cast<double>(c.m());
    return make(id, r, r);
}

MetricResult crossing_angle(Context& c) {
    constexpr auto id = MetricId::crossing_angle;
    const auto& a = c.crossing_angles();
    if (a.empty()) return MetricResult::undefined(id);
    const double mu = mean(a);
    return make(id, mu, mu / 90.0);
}

MetricResult difference_between_angles(Context& c) {
    constexpr auto id = MetricId::difference_between_angles;
    const auto& a = c.crossing_angles();
    if (a.empty()) return MetricResult::undefined(id);
    const double diff = 90.0 - *std::min_element(a.begin(), a.end());
    return make(id, diff, 1.0 - diff / 90.0);
}

MetricResult crossing_angle_sd(Context& c) {
    constexpr auto id = MetricId::crossing_angle_sd;
    const auto& a = c.crossing_angles();
    if (a.size() < 2) return MetricResult::undefined(id);
    const double sd = stddev(a);
    return make(id, sd, 1.0 / (1.0 + sd / 30.0));
}

std::vector<double> abs_curvatures(Context& c) {
    std::vector<double> k;
    for (double x : c.drawing().curvatures) k.push_back(std::abs(x));
    return k;
}

MetricResult degree_of_edge_bends(Context& c) {
    constexpr auto id = MetricId::degree_of_edge_bends;
    if (c.m() == 0) return MetricResult::undefined(id);
    const double mu = mean(abs_curvatures(c));
    return make(id, mu, 1.0 - mu);
}

MetricResult maximum_bends(Context& c) {
    constexpr auto id = MetricId::maximum_bends;
    if (c.m() == 0) return MetricResult::undefined(id);
    const auto k = abs_curvatures(c);
    const double mx = *std::max_element(k.begin(), k.end());
    return make(id, mx, 1.0 - mx);
}

MetricResult number_of_bends(Context& c) {
    constexpr auto id = MetricId::number_of_bends;
    if (c.m() == 0) return MetricResult::undefined(id);
    const auto k = abs_curvatures(c);
    const double bends = static_cast<double>(std::count_if(k.begin(), k.end(), [](double x) { return x > kBendThreshold; }));
    return make(id, bends, 1.0 - bends / static_cast<double>(c.m()));
}

MetricResult uniform_edge_bends(Context& c) {
    constexpr auto id = MetricId::uniform_edge_bends;
    if (c.m() == 0) return MetricResult::undefined(id);
    const double sd = stddev(abs_curvatures(c));
    return make(id, sd, 1.0 / (1.0 + 10.0 * sd));
}

MetricResult distribute_nodes_evenly(Context& c) {
    constexpr auto id = MetricId::distribute_nodes_evenly;
    const std::size_t n = c.n();
    if (n < 2) return MetricResult::undefined(id);
    const auto k = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    const auto& canvas = c.drawing().canvas;
    std::vector<std::size_t> counts(k * k, 0);
    auto cell = [k](double v, double extent) {
        const double f = std::floor(v / extent * static_cast<double>(k));
        return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(k - 1)));
    };
    for (Point p : c.drawing().positions) ++counts[cell(p.y, canvas.height) * k + cell(p.x, canvas.width)];
    double h = 0.0;
    for (std::size_t cnt : counts) {
        if (cnt == 0) continue;
        const double q = static_cast<double>(cnt) / static_cast<double>(n);
        h -= q * std::log(q);
    }
    // n <= k*k, so log(n) is the largest attainable entropy.
    const double e = h / std::log(static_cast<double>(n));
    return make(id, e, e);
}

MetricResult edge_orthogonality(Context& c) {
    constexpr auto id = MetricId::edge_orthogonality;
    if (c.m() == 0) return MetricResult::undefined(id);
    double total = 0.0;
    for (const auto& e : c.drawing().graph.edges) {
        const Point chord = c.drawing().positions[e.v] - c.drawing().positions[e.u];
        const double a = std::fmod(std::atan2(std::abs(chord.y), std::abs(chord.x)) * kDeg, 90.0);
        total += std::min(a, 90.0 - a);
    }
    const double dev = total / static_cast<double>(c.m());
    return make(id, dev, 1.0 - dev / 45.0);
}

/// Greedy globally-nearest bijective matching; returns number of matched items.
template <typename Dist>
std::size_t greedy_match(std::size_t count, double tolerance, Dist&& dist) {
    struct Cand {
        double d;
        std::size_t i, j;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            const double dd = dist(i, j);
            if (dd <= tolerance) cands.push_back({dd, i, j});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    std::vector<bool> used_src(count, false), used_dst(count, false);
    std::size_t matched = 0;
    for (const auto& cd : cands) {
        if (used_src[cd.i] || used_dst[cd.j]) continue;
        used_src[cd.i] = used_dst[cd.j] = true;
        ++matched;
    }
    return matched;
}

MetricResult global_symmetry(Context& c) {
    constexpr auto id = MetricId::global_symmetry;
    const std::size_t n = c.n();
    if (n == 0) return MetricResult::undefined(id);
    const auto& pos = c.drawing().positions;
    Point centroid{0.0, 0.0};
    for (Point p : pos) centroid = centroid + p;
    centroid = centroid * (1.0 / static_cast<double>(n));
    const double tol = 2.0 * c.drawing().node_radius;
    double best = 0.0;
    for (int k = 0; k < kGlobalSymmetryAxes; ++k) {
        const double alpha = k * std::numbers::pi / kGlobalSymmetryAxes;
        const Point axis{std::cos(alpha), std::sin(alpha)};
        std::vector<Point> mirrored(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Point rel = pos[i] - centroid;
            const Point along = axis * geo::dot(rel, axis);
            mirrored[i] = centroid + along * 2.0 - rel;
        }
        const auto matched =
            greedy_match(n, tol, [&](std::size_t i, std::size_t j) { return geo::distance(mirrored[i], pos[j]); });
        best = std::max(best, static_cast<double>(matched) / static_cast<double>(n));
    }
    return make(id, best, best);
}

MetricResult keep_nodes_apart_from_edges(Context& c) {
    constexpr auto id = MetricId::keep_nodes_apart_from_edges;
    const auto& edges = c.drawing().graph.edges;
    double best = std::numeric_limits<double>::infinity();
    for (NodeId v = 0; v < c.n(); ++v) {
        for (std::size_t e = 0; e < c.m(); ++e) {
            if (edges[e].touches(v)) continue;
            best = std::min(best, geo::point_polyline_distance(c.drawing().positions[v], c.polylines()[e]));
        }
    }
    if (!std::isfinite(best)) return MetricResult::undefined(id);
    return make(id, best, best / (4.0 * c.drawing().node_radius));
}

MetricResult local_symmetry(Context& c) {
    constexpr auto id = MetricId::local_symmetry;
    const std::size_t n = c.n();
    double total = 0.0;
    std::size_t counted = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (c.degrees()[v] < 2) continue;
        const auto dirs = geo::incident_directions(c.drawing(), v);
        const std::size_t deg = dirs.size();
        double best = 0.0;
        for (std::size_t i = 0; i < deg; ++i) {
            for (std::size_t j = i; j < deg; ++j) {
                const double bisector = 0.5 * (dirs[i] + dirs[j]);
                for (double axis : {bisector, bisector + 0.5 * std::numbers::pi}) {
                    const auto matched = greedy_match(deg, kLocalSymmetryToleranceDeg, [&](std::size_t a, std::size_t b) {
                        return direction_gap_deg(2.0 * axis - dirs[a], dirs[b]);
                    });
                    best = std::max(best, static_cast<double>(matched) / static_cast<double>(deg));
                }
            }
        }
        total += best;
        ++counted;
    }
    if (counted == 0) return MetricResult::undefined(id);
    const double r = total / static_cast<double>(counted);
    return make(id, r, r);
}

MetricResult maximum_edge_length(Context& c) {
    constexpr auto id = MetricId::maximum_edge_length;
    if (c.m() == 0) return MetricResult::undefined(id);
    const double mx = *std::max_element(c.lengths().begin(), c.lengths().end());
    return make(id, mx, 1.0 / (1.0 + mx / c.drawing().canvas.diagonal()));
}

MetricResult total_edge_length(Context& c) {
    constexpr auto id = MetricId::total_edge_length;
    if (c.m() == 0) return MetricResult::undefined(id);
    const double sum = std::accumulate(c.lengths().begin(), c.lengths().end(), 0.0);
    const double ref = static_cast<double>(c.m()) * c.drawing().canvas.diagonal() / 4.0;
    return make(id, sum, 1.0 / (1.0 + sum / ref));
}

MetricResult uniform_edge_lengths(Context& c) {
    constexpr auto id = MetricId::uniform_edge_lengths;
    if (c.m() == 0) return MetricResult::undefined(id);
    const double cv = coefficient_of_variation(c.lengths());
    return make(id, cv, 1.0 / (1.0 + cv));
}

MetricResult node_orthogonality(Context& c) {
    constexpr auto id = MetricId::node_orthogonality;
    if (c.n() == 0) return MetricResult::undefined(id);
    const double pitch = c.drawing().canvas.width / kNodeGridDivisions;
    std::size_t on_grid = 0;
    for (Point p : c.drawing().positions) {
        const Point g{std::round(p.x / pitch) * pitch, std::round(p.y / pitch) * pitch};
        if (geo::distance(p, g) <= c.drawing().node_radius) ++on_grid;
    }
    const double f = static_cast<double>(on_grid) / static_cast<double>(c.n());
    return make(id, f, f);
}

MetricResult nodes_should_not_overlap(Context& c) {
    constexpr auto id = MetricId::nodes_should_not_overlap;
    const std::size_t n = c.n();
    if (n < 2) return MetricResult::undefined(id);
    const auto& pos = c.drawing().positions;
    const double min_gap = 2.0 * c.drawing().node_radius;
    std::size_t overlaps = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (geo::distance(pos[i], pos[j]) < min_gap) ++overlaps;
        }
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return make(id, static_cast<double>(overlaps), 1.0 - static_cast<double>(overlaps) / pairs);
}

MetricResult number_of_branches(Context& c) {
    constexpr auto id = MetricId::number_of_branches;
    const auto& paths = c.sampled_paths();
    if (paths.empty()) return MetricResult::undefined(id);
    double total = 0.0;
    for (const auto& path : paths) {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            const auto deg = c.degrees()[path[i]];
            if (deg > 2) total += static_cast<double>(deg - 2);
        }
    }
    const double r = total / static_cast<double>(paths.size());
    return make(id, r, 1.0 / (1.0 + r));
}

MetricResult number_of_edge_crossings(Context& c) {
    constexpr auto id = MetricId::number_of_edge_crossings;
    const auto& edges = c.drawing().graph.edges;
    double c_max = 0.0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            if (!edges[i].shares_endpoint(edges[j])) c_max += 1.0;
        }
    }
    const double raw = static_cast<double>(c.crossings().size());
    const double score = c_max > 0.0 ? 1.0 - raw / c_max : (raw == 0.0 ? 1.0 : 0.0);
    return make(id, raw, score);
}

MetricResult path_bendiness(Context& c) {
    constexpr auto id = MetricId::path_bendiness;
    const auto& paths = c.sampled_paths();
    if (paths.empty()) return MetricResult::undefined(id);
    const double to_reference = kReferenceDiagonal / c.drawing().canvas.diagonal();
    double total = 0.0;
    for (const auto& path : paths) {
        const auto pts = c.path_points(path);
        double turning = 0.0;
        double length = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            length += geo::distance(pts[i - 1], pts[i]);
            if (i + 1 < pts.size()) {
                const Point in = pts[i] - pts[i - 1];
                const Point out = pts[i + 1] - pts[i];
                turning += std::abs(std::atan2(geo::cross(in, out), geo::dot(in, out)));
            }
        }
        total += turning / (length * to_reference);
    }
    const double r = total / static_cast<double>(paths.size());
    return make(id, r, 1.0 / (1.0 + 100.0 * r));
}

MetricResult shortest_path_length(Context& c) {
    constexpr auto id = MetricId::shortest_path_length;
    double total = 0.0;
    std::size_t counted = 0;
    for (const auto& path : c.sampled_paths()) {
        const double straight = geo::distance(c.drawing().positions[path.front()], c.drawing().positions[path.back()]);
        if (straight <= 0.0) continue;
        const auto pts = c.path_points(path);
        double length = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) length += geo::distance(pts[i - 1], pts[i]);
        total += length / straight;
        ++counted;
    }
    if (counted == 0) return MetricResult::undefined(id);
    const double r = total / static_cast<double>(counted);
    return make(id, r, 1.0 / r);
}

MetricResult whitespace_to_ink_ratio(Context& c) {
    constexpr auto id = MetricId::whitespace_to_ink_ratio;
    const auto& d = c.drawing();
    double ink = static_cast<double>(c.n()) * std::numbers::pi * d.node_radius * d.node_radius;
    for (double len : c.lengths()) ink += d.stroke_width * len;
    const double r = 1.0 - ink / d.canvas.area();
    return make(id, r, r);
}

std::vector<double> face_areas(Context& c) {
    std::vector<double> a;
    for (const auto& f : c.bounded_faces()) a.push_back(f.area);
    return a;
}

MetricResult face_area(Context& c) {
    constexpr auto id = MetricId::face_area;
    const auto a = face_areas(c);
    if (a.empty()) return MetricResult::undefined(id);
    const double r = mean(a) / c.drawing().canvas.area();
    return make(id, r, 4.0 * r * (1.0 - r));
}

MetricResult uniform_faces(Context& c) {
    constexpr auto id = MetricId::uniform_faces;
    const auto a = face_areas(c);
    if (a.size() < 2) return MetricResult::undefined(id);
    const double cv = coefficient_of_variation(a);
    return make(id, cv, 1.0 / (1.0 + cv));
}

MetricResult dispatch(Context& c, MetricId id) {
    switch (id) {
        case MetricId::angular_resolution: return angular_resolution(c);
        case MetricId::area: return area(c);
        case MetricId::aspect_ratio: return aspect_ratio(c);
        case MetricId::cluster_similar_nodes: return cluster_similar_nodes(c);
        case MetricId::convex_faces: return convex_faces(c);
        case MetricId::consistent_flow_direction: return consistent_flow_direction(c);
        case MetricId::crossing_angle: return crossing_angle(c);
        case MetricId::degree_of_edge_bends: return degree_of_edge_bends(c);
        case MetricId::difference_between_angles: return difference_between_angles(c);
        case MetricId::distribute_nodes_evenly: return distribute_nodes_evenly(c);
        case MetricId::edge_orthogonality: return edge_orthogonality(c);
        case MetricId::global_symmetry: return global_symmetry(c);
        case MetricId::keep_nodes_apart_from_edges: return keep_nodes_apart_from_edges(c);
        case MetricId::local_symmetry: return local_symmetry(c);
        case MetricId::maximum_bends: return maximum_bends(c);
        case MetricId::maximum_edge_length: return maximum_edge_length(c);
        case MetricId::node_orthogonality: return node_orthogonality(c);
        case MetricId::nodes_should_not_overlap: return nodes_should_not_overlap(c);
        case MetricId::number_of_bends: return number_of_bends(c);
        case MetricId::number_of_branches: return number_of_branches(c);
        case MetricId::number_of_edge_crossings: return number_of_edge_crossings(c);
        case MetricId::path_bendiness: return path_bendiness(c);
        case MetricId::shortest_path_length: return shortest_path_length(c);
        case MetricId::crossing_angle_sd: return crossing_angle_sd(c);
        case MetricId::angular_resolution_sd: return angular_resolution_sd(c);
        case MetricId::total_edge_length: return total_edge_length(c);
        case MetricId::uniform_edge_bends: return uniform_edge_bends(c);
        case MetricId::uniform_edge_lengths: return uniform_edge_lengths(c);
        case MetricId::whitespace_to_ink_ratio: return whitespace_to_ink_ratio(c);
        case MetricId::face_area: return face_area(c);
        case MetricId::uniform_faces: return uniform_faces(c);
    }
    throw std::invalid_argument("unknown metric id");
}

}  // namespace

MetricResult evaluate(const Drawing& d, MetricId id) {
    Context c(d);
    return dispatch(c, id);
}

MetricResult evaluate(const Drawing& d, std::string_view id) { return evaluate(d, metric_id_from_string(id)); }

std::vector<MetricResult> evaluate_many(const Drawing& d, std::span<const MetricId> ids) {
    Context c(d);
    std::vector<MetricResult> out;
    out.reserve(ids.size());
    for (MetricId id : ids) out.push_back(dispatch(c, id));
    return out;
}

MetricVector evaluate_all(const Drawing& d) {
    std::vector<MetricId> ids;
    for (const auto& e : catalog()) ids.push_back(e.id);
    MetricVector v;
    v.results = evaluate_many(d, ids);
    v.drawing_hash = gaw::drawing_hash(d);
    return v;
}

std::string_view explain(MetricId id) {
    switch (id) {
        case MetricId::angular_resolution:
            return "raw = minimum angle (degrees) between circularly adjacent incident edge tangents over all nodes of "
                   "degree >= 2; score = raw / ideal, ideal = min over those nodes of 360/degree. Undefined without a "
                   "node of degree >= 2.";
        case MetricId::area:
            return "raw = area of the bounding box of all ink (node discs and stroked edges); score = 1 - raw / canvas "
                   "area, clamped to [0,1].";
        case MetricId::aspect_ratio:
            return "raw = ink bounding box width / height; score = min(raw, 1/raw).";
        case MetricId::cluster_similar_nodes:
            return "raw = Spearman rank correlation between graph (hop) distance and Euclidean distance over all "
                   "connected node pairs; score = (raw + 1) / 2. Undefined when either ranking is constant.";
        case MetricId::convex_faces:
            return "raw = fraction of bounded faces that are convex (1 degree reflex tolerance); score = raw. "
                   "Undefined without a bounded face.";
        case MetricId::consistent_flow_direction:
            return "raw = axial mean resultant length of edge chord directions (angles doubled, edges are "
                   "undirected); score = raw.";
        case MetricId::crossing_angle:
            return "raw = mean acute crossing angle (degrees); score = raw / 90. Undefined without crossings.";
        case MetricId::degree_of_edge_bends:
            return "raw = mean |curvature| over edges; score = 1 - raw.";
        case MetricId::difference_between_angles:
            return "raw = 90 - minimum crossing angle (difference between smallest and optimal crossing angle); "
                   "score = 1 - raw / 90. Undefined without crossings.";
        case MetricId::distribute_nodes_evenly:
            return "canvas split into ceil(sqrt(n)) x ceil(sqrt(n)) cells; raw = entropy of per-cell node counts "
                   "divided by log(n); score = raw. Undefined for n < 2.";
        case MetricId::edge_orthogonality:
            return "raw = mean angular deviation (degrees, 0..45) of edge chords from the nearest axis; "
                   "score = 1 - raw / 45.";
        case MetricId::global_symmetry:
            return "raw = max over 16 mirror axes through the node centroid (angles k*180/16) of the fraction of "
                   "nodes whose mirror image lies within 2*node_radius of a distinct node (greedy nearest bijective "
                   "matching); score = raw.";
        case MetricId::keep_nodes_apart_from_edges:
            return "raw = minimum distance from a node center to any non-incident flattened edge; "
                   "score = clamp(raw / (4*node_radius), 0, 1).";
        case MetricId::local_symmetry:
            return "per node of degree >= 2: best mirror axis through the node, scored as the fraction of incident "
                   "tangent directions whose reflection matches another within 10 degrees; raw = mean over nodes; "
                   "score = raw.";
        case MetricId::maximum_bends:
            return "raw = maximum |curvature| over edges; score = 1 - raw.";
        case MetricId::maximum_edge_length:
            return "raw = longest flattened edge length; score = 1 / (1 + raw / canvas diagonal).";
        case MetricId::node_orthogonality:
            return "raw = fraction of nodes within node_radius of the nearest point of a virtual grid with pitch "
                   "canvas width / 16; score = raw.";
        case MetricId::nodes_should_not_overlap:
            return "raw = number of node pairs whose centers are closer than 2*node_radius; "
                   "score = 1 - raw / C(n,2).";
        case MetricId::number_of_bends:
            return "a bend is an edge with |curvature| > 0.05; raw = number of bends; score = 1 - raw / m.";
        case MetricId::number_of_branches:
            return "raw = mean over sampled connected node pairs of the degree surplus max(deg - 2, 0) summed over "
                   "the interior nodes of the graph-shortest path; score = 1 / (1 + raw).";
        case MetricId::number_of_edge_crossings:
            return "raw = number of transversal intersection points between non-adjacent edges; score = 1 - raw / "
                   "c_max, c_max = m(m-1)/2 minus adjacent edge pairs, clamped to [0,1].";
        case MetricId::path_bendiness:
            return "raw = mean over sampled connected pairs of the cumulative turning angle (radians) along the drawn "
                   "shortest path divided by its length, length measured on a 1000 x 1000 reference canvas; "
                   "score = 1 / (1 + 100*raw).";
        case MetricId::shortest_path_length:
            return "raw = mean over sampled connected pairs of drawn shortest-path length / straight-line distance "
                   "between its end nodes; score = 1 / raw, clamped to [0,1].";
        case MetricId::crossing_angle_sd:
            return "raw = standard deviation of crossing angles (degrees); score = 1 / (1 + raw / 30). Undefined "
                   "with fewer than 2 crossings.";
        case MetricId::angular_resolution_sd:
            return "raw = standard deviation of all incident angles (degrees) at nodes of degree >= 2; "
                   "score = 1 / (1 + raw / 36).";
        case MetricId::total_edge_length:
            return "raw = sum of flattened edge lengths; score = 1 / (1 + raw / (m * canvas diagonal / 4)).";
        case MetricId::uniform_edge_bends:
            return "raw = standard deviation of |curvature| over edges; score = 1 / (1 + 10*raw).";
        case MetricId::uniform_edge_lengths:
            return "raw = coefficient of variation of flattened edge lengths; score = 1 / (1 + raw).";
        case MetricId::whitespace_to_ink_ratio:
            return "ink = sum(stroke_width * edge length) + n * pi * node_radius^2 (overlap ignored); raw = 1 - "
                   "ink / canvas area; score = raw, clamped to [0,1].";
        case MetricId::face_area:
            return "raw = mean bounded face area / canvas area; score = 4*raw*(1 - raw), peaking at medium faces. "
                   "Undefined without a bounded face.";
        case MetricId::uniform_faces:
            return "raw = coefficient of variation of bounded face areas; score = 1 / (1 + raw). Undefined with "
                   "fewer than 2 bounded faces.";
    }
    throw std::invalid_argument("unknown metric id");
}

std::string_view explain(std::string_view id) { return explain(metric_id_from_string(id)); }

Json to_json(const MetricVector& v) {
    Json results = Json::object();
    for (const auto& r : v.results) results[std::string(to_string(r.id))] = r;
    return Json{{"drawing_hash", v.drawing_hash}, {"results", results}};
}

MetricVector metric_vector_from_json(const Json& j) {
    MetricVector v;
    v.drawing_hash = j.at("drawing_hash").get<std::string>();
    for (const auto& entry : catalog()) {
        const auto& r = j.at("results").at(std::string(to_string(entry.id)));
        MetricResult m;
        m.id = entry.id;
        m.defined = r.at("defined").get<bool>();
        if (m.defined) {
            m.raw = r.at("raw").get<double>();
            m.score = r.at("score").get<double>();
        }
        v.results.push_back(m);
    }
    return v;
}

std::string render_text(const MetricVector& v) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-28s %12s %8s\n", "metric", "raw", "score");
    os << line;
    for (const auto& r : v.results) {
        if (r.defined) {
            std::snprintf(line, sizeof line, "%-28s %12.4f %8.4f\n", std::string(to_string(r.id)).c_str(), r.raw,
                          r.score);
        } else {
            std::snprintf(line, sizeof line, "%-28s %12s %8s\n", std::string(to_string(r.id)).c_str(), "-", "-");
        }
        os << line;
    }
    return os.str();
}

}  // namespace gaw::metrics
