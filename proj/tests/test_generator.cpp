#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "gaw/error.hpp"
#include "gaw/generator.hpp"
#include "gaw/json_io.hpp"
#include "gaw/svg.hpp"

using namespace gaw;
using namespace gaw::gen;

namespace {

GeneratorParams with_seed(std::uint64_t s) {
    GeneratorParams p;
    p.seed = s;
    return p;
}

/// One-sample Kolmogorov-Smirnov statistic against U(lo, hi).
double ks_uniform(std::vector<double> xs, double lo, double hi) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = (xs[i] - lo) / (hi - lo);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

std::size_t count_substr(const std::string& s, const std::string& what) {
    std::size_t c = 0;
    for (auto pos = s.find(what); pos != std::string::npos; pos = s.find(what, pos + 1)) ++c;
    return c;
}

}  // namespace

TEST(GenerateGraph, ThousandSeedsStayInBounds) {
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto p = with_seed(s);
        const auto g = generate_graph(p);
        EXPECT_GE(g.edge_count(), 5u);
        EXPECT_LE(g.edge_count(), 69u);
        EXPECT_GE(g.node_count(), 4u);
        EXPECT_LE(g.node_count(), 40u);
        const auto d = random_drawing(g, p);
        EXPECT_TRUE(validate_drawing(d).empty()) << s;
        for (double k : d.curvatures) EXPECT_LE(std::abs(k), 0.8);
    }
}

TEST(GenerateGraph, SameSeedSameBytes) {
    for (std::uint64_t s : {0ULL, 1ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
        const auto p = with_seed(s);
        const auto a = random_drawing(generate_graph(p), p);
        const auto b = random_drawing(generate_graph(p), p);
        EXPECT_EQ(canonical_text(a), canonical_text(b));
        EXPECT_EQ(render_svg(a), render_svg(b));
    }
    EXPECT_NE(canonical_text(random_drawing(generate_graph(with_seed(1)), with_seed(1))),
              canonical_text(random_drawing(generate_graph(with_seed(2)), with_seed(2))));
}

TEST(GenerateGraph, EdgeSubsetsAreUniform) {
    // n = 5, m = 3: C(10, 3) = 120 equally likely edge sets.
    GeneratorParams p;
    p.min_nodes = p.max_nodes = 5;
    p.min_edges = p.max_edges = 3;
    constexpr int kDraws = 100000;
    std::map<std::vector<std::pair<NodeId, NodeId>>, int> subsets;
    std::map<std::pair<NodeId, NodeId>, int> pairs;
    for (int i = 0; i < kDraws; ++i) {
        p.seed = static_cast<std::uint64_t>(i);
        const auto g = generate_graph(p);
        ASSERT_EQ(g.node_count(), 5u);
        ASSERT_EQ(g.edge_count(), 3u);
        std::vector<std::pair<NodeId, NodeId>> key;
        for (const auto& e : g.edges) {
            key.push_back(e.key());
            ++pairs[e.key()];
        }
        ++subsets[key];
    }
    ASSERT_EQ(subsets.size(), 120u);
    const double expected = kDraws / 120.0;
    double chi2 = 0.0;
    for (const auto& [k, c] : subsets) chi2 += (c - expected) * (c - expected) / expected;
    // Chi-square, 119 degrees of freedom, upper 0.1% point.
    EXPECT_LT(chi2, 168.0);

    ASSERT_EQ(pairs.size(), 10u);
    const double pe = 0.3;  // each pair appears in 3 of 10 slots
    const double sigma = std::sqrt(kDraws * pe * (1 - pe));
    for (const auto& [k, c] : pairs) EXPECT_LT(std::abs(c - kDraws * pe), 3 * sigma);
}

TEST(GenerateGraph, EdgeCountIsUniformOverItsRange) {
    GeneratorParams p;
    p.min_nodes = p.max_nodes = 10;
    p.min_edges = 5;
    p.max_edges = 14;
    std::map<std::size_t, int> counts;
    constexpr int kDraws = 20000;
    for (int i = 0; i < kDraws; ++i) {
        p.seed = static_cast<std::uint64_t>(i);
        ++counts[generate_graph(p).edge_count()];
    }
    ASSERT_EQ(counts.size(), 10u);
    double chi2 = 0.0;
    for (const auto& [m, c] : counts) chi2 += (c - kDraws / 10.0) * (c - kDraws / 10.0) / (kDraws / 10.0);
    EXPECT_LT(chi2, 27.88);  // 9 dof, 0.1%
}

TEST(RandomDrawing, PositionsAndCurvaturesAreUniform) {
    GeneratorParams p;
    p.min_nodes = p.max_nodes = 40;
    std::vector<double> xs, ys, ks;
    for (std::uint64_t s = 0; s < 2500; ++s) {
        p.seed = s;
        const auto d = random_drawing(generate_graph(p), p);
        for (Point q : d.positions) {
            xs.push_back(q.x);
            ys.push_back(q.y);
        }
        ks.insert(ks.end(), d.curvatures.begin(), d.curvatures.end());
    }
    ASSERT_EQ(xs.size(), 100000u);
    const double crit = 1.628 / std::sqrt(static_cast<double>(xs.size()));  // alpha = 0.01
    EXPECT_LT(ks_uniform(xs, 0, 1000), crit);
    EXPECT_LT(ks_uniform(ys, 0, 1000), crit);
    EXPECT_LT(ks_uniform(ks, -0.8, 0.8), 1.628 / std::sqrt(static_cast<double>(ks.size())));
}

TEST(RandomDrawing, ZeroCurvatureGivesStraightEdges) {
    auto p = with_seed(9);
    p.max_curvature = 0.0;
    const auto d = random_drawing(generate_graph(p), p);
    for (double k : d.curvatures) EXPECT_EQ(k, 0.0);
}

TEST(ElementSet, DefaultsSpanTheEdgeRange) {
    for (std::uint64_t s : {0ULL, 7ULL, 123ULL}) {
        const auto set = generate_element_set(with_seed(s), 12);
        ASSERT_EQ(set.size(), 12u);
        std::size_t lo = 1000, hi = 0;
        for (const auto& d : set) {
            lo = std::min(lo, d.graph.edge_count());
            hi = std::max(hi, d.graph.edge_count());
            EXPECT_TRUE(validate_drawing(d).empty());
        }
        EXPECT_GE(hi - lo, (69u - 5u) / 2);
    }
}

TEST(ElementSet, SingleElementAndDeterminism) {
    EXPECT_EQ(generate_element_set(with_seed(3), 1).size(), 1u);
    const auto a = generate_element_set(with_seed(5));
    const auto b = generate_element_set(with_seed(5));
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(drawing_hash(a[i]), drawing_hash(b[i]));
    EXPECT_THROW(generate_element_set(with_seed(5), 0), Error);
}

TEST(CheckParams, RejectsInfeasibleRanges) {
    auto expect_infeasible = [](GeneratorParams p) {
        try {
            generate_graph(p);
            ADD_FAILURE() << "accepted";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), Errc::infeasible);
        }
    };
    GeneratorParams p;
    p.max_nodes = 3;
    p.min_nodes = 2;
    expect_infeasible(p);  // 3 nodes hold 3 edges < 5
    p = {};
    p.max_edges = 4;
    expect_infeasible(p);
    p = {};
    p.min_edges = 0;
    expect_infeasible(p);
    p = {};
    p.max_curvature = 1.5;
    expect_infeasible(p);
}

TEST(Svg, BlackNodesAndQuadraticEdges) {
    const auto p = with_seed(11);
    const auto d = random_drawing(generate_graph(p), p);
    const auto svg = render_svg(d);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_EQ(count_substr(svg, "<circle"), d.graph.node_count());
    EXPECT_EQ(count_substr(svg, "<path"), d.graph.edge_count());
    EXPECT_EQ(count_substr(svg, " Q "), d.graph.edge_count());
    EXPECT_EQ(svg.find("-0.000"), std::string::npos);
}
