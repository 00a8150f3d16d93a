#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "gaw/error.hpp"
#include "gaw/json_io.hpp"
#include "gaw/model.hpp"
#include "support.hpp"

using namespace gaw;

TEST(Catalog, HasAllTableRows) {
    const auto& cat = catalog();
    EXPECT_EQ(cat.size(), 31u);
    EXPECT_EQ(std::count_if(cat.begin(), cat.end(), [](const auto& e) { return e.evaluated; }), 13);
    EXPECT_EQ(std::count_if(cat.begin(), cat.end(), [](const auto& e) { return e.novel; }), 2);
    EXPECT_EQ(std::count_if(cat.begin(), cat.end(),
                            [](const auto& e) { return e.category == AestheticCategory::visual_mapping; }),
              4);
}

TEST(Catalog, VisualMappingRowsAreTheHighlightedOnes) {
    std::set<MetricId> vm;
    for (const auto& e : catalog())
        if (e.category == AestheticCategory::visual_mapping) vm.insert(e.id);
    EXPECT_EQ(vm, (std::set<MetricId>{MetricId::degree_of_edge_bends, MetricId::edge_orthogonality,
                                      MetricId::uniform_edge_bends, MetricId::uniform_edge_lengths}));
    EXPECT_EQ(catalog_entry(MetricId::degree_of_edge_bends).category, AestheticCategory::visual_mapping);
}

TEST(Catalog, NovelEntriesAreTheFaceAesthetics) {
    EXPECT_TRUE(catalog_entry(MetricId::face_area).novel);
    EXPECT_TRUE(catalog_entry(MetricId::uniform_faces).novel);
    EXPECT_FALSE(catalog_entry(MetricId::face_area).evaluated);
}

TEST(Catalog, StableAcrossCallsAndIdsRoundTrip) {
    const auto& a = catalog();
    const auto& b = catalog();
    EXPECT_EQ(&a, &b);
    std::set<std::string_view> names;
    for (const auto& e : a) {
        const auto name = to_string(e.id);
        EXPECT_TRUE(names.insert(name).second);
        EXPECT_EQ(parse_metric_id(name), e.id);
        for (char ch : name) EXPECT_TRUE((ch >= 'a' && ch <= 'z') || ch == '_') << name;
    }
    EXPECT_FALSE(parse_metric_id("edge_curve").has_value());
    EXPECT_THROW(metric_id_from_string("nope"), std::invalid_argument);
}

TEST(ValidateDrawing, ValidTriangle) { EXPECT_TRUE(validate_drawing(fixtures::triangle()).empty()); }

TEST(ValidateDrawing, NodeOutsideCanvas) {
    auto d = make_drawing(Graph::with_nodes(2, {{0, 1}}), {{-1, 5}, {50, 50}}, {}, Canvas{100, 100});
    const auto v = validate_drawing(d);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("node 0"), std::string::npos);
}

TEST(ValidateDrawing, CurvatureOutOfRange) {
    auto d = fixtures::triangle();
    d.curvatures[0] = 1.5;
    const auto v = validate_drawing(d);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("edge 0"), std::string::npos);
}

TEST(ValidateDrawing, GraphInvariants) {
    auto d = fixtures::triangle();
    d.graph.edges.push_back({1, 0});  // duplicate of {0,1}
    d.graph.edges.push_back({2, 2});  // self-loop
    d.graph.edges.push_back({0, 7});  // bad endpoint
    d.curvatures.resize(d.graph.edges.size(), 0.0);
    EXPECT_EQ(validate_drawing(d).size(), 3u);
}

TEST(ValidateDrawing, SizesAndRadii) {
    auto d = fixtures::triangle();
    d.node_radius = 0;
    d.stroke_width = -1;
    d.positions.pop_back();
    EXPECT_EQ(validate_drawing(d).size(), 3u);
}

TEST(JsonFormat, FieldNamesMatchTypes) {
    const Json j = fixtures::triangle();
    for (const char* k : {"graph", "positions", "curvatures", "canvas", "node_radius", "stroke_width"})
        EXPECT_TRUE(j.contains(k)) << k;
    EXPECT_TRUE(j["graph"].contains("nodes"));
    EXPECT_TRUE(j["graph"].contains("edges"));
    EXPECT_EQ(j["graph"]["edges"][0], Json::parse("[0,1]"));
}

TEST(JsonFormat, RoundTripPreservesRandomDrawings) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        auto d = fixtures::random_straight_drawing(rng, 2 + i % 9, 12);
        std::uniform_real_distribution<double> k(-1, 1);
        for (auto& c : d.curvatures) c = k(rng);
        const auto back = drawing_from_json(Json::parse(Json(d).dump()));
        EXPECT_EQ(back, d);
        EXPECT_EQ(drawing_hash(back), drawing_hash(d));
    }
}

TEST(JsonFormat, RejectsInvalidDrawing) {
    auto j = Json(fixtures::triangle());
    j["curvatures"][1] = 3.0;
    try {
        drawing_from_json(j);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::malformed_payload);
    }
    EXPECT_THROW(drawing_from_json(Json::parse(R"({"graph": 3})")), Error);
}

TEST(DrawingHash, SensitiveToContent) {
    auto a = fixtures::triangle();
    auto b = a;
    b.positions[0].x += 1e-9;
    EXPECT_NE(drawing_hash(a), drawing_hash(b));
    EXPECT_EQ(drawing_hash(a).size(), 16u);
}
