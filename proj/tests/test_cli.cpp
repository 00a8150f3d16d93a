#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdio>
#include <fstream>

#include "gaw/json_io.hpp"
#include "gaw/rgt.hpp"
#include "support.hpp"

using namespace gaw;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status = 0;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(GAW_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("popen failed");
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path temp_dir(const std::string& name) {
    auto p = fs::temp_directory_path() / ("gaw-cli-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, GenerateIsDeterministic) {
    const auto a = temp_dir("gen-a"), b = temp_dir("gen-b");
    ASSERT_EQ(run("generate --seed 7 --count 12 --svg --out " + a.string()).status, 0);
    ASSERT_EQ(run("generate --seed 7 --count 12 --svg --out " + b.string()).status, 0);
    std::size_t json = 0;
    for (const auto& f : fs::directory_iterator(a)) {
        if (f.path().extension() == ".json") {
            ++json;
            const auto d = drawing_from_json(read_json_file(f.path()));
            EXPECT_GE(d.graph.edge_count(), 5u);
            EXPECT_LE(d.graph.edge_count(), 69u);
        }
        EXPECT_EQ(read_text_file(f.path()), read_text_file(b / f.path().filename())) << f.path();
    }
    EXPECT_EQ(json, 12u);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Cli, MetricsOnTriangle) {
    const auto dir = temp_dir("metrics");
    write_text_file(dir / "t.json", Json(fixtures::triangle()).dump());
    const auto text = run("metrics " + (dir / "t.json").string());
    ASSERT_EQ(text.status, 0) << text.out;
    EXPECT_EQ(lines(text.out), 32u);  // header + 31
    const auto j = run("metrics --json " + (dir / "t.json").string());
    ASSERT_EQ(j.status, 0);
    EXPECT_EQ(Json::parse(j.out)["results"].size(), 31u);
    fs::remove_all(dir);
}

TEST(Cli, OptimizeK4RemovesCrossings) {
    const auto dir = temp_dir("opt");
    write_text_file(dir / "k4.json", Json(fixtures::complete_graph(4)).dump());
    write_text_file(dir / "w.json", R"({"weights": {"number_of_edge_crossings": 1}})");
    const auto r = run("optimize --graph " + (dir / "k4.json").string() + " --weights " + (dir / "w.json").string() +
                       " --seed 3 --iterations 10000 --out " + (dir / "best.json").string() + " --svg " +
                       (dir / "best.svg").string());
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_NE(r.out.find("objective 1.000000"), std::string::npos) << r.out;
    const auto best = drawing_from_json(read_json_file(dir / "best.json"));
    EXPECT_EQ(best.graph.edge_count(), 6u);
    EXPECT_TRUE(fs::exists(dir / "best.svg"));
    fs::remove_all(dir);
}

TEST(Cli, RenderAndAnalyze) {
    const auto dir = temp_dir("analyze");
    write_text_file(dir / "t.json", Json(fixtures::triangle()).dump());
    const auto svg = run("render " + (dir / "t.json").string());
    ASSERT_EQ(svg.status, 0);
    EXPECT_EQ(svg.out.rfind("<svg", 0), 0u);

    const auto st = rgt::create_study("s", {rgt::drawing_element(fixtures::triangle()),
                                            rgt::drawing_element(fixtures::triangle(200.0)),
                                            rgt::drawing_element(fixtures::path_drawing())});
    auto s = rgt::Session::start(st, "p", 1);
    const auto t = s.next_triad();
    const auto c = s.record_construct(t->id, {"crossed", "clean", {}, {}});
    write_text_file(dir / "s.json", rgt::session_export_text(s));
    write_text_file(dir / "w.json",
                    Json{{"primary_analyst", "primary"},
                         {"tags", {{{"construct", c.id}, {"analyst", "primary"}, {"category", "composition"}}}},
                         {"mappings", {{{"construct", c.id}, {"analyst", "primary"}, {"aesthetic", "number_of_edge_crossings"}}}}}
                        .dump());
    const auto r = run("analyze G=" + (dir / "s.json").string() + " --workbook " + (dir / "w.json").string() + " --json");
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = Json::parse(r.out);
    for (const auto& row : j["usage"]["rows"]) {
        if (row["key"] == "number_of_edge_crossings") {
            EXPECT_EQ(row["counts"]["G"], 1);
        }
    }
    fs::remove_all(dir);
}

TEST(Cli, FailuresExitNonzero) {
    const auto missing = run("metrics /nonexistent/file.json");
    EXPECT_NE(missing.status, 0);
    EXPECT_NE(missing.out.find("gaw:"), std::string::npos);
    EXPECT_NE(run("generate --seed 1 --count 3 --min-nodes 3 --max-nodes 3 --out /tmp/gaw-never").status, 0);
    EXPECT_NE(run("bogus").status, 0);
    EXPECT_NE(run("analyze nolabel").status, 0);
}
