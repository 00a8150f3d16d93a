// gaw: command line front end.
//
//   gaw generate --seed 7 --count 12 --out elements/ [--svg]
//   gaw metrics drawing.json [--json]
//   gaw optimize --graph k4.json --weights w.json [--seed 1] [--iterations 10000]
//                [--out best.json] [--trace trace.json] [--svg best.svg]
//   gaw render drawing.json [-o out.svg]
//   gaw analyze A=s1.json,s2.json B=s3.json [--workbook tags.json] [--json]
//   gaw serve [--port 8080] [--host 127.0.0.1] [--data-dir DIR]

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "gaw/analysis.hpp"
#include "gaw/error.hpp"
#include "gaw/generator.hpp"
#include "gaw/metrics.hpp"
#include "gaw/optimizer.hpp"
#include "gaw/service.hpp"
#include "gaw/svg.hpp"

namespace fs = std::filesystem;
using namespace gaw;

namespace {

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        write_text_file(path, text);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph aesthetics workbench"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "write random study elements as drawing files");
    gen::GeneratorParams gp;
    std::size_t count = 12;
    std::string gen_out = ".";
    bool gen_svg = false;
    generate->add_option("--seed", gp.seed, "generator seed")->required();
    generate->add_option("--count", count, "number of elements");
    generate->add_option("--out", gen_out, "output directory");
    generate->add_option("--min-nodes", gp.min_nodes);
    generate->add_option("--max-nodes", gp.max_nodes);
    generate->add_option("--min-edges", gp.min_edges);
    generate->add_option("--max-edges", gp.max_edges);
    generate->add_flag("--svg", gen_svg, "also write an SVG per element");

    // metrics
    auto* metrics_cmd = app.add_subcommand("metrics", "evaluate all 31 metrics on a drawing");
    std::string metrics_in;
    bool metrics_json = false;
    metrics_cmd->add_option("drawing", metrics_in, "drawing file")->required();
    metrics_cmd->add_flag("--json", metrics_json);

    // optimize
    auto* optimize = app.add_subcommand("optimize", "anneal a layout for a weighted objective");
    std::string graph_in, weights_in, opt_out, trace_out, opt_svg;
    opt::AnnealConfig ac;
    bool opt_greedy = false;
    optimize->add_option("--graph", graph_in, "graph or drawing file (a drawing is used as the start)")->required();
    optimize->add_option("--weights", weights_in, "objective file {\"weights\": {...}}");
    optimize->add_option("--seed", ac.seed);
    optimize->add_option("--iterations", ac.max_iterations);
    optimize->add_option("--temperature", ac.initial_temperature);
    optimize->add_option("--cooling", ac.cooling_factor);
    optimize->add_flag("--greedy", opt_greedy, "hill climbing from the given drawing");
    optimize->add_option("--out", opt_out, "best drawing file");
    optimize->add_option("--trace", trace_out, "trace file");
    optimize->add_option("--svg", opt_svg, "SVG of the best drawing");

    // render
    auto* render = app.add_subcommand("render", "drawing to SVG");
    std::string render_in, render_out;
    render->add_option("drawing", render_in)->required();
    render->add_option("-o,--out", render_out);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "usage and reproducibility reports from session exports");
    std::vector<std::string> groups;
    std::string workbook_in;
    bool analyze_json = false;
    analyze->add_option("studies", groups, "LABEL=export.json[,export.json...]")->required();
    analyze->add_option("--workbook", workbook_in, "tags and mappings file");
    analyze->add_flag("--json", analyze_json);

    // serve
    auto* serve = app.add_subcommand("serve", "run the HTTP service");
    service::ServiceConfig sc;
    std::string data_dir;
    serve->add_option("--port", sc.port);
    serve->add_option("--host", sc.host);
    serve->add_option("--data-dir", data_dir, "defaults to $GAW_DATA_DIR, then ./gaw-data");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            const auto drawings = gen::generate_element_set(gp, count);
            fs::create_directories(gen_out);
            for (std::size_t i = 0; i < drawings.size(); ++i) {
                char name[32];
                std::snprintf(name, sizeof name, "element_%02zu", i + 1);
                write_text_file(fs::path(gen_out) / (std::string(name) + ".json"), Json(drawings[i]).dump(2) + "\n");
                if (gen_svg) write_text_file(fs::path(gen_out) / (std::string(name) + ".svg"), render_svg(drawings[i]));
            }
            std::printf("wrote %zu elements to %s\n", drawings.size(), gen_out.c_str());
        } else if (*metrics_cmd) {
            const auto v = metrics::evaluate_all(drawing_from_json(read_json_file(metrics_in)));
            std::cout << (metrics_json ? metrics::to_json(v).dump(2) + "\n" : metrics::render_text(v));
        } else if (*optimize) {
            const auto in = read_json_file(graph_in);
            const auto objective = weights_in.empty() ? opt::default_objective()
                                                      : opt::objective_from_json(read_json_file(weights_in));
            opt::SearchResult r;
            if (in.contains("positions")) {
                const auto start = drawing_from_json(in);
                r = opt_greedy ? opt::greedy_refine(start, objective, ac) : opt::anneal(start, objective, ac);
            } else {
                if (opt_greedy) throw Error(Errc::invalid_argument, "--greedy needs a drawing to start from");
                r = opt::optimize_layout(graph_from_json(in), objective, ac);
            }
            if (!opt_out.empty()) write_text_file(opt_out, Json(r.drawing).dump(2) + "\n");
            if (!trace_out.empty()) {
                write_text_file(trace_out, Json{{"best", r.best_trace}, {"current", r.current_trace}}.dump() + "\n");
            }
            if (!opt_svg.empty()) write_text_file(opt_svg, render_svg(r.drawing));
            std::printf("objective %.6f after %zu iterations\n", r.value, r.accepted.size());
            std::cout << metrics::render_text(metrics::evaluate_all(r.drawing));
        } else if (*render) {
            write_or_print(render_out, render_svg(drawing_from_json(read_json_file(render_in))));
        } else if (*analyze) {
            analysis::Workbook w = workbook_in.empty() ? analysis::Workbook{}
                                                       : analysis::Workbook::from_json(read_json_file(workbook_in));
            for (const auto& g : groups) {
                const auto eq = g.find('=');
                if (eq == std::string::npos || eq == 0) {
                    throw Error(Errc::invalid_argument, "expected LABEL=file[,file...], got '" + g + "'");
                }
                const auto label = g.substr(0, eq);
                w.add_study(label);
                for (const auto& f : split(g.substr(eq + 1), ',')) {
                    if (!f.empty()) w.add_session(label, rgt::import_session(read_json_file(f)));
                }
            }
            const auto u = analysis::usage_report(w);
            const auto r = analysis::reproducibility_report(u);
            if (analyze_json) {
                std::cout << Json{{"usage", analysis::to_json(u)},
                                  {"reproducibility", analysis::to_json(r)},
                                  {"categories", analysis::to_json(analysis::category_distribution(w))}}
                                 .dump(2)
                          << "\n";
            } else {
                std::cout << analysis::render_usage_table(u) << "\n" << analysis::render_reproducibility(r);
            }
        } else if (*serve) {
            sc.data_dir = data_dir.empty() ? service::data_dir_from_env() : fs::path(data_dir);
            service::serve(sc);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "gaw: %s: %s\n", std::string(to_string(e.code())).c_str(), e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "gaw: %s\n", e.what());
        return 1;
    }
    return 0;
}
