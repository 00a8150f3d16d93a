#include "gaw/service.hpp"

#include <httplib.h>

#include <cstdlib>
#include <functional>

#include "gaw/error.hpp"
#include "gaw/generator.hpp"
#include "gaw/metrics.hpp"
#include "gaw/optimizer.hpp"
#include "gaw/svg.hpp"

namespace gaw::service {

namespace fs = std::filesystem;

Json ApiError::to_json() const {
    Json e{{"code", code}, {"message", message}};
    if (!detail.is_null()) e["detail"] = detail;
    return Json{{"error", e}};
}

const std::vector<std::string>& api_error_codes() {
    static const std::vector<std::string> codes{
        "invalid_argument",    "malformed_payload", "not_found", "session_finished", "invalid_construct",
        "precondition_failed", "infeasible",        "degenerate_geometry", "conflict", "io_error",
        "internal"};
    return codes;
}

int http_status(Errc code) {
    switch (code) {
        case Errc::invalid_argument:
        case Errc::malformed_payload: return 400;
        case Errc::not_found: return 404;
        case Errc::session_finished:
        case Errc::precondition_failed:
        case Errc::conflict: return 409;
        case Errc::invalid_construct:
        case Errc::infeasible:
        case Errc::degenerate_geometry: return 422;
        case Errc::io_error: return 500;
    }
    return 500;
}

// Patterns are shared between registration and the route audit.
namespace p {
constexpr const char* catalog = "/api/catalog";
constexpr const char* metrics = "/api/metrics";
constexpr const char* evaluate = "/api/metrics/evaluate";
constexpr const char* optimize = "/api/optimize";
constexpr const char* studies = "/api/studies";
constexpr const char* study = R"(/api/studies/([0-9a-f]+))";
constexpr const char* study_svg = R"(/api/studies/([0-9a-f]+)/elements/([0-9a-f]+)/svg)";
constexpr const char* study_metrics = R"(/api/studies/([0-9a-f]+)/elements/([0-9a-f]+)/metrics)";
constexpr const char* sessions = "/api/sessions";
constexpr const char* session = R"(/api/sessions/([0-9a-f]+))";
constexpr const char* triad = R"(/api/sessions/([0-9a-f]+)/triad)";
constexpr const char* constructs = R"(/api/sessions/([0-9a-f]+)/constructs)";
constexpr const char* complete = R"(/api/sessions/([0-9a-f]+)/complete)";
constexpr const char* elements = R"(/api/sessions/([0-9a-f]+)/elements)";
constexpr const char* terminate = R"(/api/sessions/([0-9a-f]+)/terminate)";
constexpr const char* exported = R"(/api/sessions/([0-9a-f]+)/export)";
constexpr const char* session_svg = R"(/api/sessions/([0-9a-f]+)/elements/([0-9a-f]+)/svg)";
constexpr const char* p_status = R"(/api/participant/sessions/([0-9a-f]+))";
constexpr const char* p_triad = R"(/api/participant/sessions/([0-9a-f]+)/triad)";
constexpr const char* p_constructs = R"(/api/participant/sessions/([0-9a-f]+)/constructs)";
constexpr const char* p_complete = R"(/api/participant/sessions/([0-9a-f]+)/complete)";
constexpr const char* p_elements = R"(/api/participant/sessions/([0-9a-f]+)/elements)";
constexpr const char* p_svg = R"(/api/participant/sessions/([0-9a-f]+)/elements/([0-9a-f]+)/svg)";
constexpr const char* tags = "/api/tags";
constexpr const char* mappings = "/api/mappings";
constexpr const char* workbook = "/api/workbook";
constexpr const char* usage = "/api/reports/usage";
constexpr const char* reproducibility = "/api/reports/reproducibility";
constexpr const char* categories = "/api/reports/categories";
constexpr const char* disagreements = "/api/reports/disagreements";
}  // namespace p

const std::vector<Route>& routes() {
    static const std::vector<Route> r{
        {"GET", p::catalog, false},
        {"GET", p::metrics, false},
        {"POST", p::evaluate, false},
        {"POST", p::optimize, false},
        {"GET", p::studies, false},
        {"POST", p::studies, false},
        {"GET", p::study, false},
        {"GET", p::study_svg, false},
        {"GET", p::study_metrics, false},
        {"GET", p::sessions, false},
        {"POST", p::sessions, false},
        {"GET", p::session, false},
        {"GET", p::triad, false},
        {"POST", p::triad, false},
        {"POST", p::constructs, false},
        {"POST", p::complete, false},
        {"POST", p::elements, false},
        {"POST", p::terminate, false},
        {"GET", p::exported, false},
        {"GET", p::session_svg, false},
        {"GET", p::p_status, true},
        {"POST", p::p_triad, true},
        {"POST", p::p_constructs, true},
        {"POST", p::p_complete, true},
        {"POST", p::p_elements, true},
        {"GET", p::p_svg, true},
        {"POST", p::tags, false},
        {"POST", p::mappings, false},
        {"GET", p::workbook, false},
        {"GET", p::usage, false},
        {"GET", p::reproducibility, false},
        {"GET", p::categories, false},
        {"GET", p::disagreements, false},
    };
    return r;
}

std::vector<Route> participant_routes() {
    std::vector<Route> out;
    for (const auto& r : routes()) {
        if (r.participant_safe) out.push_back(r);
    }
    return out;
}

fs::path data_dir_from_env(const fs::path& fallback) {
    if (const char* v = std::getenv("GAW_DATA_DIR"); v && *v) return v;
    return fallback;
}

namespace {

using Req = httplib::Request;
using Res = httplib::Response;

void send_json(Res& res, const Json& j, int status = 200) {
    res.status = status;
    res.set_content(j.dump(), "application/json");
}

void send_error(Res& res, const ApiError& e, int status) {
    res.status = status;
    res.set_content(e.to_json().dump(), "application/json");
}

Json body_of(const Req& req) {
    if (req.body.empty()) return Json::object();
    auto j = Json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(Errc::malformed_payload, "request body is not a JSON object");
    return j;
}

std::optional<std::string> request_id(const Req& req, const Json& body) {
    if (body.contains("request_id")) return body.at("request_id").get<std::string>();
    if (req.has_header("Request-Id")) return req.get_header_value("Request-Id");
    return std::nullopt;
}

template <typename T>
T field(const Json& body, const char* name) {
    if (!body.contains(name)) throw Error(Errc::invalid_argument, std::string("missing field '") + name + "'");
    try {
        return body.at(name).get<T>();
    } catch (const Json::exception&) {
        throw Error(Errc::malformed_payload, std::string("field '") + name + "' has the wrong type");
    }
}

std::optional<std::string> opt_string(const Json& body, const char* name) {
    if (!body.contains(name) || body.at(name).is_null()) return std::nullopt;
    return field<std::string>(body, name);
}

/// Wraps a handler so library errors become ApiError responses.
httplib::Server::Handler guarded(std::function<void(const Req&, Res&)> f) {
    return [f = std::move(f)](const Req& req, Res& res) {
        try {
            f(req, res);
        } catch (const Error& e) {
            send_error(res, {std::string(to_string(e.code())), e.what(), nullptr}, http_status(e.code()));
        } catch (const Json::exception& e) {
            send_error(res, {"malformed_payload", e.what(), nullptr}, 400);
        } catch (const std::invalid_argument& e) {
            send_error(res, {"invalid_argument", e.what(), nullptr}, 400);
        } catch (const std::exception& e) {
            send_error(res, {"internal", e.what(), nullptr}, 500);
        }
    };
}

std::string svg_url(const std::string& prefix, const std::string& session, const std::string& element) {
    return prefix + "/sessions/" + session + "/elements/" + element + "/svg";
}

Json triad_json(const rgt::Triad& t, const std::string& session, const std::string& prefix) {
    Json elements = Json::array();
    for (const auto& e : t.elements) elements.push_back({{"id", e}, {"svg_url", svg_url(prefix, session, e)}});
    return Json{{"id", t.id}, {"elements", elements}};
}

Json session_summary(const rgt::Session& s) {
    return Json{{"id", s.id()},
                {"study", s.study_id()},
                {"participant", s.participant()},
                {"seed", s.seed()},
                {"state", rgt::to_string(s.state())},
                {"finish_reason", rgt::to_string(s.finish_reason())},
                {"strikes", s.strikes()},
                {"triads", s.triads().size()},
                {"constructs", s.constructs().size()}};
}

const rgt::Element* find_element(const rgt::Study& st, const rgt::Session& s, const std::string& id) {
    if (const auto* e = st.find(id)) return e;
    for (const auto& e : s.participant_elements()) {
        if (e.id == id) return &e;
    }
    return nullptr;
}

void send_svg(Res& res, const rgt::Element& e) {
    if (e.drawing) {
        res.set_content(render_svg(*e.drawing), "image/svg+xml");
    } else if (e.image && e.image->rfind("<svg", 0) == 0) {
        res.set_content(*e.image, "image/svg+xml");
    } else {
        throw Error(Errc::not_found, "element " + e.id + " has no SVG rendering");
    }
}

rgt::Element element_from_body(const Json& body) {
    Json e = body.contains("element") ? body.at("element") : body;
    if (e.contains("request_id")) e.erase("request_id");
    return rgt::element_from_json(e);
}

std::vector<std::string> studies_param(const Req& req) {
    std::vector<std::string> out;
    if (!req.has_param("studies")) return out;
    const auto v = req.get_param_value("studies");
    std::size_t start = 0;
    while (start <= v.size()) {
        const auto comma = v.find(',', start);
        const auto part = v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!part.empty()) out.push_back(part);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool wants_text(const Req& req) { return req.has_param("format") && req.get_param_value("format") == "text"; }

}  // namespace

Service::Service(fs::path data_dir)
    : store_(std::make_unique<rgt::Store>(data_dir)),
      server_(std::make_unique<httplib::Server>()),
      workbook_path_(data_dir / "workbook.json") {
    // httplib's default adds SO_REUSEPORT, which would let a second server
    // share a busy port silently.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
    });
    register_routes();
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = server_->bind_to_any_port(host);
        if (bound < 0) throw Error(Errc::io_error, "cannot bind " + host);
    } else if (!server_->bind_to_port(host, port)) {
        throw Error(Errc::io_error, "cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
    }
    return bound;
}

void Service::listen() { server_->listen_after_bind(); }
void Service::stop() {
    if (server_) server_->stop();
}
void Service::wait_until_ready() { server_->wait_until_ready(); }

analysis::Workbook Service::workbook() {
    Json saved = Json{{"primary_analyst", "primary"}, {"tags", Json::array()}, {"mappings", Json::array()}};
    if (fs::exists(workbook_path_)) saved = read_json_file(workbook_path_);
    auto w = analysis::Workbook::from_json(saved);
    for (const auto& st : store_->studies()) {
        w.add_study(st.name);
        for (const auto& id : store_->session_ids(st.id)) {
            const auto exported = store_->with_session(id, [](rgt::Session& s) { return rgt::session_export(s); });
            w.add_session(st.name, rgt::import_session(exported));
        }
    }
    return w;
}

void Service::save_workbook(const analysis::Workbook& w) { write_text_file(workbook_path_, w.to_json().dump(2) + "\n"); }

void Service::register_routes() {
    auto& s = *server_;

    // --- catalog, metrics, optimizer --------------------------------------------
    s.Get(p::catalog, guarded([](const Req&, Res& res) {
        Json out = Json::array();
        for (const auto& e : catalog()) {
            out.push_back({{"id", to_string(e.id)},
                           {"name", e.display_name},
                           {"category", to_string(e.category)},
                           {"evaluated", e.evaluated},
                           {"novel", e.novel}});
        }
        send_json(res, out);
    }));
    s.Get(p::metrics, guarded([](const Req&, Res& res) {
        Json out = Json::array();
        for (const auto& e : catalog()) out.push_back({{"id", to_string(e.id)}, {"explain", metrics::explain(e.id)}});
        send_json(res, out);
    }));
    s.Post(p::evaluate, guarded([](const Req& req, Res& res) {
        const auto body = body_of(req);
        const auto d = drawing_from_json(body.contains("drawing") ? body.at("drawing") : body);
        if (wants_text(req)) {
            res.set_content(metrics::render_text(metrics::evaluate_all(d)), "text/plain");
            return;
        }
        send_json(res, metrics::to_json(metrics::evaluate_all(d)));
    }));
    s.Post(p::optimize, guarded([](const Req& req, Res& res) {
        const auto body = body_of(req);
        const auto objective = body.contains("objective") ? opt::objective_from_json(body.at("objective"))
                                                          : opt::default_objective();
        opt::AnnealConfig c;
        if (body.contains("config")) {
            const auto& j = body.at("config");
            c.seed = j.value("seed", c.seed);
            c.max_iterations = j.value("max_iterations", c.max_iterations);
            c.initial_temperature = j.value("initial_temperature", c.initial_temperature);
            c.cooling_factor = j.value("cooling_factor", c.cooling_factor);
            c.node_sigma = j.value("node_sigma", c.node_sigma);
            c.curvature_delta = j.value("curvature_delta", c.curvature_delta);
        }
        if (c.max_iterations > 200000) throw Error(Errc::invalid_argument, "max_iterations is capped at 200000");
        opt::SearchResult r;
        if (body.contains("drawing")) {
            r = opt::anneal(drawing_from_json(body.at("drawing")), objective, c);
        } else {
            r = opt::optimize_layout(graph_from_json(field<Json>(body, "graph")), objective, c);
        }
        send_json(res, Json{{"drawing", r.drawing},
                            {"value", r.value},
                            {"best_trace", r.best_trace},
                            {"metrics", metrics::to_json(metrics::evaluate_all(r.drawing))}});
    }));

    // --- studies ------------------------------------------------------------------
    s.Get(p::studies, guarded([&store = *store_](const Req&, Res& res) {
        Json out = Json::array();
        for (const auto& st : store.studies()) {
            out.push_back({{"id", st.id}, {"name", st.name}, {"elements", st.elements.size()}});
        }
        send_json(res, out);
    }));
    s.Post(p::studies, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        rgt::StudyConfig config;
        if (body.contains("config")) {
            config.strike_limit = body.at("config").value("strike_limit", config.strike_limit);
            config.triad_size = body.at("config").value("triad_size", config.triad_size);
        }
        std::vector<rgt::Element> elements;
        if (body.contains("generate")) {
            const auto& g = body.at("generate");
            gen::GeneratorParams params;
            params.seed = g.value("seed", params.seed);
            params.min_nodes = g.value("min_nodes", params.min_nodes);
            params.max_nodes = g.value("max_nodes", params.max_nodes);
            params.min_edges = g.value("min_edges", params.min_edges);
            params.max_edges = g.value("max_edges", params.max_edges);
            const auto count = g.value("count", std::size_t{12});
            for (const auto& d : gen::generate_element_set(params, count)) elements.push_back(rgt::drawing_element(d));
        }
        if (body.contains("elements")) {
            for (const auto& e : body.at("elements")) elements.push_back(rgt::element_from_json(e));
        }
        const auto st = store.put_study(rgt::create_study(field<std::string>(body, "name"), std::move(elements), config));
        send_json(res, rgt::to_json(st), 201);
    }));
    s.Get(p::study, guarded([&store = *store_](const Req& req, Res& res) { send_json(res, rgt::to_json(store.study(req.matches[1]))); }));
    s.Get(p::study_svg, guarded([&store = *store_](const Req& req, Res& res) {
        const auto st = store.study(req.matches[1]);
        const auto* e = st.find(req.matches[2].str());
        if (!e) throw Error(Errc::not_found, "unknown element " + req.matches[2].str());
        send_svg(res, *e);
    }));
    s.Get(p::study_metrics, guarded([&store = *store_](const Req& req, Res& res) {
        const auto st = store.study(req.matches[1]);
        const auto* e = st.find(req.matches[2].str());
        if (!e) throw Error(Errc::not_found, "unknown element " + req.matches[2].str());
        if (!e->drawing) throw Error(Errc::precondition_failed, "element " + e->id + " is an image without a drawing");
        send_json(res, metrics::to_json(metrics::evaluate_all(*e->drawing)));
    }));

    // --- sessions (interviewer) ---------------------------------------------------------
    s.Get(p::sessions, guarded([&store = *store_](const Req& req, Res& res) {
        std::vector<std::string> study_ids;
        if (req.has_param("study")) {
            study_ids.push_back(req.get_param_value("study"));
        } else {
            for (const auto& st : store.studies()) study_ids.push_back(st.id);
        }
        Json out = Json::array();
        for (const auto& sid : study_ids) {
            for (const auto& id : store.session_ids(sid)) {
                out.push_back(store.with_session(id, [](rgt::Session& x) { return session_summary(x); }));
            }
        }
        send_json(res, out);
    }));
    s.Post(p::sessions, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        const auto study = field<std::string>(body, "study");
        const auto participant = field<std::string>(body, "participant");
        const auto seed = body.value("seed", std::uint64_t{0});
        store.study(study);
        const auto id = rgt::Session::make_id(study, participant, seed);
        // The id is a function of the request, so a retried start finds its session.
        if (request_id(req, body) && store.has_session(id)) {
            send_json(res, store.with_session(id, [](rgt::Session& x) { return session_summary(x); }));
            return;
        }
        store.start_session(study, participant, seed);
        send_json(res, store.with_session(id, [](rgt::Session& x) { return session_summary(x); }), 201);
    }));
    s.Get(p::session, guarded([&store = *store_](const Req& req, Res& res) {
        send_json(res, store.with_session(req.matches[1], [](rgt::Session& x) { return session_summary(x); }));
    }));
    s.Get(p::triad, guarded([&store = *store_](const Req& req, Res& res) {
        const std::string id = req.matches[1];
        send_json(res, store.with_session(id, [&](rgt::Session& x) {
            const auto* t = x.current_triad();
            if (!t) throw Error(Errc::not_found, "no open triad");
            return triad_json(*t, id, "/api");
        }));
    }));
    s.Post(p::triad, guarded([&store = *store_](const Req& req, Res& res) {
        const std::string id = req.matches[1];
        send_json(res, store.with_session(id, [&](rgt::Session& x) {
            const auto t = x.next_triad();
            if (!t) throw Error(Errc::session_finished, "session " + id + " is finished");
            return triad_json(*t, id, "/api");
        }));
    }));
    s.Post(p::constructs, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        const rgt::ConstructInput in{field<std::string>(body, "pole_a"), field<std::string>(body, "pole_b"),
                                     opt_string(body, "ladder_parent"), opt_string(body, "duplicate_of")};
        const auto triad = field<std::string>(body, "triad");
        const auto c = store.with_session(req.matches[1], [&](rgt::Session& x) {
            return x.record_construct(triad, in, request_id(req, body));
        });
        send_json(res, rgt::to_json(c), 201);
    }));
    s.Post(p::complete, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        const auto o = store.with_session(req.matches[1], [&](rgt::Session& x) { return x.complete_triad(request_id(req, body)); });
        send_json(res, Json{{"triad", o.triad_id},
                            {"new_constructs", o.new_construct_count},
                            {"strikes", o.strikes},
                            {"state", rgt::to_string(o.state)}});
    }));
    s.Post(p::elements, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        auto e = element_from_body(body);
        const auto id = store.with_session(req.matches[1], [&](rgt::Session& x) {
            return x.add_participant_element(std::move(e), request_id(req, body));
        });
        send_json(res, Json{{"id", id}}, 201);
    }));
    s.Post(p::terminate, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        const auto summary = store.with_session(req.matches[1], [&](rgt::Session& x) {
            x.terminate(body.value("reason", ""), request_id(req, body));
            return session_summary(x);
        });
        send_json(res, summary);
    }));
    s.Get(p::exported, guarded([&store = *store_](const Req& req, Res& res) {
        res.set_content(store.with_session(req.matches[1], [](rgt::Session& x) { return rgt::session_export_text(x); }),
                        "application/json");
    }));
    auto svg_handler = [&store = *store_](const Req& req, Res& res) {
        const std::string id = req.matches[1], element = req.matches[2];
        store.with_session(id, [&](rgt::Session& x) {
            const auto st = store.study(x.study_id());
            const auto* e = find_element(st, x, element);
            if (!e) throw Error(Errc::not_found, "unknown element " + element);
            send_svg(res, *e);
            return 0;
        });
    };
    s.Get(p::session_svg, guarded(svg_handler));

    // --- participant view: input only, no construct read-back ----------------------------
    s.Get(p::p_status, guarded([&store = *store_](const Req& req, Res& res) {
        send_json(res, store.with_session(req.matches[1], [](rgt::Session& x) {
            rgt::ParticipantView v(x);
            return Json{{"finished", v.finished()}};
        }));
    }));
    s.Post(p::p_triad, guarded([&store = *store_](const Req& req, Res& res) {
        const std::string id = req.matches[1];
        send_json(res, store.with_session(id, [&](rgt::Session& x) {
            rgt::ParticipantView v(x);
            const auto t = v.current_triad();
            if (!t) throw Error(Errc::session_finished, "session " + id + " is finished");
            Json elements = Json::array();
            for (const auto& e : t->elements) elements.push_back({{"id", e}, {"svg_url", svg_url("/api/participant", id, e)}});
            return Json{{"id", t->id}, {"elements", elements}};
        }));
    }));
    s.Post(p::p_constructs, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        const auto cid = store.with_session(req.matches[1], [&](rgt::Session& x) {
            rgt::ParticipantView v(x);
            return v.submit_construct(field<std::string>(body, "triad"), field<std::string>(body, "pole_a"),
                                      field<std::string>(body, "pole_b"), opt_string(body, "ladder_parent"),
                                      request_id(req, body));
        });
        send_json(res, Json{{"id", cid}}, 201);
    }));
    s.Post(p::p_complete, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        const bool finished = store.with_session(req.matches[1], [&](rgt::Session& x) {
            rgt::ParticipantView v(x);
            return v.finish_triad(request_id(req, body));
        });
        send_json(res, Json{{"finished", finished}});
    }));
    s.Post(p::p_elements, guarded([&store = *store_](const Req& req, Res& res) {
        const auto body = body_of(req);
        const auto d = drawing_from_json(field<Json>(body, "drawing"));
        const auto id = store.with_session(req.matches[1], [&](rgt::Session& x) {
            rgt::ParticipantView v(x);
            return v.draw_element(d, body.value("label", ""), request_id(req, body));
        });
        send_json(res, Json{{"id", id}}, 201);
    }));
    s.Get(p::p_svg, guarded(svg_handler));

    // --- analysis -------------------------------------------------------------------------
    s.Post(p::tags, guarded([this](const Req& req, Res& res) {
        const auto body = body_of(req);
        std::lock_guard lock(workbook_mutex_);
        auto w = workbook();
        const auto analyst = body.value("analyst", w.primary_analyst());
        const auto t = w.tag(field<std::string>(body, "construct"),
                             analysis::category_from_string(field<std::string>(body, "category")), analyst);
        save_workbook(w);
        send_json(res, Json{{"construct", t.construct_id}, {"category", analysis::to_string(t.category)}, {"analyst", t.analyst}});
    }));
    s.Post(p::mappings, guarded([this](const Req& req, Res& res) {
        const auto body = body_of(req);
        std::lock_guard lock(workbook_mutex_);
        auto w = workbook();
        const auto analyst = body.value("analyst", w.primary_analyst());
        const auto m = w.map(field<std::string>(body, "construct"),
                             analysis::parse_aesthetic(field<std::string>(body, "aesthetic")), analyst);
        save_workbook(w);
        send_json(res, Json{{"construct", m.construct_id}, {"aesthetic", m.aesthetic.key()}, {"analyst", m.analyst}});
    }));
    s.Get(p::workbook, guarded([this](const Req&, Res& res) {
        std::lock_guard lock(workbook_mutex_);
        send_json(res, workbook().to_json());
    }));
    s.Get(p::usage, guarded([this](const Req& req, Res& res) {
        std::lock_guard lock(workbook_mutex_);
        const auto u = analysis::usage_report(workbook(), studies_param(req));
        if (wants_text(req)) res.set_content(analysis::render_usage_table(u), "text/plain");
        else send_json(res, analysis::to_json(u));
    }));
    s.Get(p::reproducibility, guarded([this](const Req& req, Res& res) {
        std::lock_guard lock(workbook_mutex_);
        const auto r = analysis::reproducibility_report(analysis::usage_report(workbook(), studies_param(req)));
        if (wants_text(req)) res.set_content(analysis::render_reproducibility(r), "text/plain");
        else send_json(res, analysis::to_json(r));
    }));
    s.Get(p::categories, guarded([this](const Req& req, Res& res) {
        std::lock_guard lock(workbook_mutex_);
        send_json(res, analysis::to_json(analysis::category_distribution(workbook(), studies_param(req))));
    }));
    s.Get(p::disagreements, guarded([this](const Req&, Res& res) {
        std::lock_guard lock(workbook_mutex_);
        send_json(res, analysis::to_json(analysis::disagreements(workbook())));
    }));

    s.set_error_handler([](const Req&, Res& res) {
        if (res.body.empty() && res.status == 404) {
            res.set_content(ApiError{"not_found", "no such route", nullptr}.to_json().dump(), "application/json");
        }
    });
}

void serve(const ServiceConfig& config) {
    Service svc(config.data_dir);
    const int port = svc.bind(config.host, config.port);
    std::fprintf(stderr, "gaw service on %s:%d, data in %s\n", config.host.c_str(), port, config.data_dir.string().c_str());
    svc.listen();
}

}  // namespace gaw::service
