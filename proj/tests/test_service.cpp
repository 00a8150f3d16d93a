#include <gtest/gtest.h>

#include <httplib.h>
#include <unistd.h>

#include <thread>

#include "gaw/error.hpp"
#include "gaw/metrics.hpp"
#include "gaw/service.hpp"
#include "gaw/svg.hpp"
#include "sim.hpp"
#include "support.hpp"

using namespace gaw;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("gaw-svc-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    return p;
}

/// A running service on an ephemeral port with its own data directory.
class Running {
public:
    explicit Running(const std::string& name) : dir_(temp_dir(name)), svc_(dir_) {
        port_ = svc_.bind("127.0.0.1", 0);
        thread_ = std::thread([this] { svc_.listen(); });
        svc_.wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    }
    ~Running() {
        svc_.stop();
        thread_.join();
        std::filesystem::remove_all(dir_);
    }

    struct Reply {
        int status = 0;
        std::string body;
        Json json() const { return Json::parse(body); }
    };

    Reply get(const std::string& path) {
        auto r = client_->Get(path);
        if (!r) throw std::runtime_error("no response for GET " + path);
        return {r->status, r->body};
    }
    Reply post(const std::string& path, const Json& body = Json::object()) {
        auto r = client_->Post(path, body.dump(), "application/json");
        if (!r) throw std::runtime_error("no response for POST " + path);
        return {r->status, r->body};
    }

    service::Service& service() { return svc_; }

private:
    std::filesystem::path dir_;
    service::Service svc_;
    int port_ = 0;
    std::thread thread_;
    std::unique_ptr<httplib::Client> client_;
};

Json study_request(const rgt::Study& st) {
    Json elements = Json::array();
    for (const auto& e : st.elements) elements.push_back(rgt::to_json(e));
    return Json{{"name", st.name}, {"elements", elements}};
}

struct Step {
    enum Kind { construct, ladder, duplicate, complete, element } kind;
    std::string a, b;
};

// Triad 1 gets a construct and a laddered child, then a drawn element joins
// the pool, triad 2 gets a synonym of the first construct and a new one, and
// the rest are empty until the strike rule ends the session.
const std::vector<Step>& script() {
    static const std::vector<Step> s{
        {Step::construct, "clear", "confusing"},   {Step::ladder, "readable", "unreadable"},
        {Step::complete, "", ""},                  {Step::element, "", ""},
        {Step::duplicate, "Tidy", "messy"},        {Step::construct, "symmetric", "lopsided"},
        {Step::complete, "", ""},                  {Step::complete, "", ""},
        {Step::complete, "", ""},                  {Step::complete, "", ""},
    };
    return s;
}

std::string library_export(const rgt::Study& st) {
    auto s = rgt::Session::start(st, "alice", 5);
    std::string first;
    for (const auto& step : script()) {
        const auto t = s.next_triad();
        switch (step.kind) {
            case Step::construct: {
                const auto c = s.record_construct(t->id, {step.a, step.b, {}, {}});
                if (first.empty()) first = c.id;
                break;
            }
            case Step::ladder: s.record_construct(t->id, {step.a, step.b, first, {}}); break;
            case Step::duplicate: s.record_construct(t->id, {step.a, step.b, {}, first}); break;
            case Step::complete: s.complete_triad(); break;
            case Step::element: s.add_participant_element(rgt::drawing_element(fixtures::triangle(300.0), rgt::ElementOrigin::participant_drawn, "simple")); break;
        }
    }
    return rgt::session_export_text(s);
}

}  // namespace

TEST(Service, ErrorCodesAreClosed) {
    for (auto c : {Errc::invalid_argument, Errc::malformed_payload, Errc::not_found, Errc::session_finished,
                   Errc::invalid_construct, Errc::precondition_failed, Errc::infeasible, Errc::degenerate_geometry,
                   Errc::conflict, Errc::io_error}) {
        const std::string code(to_string(c));
        EXPECT_NE(std::find(service::api_error_codes().begin(), service::api_error_codes().end(), code),
                  service::api_error_codes().end())
            << code;
        EXPECT_GE(service::http_status(c), 400);
    }
}

TEST(Service, ScriptedInterviewMatchesLibrary) {
    const auto st = fixtures::twelve_element_study();
    Running srv("script");
    auto created = srv.post("/api/studies", study_request(st));
    ASSERT_EQ(created.status, 201) << created.body;
    EXPECT_EQ(created.json()["id"], st.id);

    auto started = srv.post("/api/sessions", {{"study", st.id}, {"participant", "alice"}, {"seed", 5}});
    ASSERT_EQ(started.status, 201) << started.body;
    const std::string sid = started.json()["id"];
    const std::string base = "/api/sessions/" + sid;

    std::string first;
    int rid = 0;
    for (const auto& step : script()) {
        auto triad = srv.post(base + "/triad");
        ASSERT_EQ(triad.status, 200) << triad.body;
        const auto t = triad.json();
        ASSERT_EQ(t["elements"].size(), 3u);
        const std::string req = "r" + std::to_string(++rid);
        Json body{{"triad", t["id"]}, {"pole_a", step.a}, {"pole_b", step.b}, {"request_id", req}};
        Running::Reply r;
        switch (step.kind) {
            case Step::construct: r = srv.post(base + "/constructs", body); break;
            case Step::ladder: body["ladder_parent"] = first; r = srv.post(base + "/constructs", body); break;
            case Step::duplicate: body["duplicate_of"] = first; r = srv.post(base + "/constructs", body); break;
            case Step::complete: r = srv.post(base + "/complete", {{"request_id", req}}); break;
            case Step::element: {
                Json e = rgt::to_json(rgt::drawing_element(fixtures::triangle(300.0), rgt::ElementOrigin::participant_drawn, "simple"));
                e["request_id"] = req;
                r = srv.post(base + "/elements", e);
                break;
            }
        }
        ASSERT_LT(r.status, 300) << r.body;
        if (step.kind == Step::construct && first.empty()) first = r.json()["id"];
        // a retry with the same request id changes nothing
        if (step.kind != Step::element) {
            const auto again = step.kind == Step::complete ? srv.post(base + "/complete", {{"request_id", req}})
                                                           : srv.post(base + "/constructs", body);
            EXPECT_EQ(again.body, r.body);
        }
    }

    const auto summary = srv.get(base).json();
    EXPECT_EQ(summary["state"], "finished");
    EXPECT_EQ(summary["finish_reason"], "strike_limit");
    EXPECT_EQ(srv.get(base + "/export").body, library_export(st));

    // finished sessions refuse input
    auto late = srv.post(base + "/constructs", {{"triad", "t1"}, {"pole_a", "x"}, {"pole_b", "y"}});
    EXPECT_EQ(late.status, 409);
    EXPECT_EQ(late.json()["error"]["code"], "session_finished");
    EXPECT_EQ(srv.post(base + "/triad").json()["error"]["code"], "session_finished");

    // a restarted service replays the same session from disk
    rgt::Store reread(srv.service().store().root());
    EXPECT_EQ(reread.with_session(sid, [](rgt::Session& s) { return rgt::session_export_text(s); }), library_export(st));
}

TEST(Service, TriadCarriesSvgUrls) {
    const auto st = fixtures::twelve_element_study();
    Running srv("svg");
    srv.post("/api/studies", study_request(st));
    const std::string sid = srv.post("/api/sessions", {{"study", st.id}, {"participant", "bob"}, {"seed", 1}}).json()["id"];
    const auto t = srv.post("/api/participant/sessions/" + sid + "/triad").json();
    ASSERT_EQ(t["elements"].size(), 3u);
    for (const auto& e : t["elements"]) {
        const auto svg = srv.get(e["svg_url"].get<std::string>());
        ASSERT_EQ(svg.status, 200) << e["svg_url"];
        EXPECT_EQ(svg.body, render_svg(st.find(e["id"].get<std::string>())->drawing.value()));
    }
    const auto eid = st.elements[0].id;
    const auto m = srv.get("/api/studies/" + st.id + "/elements/" + eid + "/metrics").json();
    EXPECT_EQ(m, metrics::to_json(metrics::evaluate_all(*st.elements[0].drawing)));
    EXPECT_EQ(srv.get("/api/studies/" + st.id + "/elements/ffff/svg").json()["error"]["code"], "not_found");
}

TEST(Service, ParticipantRoutesNeverReturnConstructs) {
    for (const auto& r : service::participant_routes()) {
        EXPECT_EQ(r.pattern.rfind("/api/participant/", 0), 0u) << r.pattern;
        EXPECT_EQ(r.pattern.find("export"), std::string::npos) << r.pattern;
        if (r.method == "GET") {
            EXPECT_EQ(r.pattern.find("constructs"), std::string::npos) << r.pattern;
        }
    }

    const auto st = fixtures::twelve_element_study();
    Running srv("audit");
    srv.post("/api/studies", study_request(st));
    const std::string sid = srv.post("/api/sessions", {{"study", st.id}, {"participant", "carol"}, {"seed", 2}}).json()["id"];
    const std::string base = "/api/participant/sessions/" + sid;
    std::vector<std::string> bodies;
    for (int k = 0; k < 4; ++k) {
        const auto t = srv.post(base + "/triad");
        bodies.push_back(t.body);
        bodies.push_back(srv.post(base + "/constructs", {{"triad", t.json()["id"]}, {"pole_a", "secret" + std::to_string(k)}, {"pole_b", "hidden"}}).body);
        bodies.push_back(srv.post(base + "/complete").body);
        bodies.push_back(srv.get(base).body);
    }
    for (const auto& b : bodies) {
        EXPECT_EQ(b.find("secret"), std::string::npos) << b;
        EXPECT_EQ(b.find("hidden"), std::string::npos) << b;
    }
    for (const auto& probe : {"/constructs", "/export", "/history", ""}) {
        const auto r = srv.get(std::string(base) + probe);
        EXPECT_EQ(r.body.find("secret"), std::string::npos) << probe;
    }
    EXPECT_EQ(srv.get(base + "/constructs").status, 404);
    EXPECT_EQ(srv.get(base + "/export").status, 404);
    // the interviewer still sees them
    EXPECT_NE(srv.get("/api/sessions/" + sid + "/export").body.find("secret0"), std::string::npos);
}

TEST(Service, ErrorsAndIdempotentStart) {
    const auto st = fixtures::twelve_element_study();
    Running srv("errors");
    EXPECT_EQ(srv.post("/api/studies", study_request(st)).status, 201);
    EXPECT_EQ(srv.post("/api/studies", study_request(st)).json()["id"], st.id);
    EXPECT_EQ(srv.get("/api/studies").json().size(), 1u);

    const Json start{{"study", st.id}, {"participant", "dave"}, {"seed", 3}, {"request_id", "s1"}};
    const auto a = srv.post("/api/sessions", start);
    const auto b = srv.post("/api/sessions", start);
    EXPECT_EQ(a.status, 201);
    EXPECT_EQ(b.status, 200);
    EXPECT_EQ(a.json()["id"], b.json()["id"]);
    Json no_rid = start;
    no_rid.erase("request_id");
    EXPECT_EQ(srv.post("/api/sessions", no_rid).json()["error"]["code"], "conflict");

    const std::string base = "/api/sessions/" + a.json()["id"].get<std::string>();
    const auto t = srv.post(base + "/triad").json();
    auto bad = srv.post(base + "/constructs", {{"triad", t["id"]}, {"pole_a", "Same"}, {"pole_b", " same"}});
    EXPECT_EQ(bad.status, 422);
    EXPECT_EQ(bad.json()["error"]["code"], "invalid_construct");
    EXPECT_EQ(srv.post(base + "/constructs", {{"triad", "t9"}, {"pole_a", "a"}, {"pole_b", "b"}}).json()["error"]["code"],
              "precondition_failed");
    EXPECT_EQ(srv.post(base + "/constructs", {{"pole_a", "a"}}).json()["error"]["code"], "invalid_argument");
    EXPECT_EQ(srv.post("/api/sessions/abcdef/triad").json()["error"]["code"], "not_found");
    EXPECT_EQ(srv.get("/api/nothing").json()["error"]["code"], "not_found");
    EXPECT_EQ(srv.post("/api/studies", {{"name", "tiny"}, {"elements", Json::array()}}).json()["error"]["code"],
              "invalid_argument");

    const auto catalog = srv.get("/api/catalog").json();
    EXPECT_EQ(catalog.size(), 31u);
}

TEST(Service, AnalysisEndpoints) {
    const auto st = fixtures::twelve_element_study();
    Running srv("analysis");
    srv.post("/api/studies", study_request(st));
    const std::string sid = srv.post("/api/sessions", {{"study", st.id}, {"participant", "erin"}, {"seed", 4}}).json()["id"];
    const std::string base = "/api/sessions/" + sid;
    const auto t = srv.post(base + "/triad").json();
    const std::string c1 = srv.post(base + "/constructs", {{"triad", t["id"]}, {"pole_a", "many crossings"}, {"pole_b", "none"}}).json()["id"];
    const std::string c2 = srv.post(base + "/constructs", {{"triad", t["id"]}, {"pole_a", "ugly"}, {"pole_b", "pretty"}}).json()["id"];

    EXPECT_EQ(srv.post("/api/mappings", {{"construct", c1}, {"aesthetic", "area"}}).json()["error"]["code"],
              "precondition_failed");
    EXPECT_EQ(srv.post("/api/tags", {{"construct", c1}, {"category", "composition"}}).status, 200);
    EXPECT_EQ(srv.post("/api/tags", {{"construct", c2}, {"category", "visual_experience"}}).status, 200);
    EXPECT_EQ(srv.post("/api/mappings", {{"construct", c1}, {"aesthetic", "number_of_edge_crossings"}}).status, 200);
    EXPECT_EQ(srv.post("/api/mappings", {{"construct", c2}, {"aesthetic", "area"}}).json()["error"]["code"],
              "precondition_failed");

    const auto u = srv.get("/api/reports/usage").json();
    EXPECT_EQ(u["participants"][0], 1);
    for (const auto& row : u["rows"]) {
        EXPECT_EQ(row["counts"]["fixture"], row["key"] == "number_of_edge_crossings" ? 1 : 0) << row["key"];
    }
    EXPECT_NE(srv.get("/api/reports/usage?format=text").body.find("Number of edge crossings"), std::string::npos);
    const auto r = srv.get("/api/reports/reproducibility").json();
    EXPECT_DOUBLE_EQ(r["studies"][0]["published_coverage"].get<double>(), 1.0 / 29.0);
    const auto c = srv.get("/api/reports/categories").json();
    EXPECT_EQ(c["counts"]["composition"], 1);
    EXPECT_EQ(c["counts"]["visual_experience"], 1);
    EXPECT_EQ(srv.get("/api/reports/usage?studies=nope").json()["error"]["code"], "not_found");
}

TEST(Service, MetricsAndOptimize) {
    Running srv("metrics");
    Json d = fixtures::triangle();
    const auto m = srv.post("/api/metrics/evaluate", {{"drawing", d}}).json();
    EXPECT_EQ(m, metrics::to_json(metrics::evaluate_all(fixtures::triangle())));
    Json k4 = fixtures::complete_graph(4);
    const auto r = srv.post("/api/optimize", {{"graph", k4},
                                              {"objective", {{"weights", {{"number_of_edge_crossings", 1.0}}}}},
                                              {"config", {{"seed", 1}, {"max_iterations", 3000}}}});
    ASSERT_EQ(r.status, 200) << r.body;
    EXPECT_EQ(r.json()["best_trace"].size(), 3001u);
    EXPECT_EQ(srv.post("/api/optimize", {{"graph", k4}, {"objective", {{"weights", {{"bogus", 1.0}}}}}}).json()["error"]["code"],
              "invalid_argument");
}

TEST(Service, UnwritableDataDirectoryAndBusyPort) {
    EXPECT_THROW(service::Service("/proc/gaw-cannot-write"), Error);
    const auto dir = temp_dir("busy");
    service::Service a(dir), b(dir);
    const int port = a.bind("127.0.0.1", 0);
    try {
        b.bind("127.0.0.1", port);
        ADD_FAILURE() << "second bind succeeded";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::io_error);
    }
    std::filesystem::remove_all(dir);
}
