#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "geoindex/proof_script.hpp"

using namespace geoindex;

#ifndef GEOINDEX_DATA_DIR
#define GEOINDEX_DATA_DIR "data"
#endif

namespace {

std::string data_path(const char* file) { return std::string(GEOINDEX_DATA_DIR) + "/" + file; }

struct LoadedContext {
    SystemConfig cfg;
    std::map<std::string, LocalHomologyProfile> profiles;
    ScriptContext ctx;
};

LoadedContext pinned_context() {
    LoadedContext c;
    c.cfg = load_config_file(data_path("tcg.json"));
    c.profiles = load_profiles_file(data_path("tcg-profiles.json"));
    c.ctx.system = &c.cfg.geodesics;
    c.ctx.tuple = &*c.cfg.tuple;
    c.ctx.profiles = &c.profiles;
    return c;
}

bool emitted(const ScriptReport& r, const std::string& s) {
    return std::find(r.emissions.begin(), r.emissions.end(), s) != r.emissions.end();
}

}  // namespace

TEST_CASE("the case-analysis script verifies against the pinned system") {
    auto c = pinned_context();
    auto rep = run_proof_script(load_json_file(data_path("theorem-4.2.json")), c.ctx);
    for (const auto& s : rep.steps) {
        CAPTURE(s.name);
        CAPTURE(s.evidence);
        CHECK(s.verdict == Verdict::Pass);
    }
    CHECK(rep.verdict() == ScriptVerdict::Verified);
    CHECK(emitted(rep, "i(c1)=3"));
    CHECK(emitted(rep, "i(c2)=9"));
    CHECK(emitted(rep, "chi_hat(c1)=-1"));
    CHECK(emitted(rep, "chi_hat(c2)=-1"));
    CHECK(emitted(rep, "sum interval=(-13/20, -7/12)"));
    CHECK(emitted(rep, "target=-2/3"));
}

TEST_CASE("the conditional script verifies and records its axioms") {
    auto c = pinned_context();
    auto rep = run_proof_script(load_json_file(data_path("theorem-1.1.json")), c.ctx);
    CHECK(rep.verdict() == ScriptVerdict::Verified);
    CHECK(rep.conditional);
}

TEST_CASE("a false window assertion refutes the script") {
    auto c = pinned_context();
    json script = {
        {"name", "refuted-window"},
        {"requires", {{"system", true}, {"tuple", true}}},
        {"steps",
         json::array({{{"kind", "WindowPartition"}, {"offset", -3}, {"assert_total", 0}}})},
    };
    auto rep = run_proof_script(script, c.ctx);
    CHECK(rep.verdict() == ScriptVerdict::Refuted);
    REQUIRE(rep.steps.size() == 1);
    CHECK(rep.steps[0].verdict == Verdict::Fail);
}

TEST_CASE("an assertion the data cannot pin down blocks the script") {
    auto c = pinned_context();
    c.ctx.profiles = nullptr;  // interior degrees of degenerate iterates stay open
    json script = {
        {"name", "blocked-window"},
        {"steps", json::array({{{"kind", "WindowPartition"}, {"offset", 1}, {"assert_total", 1}}})},
    };
    auto rep = run_proof_script(script, c.ctx);
    CHECK(rep.verdict() == ScriptVerdict::Blocked);
    REQUIRE(rep.steps.size() == 1);
    CHECK(rep.steps[0].verdict == Verdict::Unknown);
    // With the profile supplied the same degree resolves exactly.
    auto full = pinned_context();
    CHECK(run_proof_script(script, full.ctx).verdict() == ScriptVerdict::Verified);
}

TEST_CASE("axiom steps make a script conditional but never refute it") {
    json script = {
        {"name", "axioms-only"},
        {"steps", json::array({{{"kind", "Axiom"}, {"statement", "external input"}}})},
    };
    auto rep = run_proof_script(script);
    CHECK(rep.verdict() == ScriptVerdict::Verified);
    CHECK(rep.conditional);
}

TEST_CASE("malformed scripts are rejected upfront") {
    CHECK_THROWS_AS(run_proof_script(json::array()), MalformedScript);
    CHECK_THROWS_AS(run_proof_script(json{{"name", "x"}}), MalformedScript);
    json unknown_kind = {{"name", "x"}, {"steps", json::array({{{"kind", "Nonsense"}}})}};
    CHECK_THROWS_AS(run_proof_script(unknown_kind), MalformedScript);
    json unknown_check = {
        {"name", "x"},
        {"steps", json::array({{{"kind", "Hypothesis"}, {"check", "nonsense"}}})},
    };
    CHECK_THROWS_AS(run_proof_script(unknown_check), MalformedScript);
    json unknown_rule = {
        {"name", "x"},
        {"steps", json::array({{{"kind", "Contradiction"}, {"rule", "nonsense"}}})},
    };
    CHECK_THROWS_AS(run_proof_script(unknown_rule), MalformedScript);
    // Declared requirements must be satisfiable from the context.
    json needs_system = {{"name", "x"}, {"requires", {{"system", true}}}, {"steps", json::array()}};
    CHECK_THROWS_AS(run_proof_script(needs_system), MalformedScript);
}

TEST_CASE("steps referencing unavailable data fail loudly") {
    auto c = pinned_context();
    json script = {
        {"name", "x"},
        {"steps", json::array({{{"kind", "Hypothesis"},
                                {"check", "initial_index"},
                                {"geodesic", "nope"},
                                {"value", 3}}})},
    };
    CHECK_THROWS_AS(run_proof_script(script, c.ctx), MalformedScript);
}

TEST_CASE("classification steps match labels and member geodesics") {
    auto c = pinned_context();
    json script = {
        {"name", "classify"},
        {"requires", {{"system", true}}},
        {"steps", json::array({{{"kind", "Classification"},
                                {"window", "odd"},
                                {"q", 6},
                                {"member", "c3"},
                                {"expect",
                                 json::array({
                                     {{"label", "N1(1,1)*I4"}, {"index", 3}},
                                     {{"label", "I6"}, {"index", 3}},
                                     {{"label", "N1(1,1)*I2*N1(1,-1)"}, {"index", 4}},
                                     {{"label", "I4*N1(1,-1)"}, {"index", 4}},
                                     {{"label", "I4*H(2)"}, {"index", 4}},
                                 })}}})},
    };
    auto rep = run_proof_script(script, c.ctx);
    REQUIRE(rep.steps.size() == 1);
    CHECK(rep.steps[0].verdict == Verdict::Pass);
    CHECK(rep.steps[0].evidence.find("c3 realizes class I4*H(2)") != std::string::npos);
}

TEST_CASE("script files load with parse diagnostics") {
    CHECK_THROWS_AS(load_json_file(data_path("missing.json")), IoError);
    CHECK_NOTHROW(load_json_file(data_path("lemma-3.2.json")));
}
