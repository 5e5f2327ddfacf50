// Command-line interface for the exact closed-geodesic index toolkit.
//
// Exit codes: 0 = success / VERIFIED, 1 = failed check / REFUTED,
//             2 = error / BLOCKED / unusable input.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "geoindex/config.hpp"
#include "geoindex/enumeration.hpp"
#include "geoindex/proof_script.hpp"
#include "geoindex/report.hpp"

using namespace geoindex;

namespace {

struct Options {
    std::string config_path;
    std::string profiles_path;
    std::string format = "text";
    int precision = 60;
    unsigned seed = 0;
};

struct Loaded {
    std::optional<SystemConfig> cfg;
    std::map<std::string, LocalHomologyProfile> profiles;
    Precision prec;
};

Loaded load(const Options& o, bool need_config) {
    Loaded l;
    l.prec.digits = o.precision;
    if (!o.config_path.empty()) l.cfg = load_config_file(o.config_path);
    if (need_config && !l.cfg) throw ValidationError("this command requires --config");
    if (!o.profiles_path.empty()) {
        l.profiles = load_profiles_file(o.profiles_path);
        if (l.cfg)
            for (const auto& g : l.cfg->geodesics)
                if (auto it = l.profiles.find(g.name); it != l.profiles.end())
                    validate_profile(g, it->second, l.prec);
    }
    return l;
}

const GeodesicDescriptor& pick(const SystemConfig& cfg, const std::string& name) {
    for (const auto& g : cfg.geodesics)
        if (g.name == name) return g;
    throw ValidationError("no geodesic named \"" + name + "\" in the config");
}

RunArtifact artifact(const std::string& command, const Options& o, const Loaded& l) {
    RunArtifact a;
    a.command = command;
    if (l.cfg) a.config_digest = l.cfg->digest;
    a.params.push_back({"precision", std::to_string(o.precision)});
    a.params.push_back({"seed", std::to_string(o.seed)});
    return a;
}

void print(const RunArtifact& a, const Options& o) { std::cout << render(a, o.format); }

// --- command bodies -------------------------------------------------------

int cmd_classify(const Options& o, const std::string& window, int q, bool pinching) {
    Loaded l = load(o, false);
    auto classes = window == "odd"    ? classify_odd_window(q, pinching)
                   : window == "even" ? classify_even_window(q, pinching)
                                      : throw ValidationError("--window must be odd or even");
    RunArtifact a = artifact("classify", o, l);
    a.params.push_back({"window", window});
    a.params.push_back({"q", std::to_string(q)});
    a.params.push_back({"pinching", pinching ? "true" : "false"});
    Table t;
    t.title = "degenerate window classes, " + window + " iterate, q=" + std::to_string(q);
    t.columns = {"class", "constraint", window == "odd" ? "i(c)" : "i(c^2)", "members", "index formula"};
    for (const auto& c : classes)
        t.rows.push_back({c.label, c.constraint, c.initial_index.str(),
                          std::to_string(c.members.size()), c.index_formula});
    a.tables.push_back(std::move(t));
    a.note(std::to_string(classes.size()) + " classes");
    print(a, o);
    return 0;
}

int cmd_enumerate(const Options& o, std::optional<int> parity, const std::vector<std::string>& forbid) {
    Loaded l = load(o, false);
    EnumerationFilters f;
    if (parity) f.parity = *parity;
    for (const auto& n : forbid) f.forbidden.insert(n);
    auto pats = enumerate_patterns(f);
    RunArtifact a = artifact("enumerate", o, l);
    Table t;
    t.title = "budget-3 block patterns";
    t.columns = {"pattern", "nu(c)", "nu(c^2)", "parity"};
    for (const auto& b : pats)
        t.rows.push_back({b.label(), std::to_string(b.nu1()), std::to_string(b.nu2()),
                          std::to_string(b.parity())});
    a.tables.push_back(std::move(t));
    a.note(std::to_string(pats.size()) + " patterns");
    print(a, o);
    return 0;
}

int cmd_iterate(const Options& o, const std::string& name, long max) {
    Loaded l = load(o, true);
    const auto& g = pick(*l.cfg, name);
    RunArtifact a = artifact("iterate", o, l);
    a.params.push_back({"geodesic", name});
    Table t;
    t.title = "index iteration of " + name;
    t.columns = {"m", "i", "nu", "i+nu", "eps"};
    for (Int m = 1; m <= max; ++m) {
        auto p = iterate_index(g, m, l.prec);
        t.rows.push_back({m.str(), p.i.str(), std::to_string(p.nu), Int(p.i + p.nu).str(),
                          std::to_string(iterate_eps(g, m, l.prec))});
    }
    a.tables.push_back(std::move(t));
    print(a, o);
    return 0;
}

int cmd_mean_index(const Options& o, const std::string& name, const std::string& width_s) {
    Loaded l = load(o, true);
    const auto& g = pick(*l.cfg, name);
    MeanIndexValue v = mean_index(g);
    RunArtifact a = artifact("mean-index", o, l);
    a.params.push_back({"geodesic", name});
    if (v.is_exact()) {
        a.note("mean index = " + rat_str(v.rational_part) + " (exact)");
    } else {
        RatInterval iv = v.evaluate(parse_rat(width_s));
        a.note("mean index in [" + rat_str(iv.lo) + ", " + rat_str(iv.hi) + "]");
    }
    print(a, o);
    return 0;
}

int cmd_period(const Options& o, const std::string& name) {
    Loaded l = load(o, true);
    const auto& g = pick(*l.cfg, name);
    RunArtifact a = artifact("period", o, l);
    a.params.push_back({"geodesic", name});
    a.note("nullity period = " + nullity_period(g.decomp).str());
    a.note("analytical period = " + analytical_period(g).str());
    print(a, o);
    return 0;
}

int cmd_betti(const Options& o, long max) {
    Loaded l = load(o, false);
    RunArtifact a = artifact("betti", o, l);
    Table t;
    t.title = "free loop space betti numbers, S4";
    t.columns = {"j", "b_j"};
    for (Int j = 0; j <= max; ++j) t.rows.push_back({j.str(), std::to_string(betti_s4(j))});
    a.tables.push_back(std::move(t));
    print(a, o);
    return 0;
}

int cmd_jump(const Options& o, const std::string& eps_s, const std::string& delta_s, int mbar,
             int count, const std::string& n_limit_s) {
    Loaded l = load(o, true);
    JumpSearchParams p;
    p.eps = parse_rat(eps_s);
    p.delta = parse_rat(delta_s);
    p.mbar = mbar;
    p.count = count;
    p.N_limit = Int(n_limit_s);
    RunArtifact a = artifact("jump", o, l);
    a.params.push_back({"eps", eps_s});
    a.params.push_back({"delta", delta_s});
    a.params.push_back({"mbar", std::to_string(mbar)});
    try {
        auto tuples = find_jump_tuples(l.cfg->geodesics, p, l.prec);
        Table t;
        t.title = "common index jump tuples";
        t.columns = {"N"};
        for (const auto& g : l.cfg->geodesics) {
            t.columns.push_back("m(" + g.name + ")");
            t.columns.push_back("chi(" + g.name + ")");
        }
        for (const auto& tu : tuples) {
            std::vector<std::string> row{tu.N.str()};
            for (size_t k = 0; k < tu.m.size(); ++k) {
                row.push_back(tu.m[k].str());
                row.push_back(std::to_string(tu.chi[k]));
            }
            t.rows.push_back(std::move(row));
        }
        a.tables.push_back(std::move(t));
        print(a, o);
        return 0;
    } catch (const SearchExhausted& e) {
        a.note(std::string("no tuple found: ") + e.what());
        print(a, o);
        return 1;
    }
}

int cmd_verify_tuple(const Options& o) {
    Loaded l = load(o, true);
    if (!l.cfg->tuple) throw ValidationError("config has no embedded tuple to verify");
    auto rep = verify_tuple(*l.cfg->tuple, l.cfg->geodesics, l.prec);
    RunArtifact a = artifact("verify-tuple", o, l);
    a.params.push_back({"N", rep.N.str()});
    Table t;
    t.title = "jump tuple verification";
    t.columns = {"geodesic", "m_k", "chi", "consistent", "identities", "windows", "pinched", "Delta"};
    for (const auto& g : rep.geodesics) {
        bool ids = g.even_identity && g.even_sum_identity;
        bool wins = g.one_back_bound && g.two_back_bound && g.tail_lower && g.tail_upper;
        for (const auto& it : g.iterates) {
            ids = ids && it.forward_identity && it.backward_identity && it.backward_sum_identity &&
                  it.nu_symmetric;
            wins = wins && it.forward_window && it.backward_window;
        }
        t.rows.push_back({g.name, g.m_k.str(), std::to_string(g.chi),
                          g.m_k_consistent && g.frac_within_eps ? "yes" : "no",
                          ids ? "yes" : "no", wins ? "yes" : "no", g.pinched ? "yes" : "no",
                          std::to_string(g.delta)});
    }
    a.tables.push_back(std::move(t));
    a.note(rep.verified() ? "tuple verified" : "tuple NOT verified");
    print(a, o);
    return rep.verified() ? 0 : 1;
}

int cmd_morse(const Options& o) {
    Loaded l = load(o, true);
    if (!l.cfg->tuple) throw ValidationError("morse window assembly needs an embedded tuple");
    auto w = morse_window(l.cfg->geodesics, *l.cfg->tuple, l.profiles, l.prec);
    auto checks = morse_inequality_check(w);
    RunArtifact a = artifact("morse", o, l);
    a.params.push_back({"N", w.N.str()});
    Table t;
    t.title = "Morse-type numbers over the jump window";
    t.columns = {"offset", "degree", "M_q", "b_q", "M>=b"};
    for (const auto& [off, row] : w.rows) {
        std::string offs = (off < 0 ? "" : "+") + off.str();
        t.rows.push_back({"2N" + offs, Int(2 * w.N + off).str(), w.total(off).str(),
                          std::to_string(betti_s4(2 * w.N + off)), verdict_str(checks.at(off))});
    }
    a.tables.push_back(std::move(t));
    print(a, o);
    return 0;
}

int cmd_prove(const Options& o, const std::string& script_path) {
    Loaded l = load(o, false);
    json script = load_json_file(script_path);
    ScriptContext ctx;
    ctx.prec = l.prec;
    if (l.cfg) {
        ctx.system = &l.cfg->geodesics;
        if (l.cfg->tuple) ctx.tuple = &*l.cfg->tuple;
    }
    if (!l.profiles.empty()) ctx.profiles = &l.profiles;
    auto rep = run_proof_script(script, ctx);
    RunArtifact a = artifact("prove", o, l);
    a.params.push_back({"script", rep.script_name});
    Table t;
    t.title = "proof steps";
    t.columns = {"kind", "step", "verdict", "evidence"};
    for (const auto& s : rep.steps)
        t.rows.push_back({s.kind, s.name, verdict_str(s.verdict), s.evidence});
    a.tables.push_back(std::move(t));
    for (const auto& e : rep.emissions) a.note("emit: " + e);
    a.note(std::string("verdict: ") + script_verdict_str(rep.verdict()) +
           (rep.conditional ? " (conditional on axiom steps)" : ""));
    print(a, o);
    switch (rep.verdict()) {
        case ScriptVerdict::Verified: return 0;
        case ScriptVerdict::Refuted: return 1;
        default: return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact index iteration and case verification for closed geodesics on Finsler S4"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config_path, "system configuration JSON");
    app.add_option("--profiles", o.profiles_path, "local homology profiles JSON");
    app.add_option("--precision", o.precision, "working precision in decimal digits")->default_val(60);
    app.add_option("--format", o.format, "output format: text, json, csv, md")->default_val("text");
    app.add_option("--seed", o.seed, "seed recorded in report provenance")->default_val(0);

    std::string window, geodesic, script, eps = "1/1000000", delta = "1/1000000";
    std::string width = "1/1000000000000", n_limit = "1000000000";
    int q = 6, mbar = 4, count = 1;
    long max = 10;
    std::optional<int> parity;
    std::vector<std::string> forbid;
    bool pinching = true;

    auto* classify = app.add_subcommand("classify", "degenerate window classification");
    classify->add_option("--window", window, "odd or even")->required();
    classify->add_option("--q", q, "window growth rate")->required();
    classify->add_flag("!--no-pinching", pinching, "drop the pinching restriction");

    auto* enumerate = app.add_subcommand("enumerate", "list budget-3 block patterns");
    enumerate->add_option("--parity", parity, "restrict to forced index parity 0/1");
    enumerate->add_option("--forbid", forbid, "counters that must vanish");

    auto* iterate = app.add_subcommand("iterate", "index iteration table");
    iterate->add_option("--geodesic", geodesic, "geodesic name")->required();
    iterate->add_option("--max", max, "largest iterate")->default_val(10);

    auto* mean = app.add_subcommand("mean-index", "mean index value or enclosure");
    mean->add_option("--geodesic", geodesic, "geodesic name")->required();
    mean->add_option("--width", width, "target enclosure width");

    auto* period = app.add_subcommand("period", "nullity and analytical periods");
    period->add_option("--geodesic", geodesic, "geodesic name")->required();

    auto* betti = app.add_subcommand("betti", "free loop space betti numbers");
    betti->add_option("--max", max, "largest degree")->default_val(30);

    auto* jump = app.add_subcommand("jump", "search for common index jump tuples");
    jump->add_option("--eps", eps, "fractional-part tolerance");
    jump->add_option("--delta", delta, "splitting-angle tolerance");
    jump->add_option("--mbar", mbar, "window half-width in iterates");
    jump->add_option("--count", count, "number of tuples to find");
    jump->add_option("--n-limit", n_limit, "search bound for N");

    app.add_subcommand("verify-tuple", "verify the tuple embedded in the config");
    app.add_subcommand("morse", "assemble Morse-type numbers over the jump window");

    auto* prove = app.add_subcommand("prove", "run a proof script");
    prove->add_option("--script", script, "proof script JSON")->required();

    for (CLI::App* sc : app.get_subcommands([](CLI::App*) { return true; })) sc->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (classify->parsed()) return cmd_classify(o, window, q, pinching);
        if (enumerate->parsed()) return cmd_enumerate(o, parity, forbid);
        if (iterate->parsed()) return cmd_iterate(o, geodesic, max);
        if (mean->parsed()) return cmd_mean_index(o, geodesic, width);
        if (period->parsed()) return cmd_period(o, geodesic);
        if (betti->parsed()) return cmd_betti(o, max);
        if (jump->parsed()) return cmd_jump(o, eps, delta, mbar, count, n_limit);
        if (app.get_subcommand("verify-tuple")->parsed()) return cmd_verify_tuple(o);
        if (app.get_subcommand("morse")->parsed()) return cmd_morse(o);
        if (prove->parsed()) return cmd_prove(o, script);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
