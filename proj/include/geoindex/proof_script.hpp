#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoindex/config.hpp"
#include "geoindex/lemma_checks.hpp"
#include "geoindex/morse.hpp"

namespace geoindex {

enum class ScriptVerdict { Verified, Refuted, Blocked };

inline const char* script_verdict_str(ScriptVerdict v) {
    switch (v) {
        case ScriptVerdict::Verified: return "VERIFIED";
        case ScriptVerdict::Refuted: return "REFUTED";
        default: return "BLOCKED";
    }
}

struct ScriptStepResult {
    std::string kind;
    std::string name;
    Verdict verdict = Verdict::Unknown;
    std::string evidence;
};

struct ScriptReport {
    std::string script_name;
    std::vector<ScriptStepResult> steps;
    std::vector<std::string> emissions;
    bool conditional = false;  // at least one axiom step was accepted

    ScriptVerdict verdict() const {
        bool blocked = false;
        for (const auto& s : steps) {
            if (s.verdict == Verdict::Fail) return ScriptVerdict::Refuted;
            if (s.verdict == Verdict::Unknown) blocked = true;
        }
        return blocked ? ScriptVerdict::Blocked : ScriptVerdict::Verified;
    }
};

struct ScriptContext {
    const System* system = nullptr;
    const JumpTuple* tuple = nullptr;
    const std::map<std::string, LocalHomologyProfile>* profiles = nullptr;
    Precision prec;
};

namespace detail {

inline int counter_value(const PoincareDecomposition& d, const std::string& n) {
    if (n == "p-") return d.p_minus;
    if (n == "p0") return d.p_zero;
    if (n == "p+") return d.p_plus;
    if (n == "q-") return d.q_minus;
    if (n == "q0") return d.q_zero;
    if (n == "q+") return d.q_plus;
    if (n == "r1") return d.r1;
    if (n == "r2") return d.r2;
    if (n == "r3") return d.r3;
    if (n == "r4") return d.r4;
    if (n == "r5") return d.r5;
    if (n == "r6") return d.r6;
    if (n == "h+") return d.h_plus;
    if (n == "h-") return d.h_minus;
    throw MalformedScript("unknown counter name \"" + n + "\"");
}

inline int pattern_counter(const BlockPattern& b, const std::string& n) {
    if (n == "p-") return b.p_minus;
    if (n == "p0") return b.p_zero;
    if (n == "p+") return b.p_plus;
    if (n == "q-") return b.q_minus;
    if (n == "q0") return b.q_zero;
    if (n == "q+") return b.q_plus;
    if (n == "r1") return b.r1;
    if (n == "r2") return b.r2;
    if (n == "r3") return b.r3;
    if (n == "r4") return b.r4;
    if (n == "r5") return b.r5;
    if (n == "r6") return b.r6;
    if (n == "h+") return b.h_plus;
    if (n == "h-") return b.h_minus;
    throw MalformedScript("unknown counter name \"" + n + "\"");
}

inline BlockPattern pattern_of(const PoincareDecomposition& d) {
    return {d.p_minus, d.p_zero, d.p_plus, d.q_minus, d.q_zero, d.q_plus,
            d.r1, d.r2, d.r3, d.r4, d.r5, d.r6, d.h_plus, d.h_minus};
}

// Runs one script against an optional system / tuple / profile set.
class ScriptRunner {
  public:
    ScriptRunner(const json& script, const ScriptContext& ctx) : script_(script), ctx_(ctx) {
        if (!script.is_object() || !script.contains("name") || !script.contains("steps") ||
            !script["steps"].is_array())
            throw MalformedScript("script must be an object with \"name\" and a \"steps\" array");
        rep_.script_name = script["name"].get<std::string>();
        if (script.contains("requires")) {
            const json& rq = script["requires"];
            if (rq.value("system", false) && !ctx_.system)
                throw MalformedScript(rep_.script_name + ": script requires a system config");
            if (rq.value("tuple", false) && (!ctx_.tuple))
                throw MalformedScript(rep_.script_name + ": script requires a jump tuple");
            if (rq.value("profiles", false) && !ctx_.profiles)
                throw MalformedScript(rep_.script_name + ": script requires local homology profiles");
        }
    }

    ScriptReport run() {
        size_t idx = 0;
        for (const json& step : script_["steps"]) {
            ++idx;
            if (!step.is_object() || !step.contains("kind"))
                throw MalformedScript("step " + std::to_string(idx) + ": missing \"kind\"");
            ScriptStepResult r;
            r.kind = step["kind"].get<std::string>();
            r.name = step.value("name", r.kind);
            try {
                dispatch(step, r);
            } catch (const json::exception& e) {
                throw MalformedScript("step " + std::to_string(idx) + " (" + r.name + "): " + e.what());
            } catch (const MalformedScript&) {
                throw;
            } catch (const Error& e) {
                r.verdict = Verdict::Unknown;
                r.evidence = std::string("not evaluable: ") + e.what();
            }
            rep_.steps.push_back(std::move(r));
        }
        return rep_;
    }

  private:
    const json& script_;
    ScriptContext ctx_;
    ScriptReport rep_;
    std::optional<VerificationReport> verification_;
    std::optional<MorseWindow> window_;

    // --- context access -------------------------------------------------

    const System& system() const {
        if (!ctx_.system) throw MalformedScript("step needs a system but none was supplied");
        return *ctx_.system;
    }
    const JumpTuple& tuple() const {
        if (!ctx_.tuple) throw MalformedScript("step needs a jump tuple but none was supplied");
        return *ctx_.tuple;
    }
    size_t geo_index(const std::string& name) const {
        const System& sys = system();
        for (size_t k = 0; k < sys.size(); ++k)
            if (sys[k].name == name) return k;
        throw MalformedScript("no geodesic named \"" + name + "\" in the system");
    }
    const GeodesicDescriptor& geo(const json& step) const {
        return system()[geo_index(step.at("geodesic").get<std::string>())];
    }
    Int m_of(const json& step) const {
        return tuple().m.at(geo_index(step.at("geodesic").get<std::string>()));
    }
    const LocalHomologyProfile* profile_for(const std::string& name) const {
        if (!ctx_.profiles) return nullptr;
        auto it = ctx_.profiles->find(name);
        return it == ctx_.profiles->end() ? nullptr : &it->second;
    }
    const VerificationReport& verification() {
        if (!verification_) verification_ = verify_tuple(tuple(), system(), ctx_.prec);
        return *verification_;
    }
    const MorseWindow& window() {
        if (!window_) {
            static const std::map<std::string, LocalHomologyProfile> empty;
            window_ = morse_window(system(), tuple(), ctx_.profiles ? *ctx_.profiles : empty, ctx_.prec);
        }
        return *window_;
    }
    int betti_off(const Int& off) const { return betti_s4(2 * tuple().N + off); }
    void emit(const std::string& s) { rep_.emissions.push_back(s); }

    static void set(ScriptStepResult& r, bool ok, std::string ev) {
        r.verdict = ok ? Verdict::Pass : Verdict::Fail;
        r.evidence = std::move(ev);
    }

    // Strictly decide lo < value < hi (lo/hi optional) for a mean-index value.
    Verdict value_in(const MeanIndexValue& v, const std::optional<Rat>& lo,
                     const std::optional<Rat>& hi) const {
        if (v.is_exact()) {
            bool ok = (!lo || v.rational_part > *lo) && (!hi || v.rational_part < *hi);
            return ok ? Verdict::Pass : Verdict::Fail;
        }
        Rat width(1, 100);
        const Rat max_w = ctx_.prec.max_width();
        for (;;) {
            RatInterval iv = v.evaluate(width);
            bool above = !lo || iv.strictly_above(*lo);
            bool below = !hi || iv.strictly_below(*hi);
            if (above && below) return Verdict::Pass;
            if ((lo && !(iv.hi > *lo)) || (hi && !(iv.lo < *hi))) return Verdict::Fail;
            if (width <= max_w) return Verdict::Unknown;
            width = std::max(Rat(width / 1000), max_w);
        }
    }

    // --- dispatch --------------------------------------------------------

    void dispatch(const json& step, ScriptStepResult& r) {
        const std::string& kind = r.kind;
        if (kind == "Axiom") return axiom(step, r);
        if (kind == "Hypothesis" || kind == "ParityFact" || kind == "IdentityCheck")
            return check_step(step, r);
        if (kind == "BettiLowerBound") return betti_bound(step, r);
        if (kind == "WindowPartition") return window_partition(step, r);
        if (kind == "Exclusivity") return exclusivity(step, r);
        if (kind == "JumpIdentity") return jump_identity(step, r);
        if (kind == "Classification") return classification(step, r);
        if (kind == "Contradiction") return contradiction(step, r);
        throw MalformedScript("unknown step kind \"" + kind + "\"");
    }

    void axiom(const json& step, ScriptStepResult& r) {
        rep_.conditional = true;
        r.verdict = Verdict::Pass;
        r.evidence = "accepted as an external axiom: " + step.value("statement", std::string("(unstated)"));
    }

    // Hypothesis / ParityFact / IdentityCheck share a dispatch on "check".
    void check_step(const json& step, ScriptStepResult& r) {
        std::string c = step.at("check").get<std::string>();
        if (c == "system_size") {
            size_t expect = step.at("expect").get<size_t>();
            set(r, system().size() == expect,
                "system has " + std::to_string(system().size()) + " geodesics");
        } else if (c == "tuple_verified") {
            const auto& v = verification();
            std::string ev = "N=" + tuple().N.str() + ", m=(";
            for (size_t k = 0; k < tuple().m.size(); ++k) ev += (k ? "," : "") + tuple().m[k].str();
            ev += ")";
            set(r, v.verified(), ev + (v.verified() ? ": all jump identities hold" : ": verification failed"));
        } else if (c == "pinched") {
            bool ok = true;
            for (const auto& g : verification().geodesics) ok = ok && g.pinched;
            set(r, ok, ok ? "index growth and mean-index bounds hold for every geodesic"
                          : "a geodesic fails the pinching predicates");
        } else if (c == "counters_zero") {
            const auto& g = geo(step);
            std::string bad;
            for (const auto& n : step.at("counters"))
                if (counter_value(g.decomp, n.get<std::string>()) != 0) bad += " " + n.get<std::string>();
            set(r, bad.empty(), bad.empty() ? g.name + ": all listed multiplicities vanish"
                                            : g.name + ": nonzero" + bad);
        } else if (c == "counter_at_least") {
            const auto& g = geo(step);
            std::string n = step.at("counter").get<std::string>();
            int v = counter_value(g.decomp, n), min = step.at("min").get<int>();
            set(r, v >= min, g.name + ": " + n + "=" + std::to_string(v));
        } else if (c == "irrationally_elliptic") {
            const auto& g = geo(step);
            const auto& d = g.decomp;
            bool ok = d.r2 == 3 && d.p_minus + d.p_zero + d.p_plus + d.q_minus + d.q_zero +
                                        d.q_plus + d.r1 + d.r3 + d.r4 + d.r5 + d.r6 + d.h() == 0;
            set(r, ok, g.name + ": r2=" + std::to_string(d.r2) +
                           (ok ? ", three irrational rotations and nothing else" : ", not irrationally elliptic"));
        } else if (c == "initial_index") {
            const auto& g = geo(step);
            Int expect = json_int(step.at("value"), "value");
            set(r, g.initial_index == expect, "i(" + g.name + ")=" + g.initial_index.str());
        } else if (c == "emit_initial_index") {
            const auto& g = geo(step);
            emit("i(" + g.name + ")=" + g.initial_index.str());
            set(r, true, "i(" + g.name + ")=" + g.initial_index.str() + ", parity " +
                             std::to_string(g.decomp.index_parity()) + " forced by the decomposition");
        } else if (c == "mean_index_in") {
            const auto& g = geo(step);
            std::optional<Rat> lo, hi;
            if (step.contains("above")) lo = json_rat(step["above"], "above");
            if (step.contains("below")) hi = json_rat(step["below"], "below");
            r.verdict = value_in(mean_index(g), lo, hi);
            r.evidence = g.name + ": mean index strictly inside (" +
                         (lo ? rat_str(*lo) : "-inf") + ", " + (hi ? rat_str(*hi) : "inf") + ") is " +
                         verdict_str(r.verdict);
        } else if (c == "mean_index_value") {
            const auto& g = geo(step);
            MeanIndexValue v = mean_index(g);
            Rat expect = json_rat(step.at("equals"), "equals");
            bool ok = v.is_exact() && v.rational_part == expect;
            if (ok && step.value("emit", false)) emit("ihat(" + g.name + ")=" + rat_str(expect));
            set(r, ok, g.name + ": mean index " + (v.is_exact() ? rat_str(v.rational_part) : "irrational"));
        } else if (c == "divides") {
            Int by = json_int(step.at("by"), "by");
            set(r, tuple().N % by == 0, by.str() + " divides N=" + tuple().N.str());
        } else if (c == "delta_equals") {
            const auto& g = geo(step);
            int d = delta_k(g, m_of(step), tuple().delta, ctx_.prec);
            int expect = step.at("value").get<int>();
            set(r, d == expect, g.name + ": Delta=" + std::to_string(d));
        } else if (c == "top_sum_offset") {
            const auto& g = geo(step);
            auto p = iterate_index(g, 2 * m_of(step), ctx_.prec);
            Int off = p.i + p.nu - 2 * tuple().N;
            Int expect = json_int(step.at("offset"), "offset");
            set(r, off == expect, "(i+nu)(" + g.name + "^{2m_k}) = 2N" + (off < 0 ? "" : "+") + off.str());
        } else if (c == "top_sum_odd") {
            const auto& g = geo(step);
            auto p = iterate_index(g, 2 * m_of(step), ctx_.prec);
            set(r, (p.i + p.nu) % 2 != 0,
                "(i+nu)(" + g.name + "^{2m_k}) = " + Int(p.i + p.nu).str());
        } else if (c == "iterate_value") {
            const auto& g = geo(step);
            Int m = json_int(step.at("m"), "m");
            auto p = iterate_index(g, m, ctx_.prec);
            bool ok = true;
            std::string ev = "i(" + g.name + "^" + m.str() + ")=" + p.i.str() + ", nu=" + std::to_string(p.nu);
            if (step.contains("i")) ok = ok && p.i == json_int(step["i"], "i");
            if (step.contains("nu")) ok = ok && Int(p.nu) == json_int(step["nu"], "nu");
            if (ok && step.value("emit", false)) emit("i(" + g.name + "^" + m.str() + ")=" + p.i.str());
            set(r, ok, ev);
        } else if (c == "euler_hat") {
            const auto& g = geo(step);
            Rat v = euler_hat(g, profile_for(g.name), ctx_.prec);
            Rat expect = json_rat(step.at("expect"), "expect");
            if (v == expect) emit("chi_hat(" + g.name + ")=" + rat_str(v));
            set(r, v == expect, "chi_hat(" + g.name + ")=" + rat_str(v));
        } else if (c == "forward_shift") {
            const auto& g = geo(step);
            Int m = json_int(step.at("m"), "m");
            Int lhs = iterate_i(g, 2 * m_of(step) + m, ctx_.prec);
            Int rhs = 2 * tuple().N + iterate_i(g, m, ctx_.prec);
            set(r, lhs == rhs, "i(" + g.name + "^{2m_k+" + m.str() + "}) = 2N+" +
                                   Int(rhs - 2 * tuple().N).str());
        } else if (c == "betti_window_sum") {
            Int from = json_int(step.at("from"), "from"), to = json_int(step.at("to"), "to");
            Int expect = json_int(step.at("expect"), "expect");
            Int sum = 0;
            for (Int off = from; off <= to; ++off)
                sum += Int(((2 * tuple().N + off) % 2 == 0 ? 1 : -1) * betti_off(off));
            set(r, sum == expect, "alternating betti sum over degrees 2N+" + from.str() + "..2N+" +
                                      to.str() + " equals " + sum.str());
        } else if (c == "alternating_sum_chi_hat") {
            Rat ws = json_rat(step.at("window_sum"), "window_sum");
            Rat other = json_rat(step.at("other_contributions"), "other_contributions");
            Rat ext = json_rat(step.at("extension"), "extension");
            Rat n = json_rat(step.at("period"), "period");
            Rat expect = json_rat(step.at("expect"), "expect");
            Rat got = (ws - other - ext) / n;
            if (got == expect && step.value("emit", false)) emit("chi_hat=" + rat_str(got));
            set(r, got == expect,
                "(" + rat_str(ws) + " - (" + rat_str(other) + ") - (" + rat_str(ext) + ")) / " +
                    rat_str(n) + " = " + rat_str(got));
        } else if (c == "enumeration_count") {
            size_t n = enumerate_patterns().size();
            set(r, n == step.at("expect").get<size_t>(),
                "exhaustive budget-3 enumeration yields " + std::to_string(n) + " patterns");
        } else if (c == "iterate_square_cases") {
            // Possible values of i(c^2) for a purely irrational-rotation
            // decomposition: 2i - 3r + 2*sum(E(2t)), each E(2t) in {1,2}.
            int i0 = step.at("initial_index").get<int>();
            int rr = step.at("rotations").get<int>();
            int mn = step.value("min", 0);
            std::set<int> got;
            for (int k = rr; k <= 2 * rr; ++k)
                if (2 * i0 - 3 * rr + 2 * k >= mn) got.insert(2 * i0 - 3 * rr + 2 * k);
            std::set<int> expect;
            for (const auto& v : step.at("expect")) expect.insert(v.get<int>());
            std::string ev = "i(c^2) in {";
            for (auto it = got.begin(); it != got.end(); ++it)
                ev += (it == got.begin() ? "" : ",") + std::to_string(*it);
            set(r, got == expect, ev + "}");
        } else if (c == "window_tail_bounds") {
            const auto& g = geo(step);
            auto rep = verify_lemma_3_2(g, tuple(), geo_index(g.name), ctx_.prec);
            std::string ev = g.name + ": " + std::to_string(rep.steps.size()) + " steps";
            for (const auto& s : rep.steps)
                if (s.verdict != Verdict::Pass) { ev = g.name + ": " + s.name + " " + verdict_str(s.verdict); break; }
            r.verdict = rep.verdict();
            r.evidence = ev;
        } else if (c == "window_tail_bounds_all") {
            window_tail_bounds_all(step, r);
        } else {
            throw MalformedScript("unknown check \"" + c + "\"");
        }
    }

    // Exhaustive driver: every budget-3 pattern, given a pinching-valid
    // initial index, admits a jump iterate whose window-tail bounds verify.
    void window_tail_bounds_all(const json& step, ScriptStepResult& r) {
        JumpSearchParams sp;
        sp.eps = step.contains("eps") ? json_rat(step["eps"], "eps") : Rat(1, 10000);
        sp.delta = step.contains("delta") ? json_rat(step["delta"], "delta") : Rat(1, 10000);
        sp.N_limit = step.contains("N_limit") ? json_int(step["N_limit"], "N_limit") : Int(1000000);
        int max_index = step.value("max_index", 21);
        auto patterns = enumerate_patterns();
        size_t ok = 0;
        std::string first_fail;
        for (const BlockPattern& b : patterns) {
            AngleSupply supply;
            supply.shared_irrational = true;
            PoincareDecomposition d = instantiate(b, supply);
            bool done = false;
            for (Int i0 = d.index_parity() ? 3 : 4; i0 <= max_index && !done; i0 += 2) {
                GeodesicDescriptor g = make_descriptor(b.label(), d, i0);
                if (iterate_i(g, 2, ctx_.prec) < 9) continue;
                auto pin = pinching_predicates(g, 100, ctx_.prec);
                if (pin.index_growth != Verdict::Pass || pin.mean_above_5 != Verdict::Pass) continue;
                std::vector<JumpTuple> ts;
                try {
                    ts = find_jump_tuples({g}, sp, ctx_.prec);
                } catch (const SearchExhausted&) {
                    continue;
                }
                auto rep = verify_lemma_3_2(g, ts[0], 0, ctx_.prec);
                if (rep.verdict() == Verdict::Pass) {
                    done = true;
                } else if (rep.verdict() == Verdict::Fail) {
                    if (first_fail.empty())
                        first_fail = b.label() + " at i(c)=" + i0.str();
                    break;
                }
            }
            if (done) ++ok;
            else if (first_fail.empty()) first_fail = b.label() + ": no pinching-valid index admitted a tuple";
        }
        bool all = ok == patterns.size();
        r.verdict = all ? Verdict::Pass : Verdict::Fail;
        r.evidence = std::to_string(ok) + "/" + std::to_string(patterns.size()) +
                     " patterns verified" + (all ? "" : ("; first failure: " + first_fail));
    }

    void betti_bound(const json& step, ScriptStepResult& r) {
        Int deg;
        std::string label;
        if (step.contains("offset")) {
            Int off = json_int(step["offset"], "offset");
            deg = 2 * tuple().N + off;
            label = "b_{2N" + std::string(off < 0 ? "" : "+") + off.str() + "}";
        } else {
            deg = json_int(step.at("degree"), "degree");
            label = "b_" + deg.str();
        }
        int expect = step.at("expect").get<int>();
        int b = betti_s4(deg);
        set(r, b == expect, label + " = " + std::to_string(b));
    }

    void window_partition(const json& step, ScriptStepResult& r) {
        Int off = json_int(step.at("offset"), "offset");
        const auto& w = window();
        auto it = w.rows.find(off);
        if (it == w.rows.end()) throw MalformedScript("offset outside the assembled window");
        if (step.contains("m_offsets")) {
            std::set<Int> expect, got;
            for (const auto& v : step["m_offsets"]) expect.insert(json_int(v, "m_offsets"));
            for (const auto& e : it->second) got.insert(e.m - 2 * tuple().m[e.k]);
            if (expect != got) {
                set(r, false, "contributor iterates disagree with the partition");
                return;
            }
        }
        Quantity total = w.total(off);
        std::string ev = "M_{2N" + std::string(off < 0 ? "" : "+") + off.str() + "} = " + total.str();
        if (step.contains("assert_total")) {
            Int v = json_int(step["assert_total"], "assert_total");
            if (total.is_exact()) set(r, total.lo == v, ev);
            else if (total.lo > v || (total.hi && *total.hi < v)) set(r, false, ev);
            else { r.verdict = Verdict::Unknown; r.evidence = ev + " (not pinned)"; }
        } else if (step.contains("at_least")) {
            Int v = json_int(step["at_least"], "at_least");
            if (total.lo >= v) set(r, true, ev);
            else if (total.hi && *total.hi < v) set(r, false, ev);
            else { r.verdict = Verdict::Unknown; r.evidence = ev + " (not pinned)"; }
        } else {
            set(r, true, ev);
        }
    }

    // An exact hit at an endpoint degree of one iterate zeroes the iterate's
    // other window degrees.
    void exclusivity(const json& step, ScriptStepResult& r) {
        const auto& g = geo(step);
        Int m = 2 * m_of(step) + json_int(step.at("m_offset"), "m_offset");
        Int q = 2 * tuple().N + json_int(step.at("at_offset"), "at_offset");
        auto p = iterate_index(g, m, ctx_.prec);
        bool endpoint = q == p.i || q == p.i + p.nu;
        set(r, endpoint, g.name + "^" + m.str() + ": degree " + q.str() +
                             (endpoint ? " is an endpoint of [i, i+nu]" : " is interior"));
    }

    void jump_identity(const json& step, ScriptStepResult& r) {
        const auto& g = geo(step);
        const auto& d = g.decomp;
        const Int M = m_of(step);
        const Int twoN = 2 * tuple().N;
        std::string id = step.at("identity").get<std::string>();
        if (id == "forward") {
            Int m = json_int(step.at("m"), "m");
            Int lhs = iterate_i(g, 2 * M + m, ctx_.prec), rhs = twoN + iterate_i(g, m, ctx_.prec);
            set(r, lhs == rhs, "i(2m_k+" + m.str() + ") = " + lhs.str() + " = 2N + i(" + m.str() + ")");
        } else if (id == "backward") {
            Int m = json_int(step.at("m"), "m");
            int Q = q_of_m(g, M, m, ctx_.prec);
            Int lhs = iterate_i(g, 2 * M - m, ctx_.prec);
            Int rhs = twoN - iterate_i(g, m, ctx_.prec) - 2 * (d.s_plus_at_one() + Q);
            set(r, lhs == rhs, "i(2m_k-" + m.str() + ") = " + lhs.str());
        } else if (id == "nu") {
            Int m = json_int(step.at("m"), "m");
            int base = iterate_nu(g, m, ctx_.prec);
            bool ok = iterate_nu(g, 2 * M + m, ctx_.prec) == base &&
                      (2 * M - m < 1 || iterate_nu(g, 2 * M - m, ctx_.prec) == base);
            set(r, ok, "nu(2m_k+-" + m.str() + ") = nu(" + m.str() + ") = " + std::to_string(base));
        } else if (id == "even") {
            int D = delta_k(g, M, tuple().delta, ctx_.prec);
            Int lhs = iterate_i(g, 2 * M, ctx_.prec);
            Int rhs = twoN - (d.s_plus_at_one() + d.c_total(ctx_.prec) - 2 * D);
            set(r, lhs == rhs, "i(2m_k) = " + lhs.str() + " with Delta = " + std::to_string(D));
        } else if (id == "even_sum") {
            int D = delta_k(g, M, tuple().delta, ctx_.prec);
            auto p = iterate_index(g, 2 * M, ctx_.prec);
            Int rhs = twoN + d.p_zero + d.p_plus + d.q_minus + d.q_zero + d.r1 + 2 * d.r5 -
                      d.r2 - 2 * d.r4 + 2 * D;
            set(r, p.i + p.nu == rhs, "(i+nu)(2m_k) = " + Int(p.i + p.nu).str());
        } else {
            throw MalformedScript("unknown jump identity \"" + id + "\"");
        }
    }

    void classification(const json& step, ScriptStepResult& r) {
        std::string win = step.at("window").get<std::string>();
        int q = step.at("q").get<int>();
        auto classes = win == "odd"    ? classify_odd_window(q)
                       : win == "even" ? classify_even_window(q)
                                       : throw MalformedScript("window must be \"odd\" or \"even\"");
        bool ok = true;
        std::string ev = std::to_string(classes.size()) + " classes";
        if (step.contains("expect")) {
            std::map<std::string, Int> expect, got;
            for (const auto& e : step["expect"])
                expect[e.at("label").get<std::string>()] = json_int(e.at("index"), "index");
            for (const auto& c : classes) got[c.label] = c.initial_index;
            ok = expect == got;
            if (!ok) ev += " (mismatch with the expected class list)";
        }
        if (step.value("emit", false))
            for (const auto& c : classes)
                emit("class " + c.label + (c.constraint.empty() ? "" : " [" + c.constraint + "]") +
                     ": " + (win == "odd" ? "i(c)=" : "i(c^2)=") + c.initial_index.str());
        if (step.contains("member")) {
            const System& sys = system();
            const auto& g = sys[geo_index(step["member"].get<std::string>())];
            BlockPattern pat = pattern_of(g.decomp);
            bool found = false;
            for (const auto& c : classes)
                for (const auto& m : c.members)
                    if (m == pat && (win != "odd" || c.initial_index == g.initial_index)) {
                        found = true;
                        ev += "; " + g.name + " realizes class " + c.label;
                    }
            ok = ok && found;
            if (!found) ev += "; " + g.name + " matches no class";
        }
        set(r, ok, ev);
    }

    void contradiction(const json& step, ScriptStepResult& r) {
        std::string rule = step.at("rule").get<std::string>();
        if (rule == "pigeonhole_zero_below_betti") {
            // If every available contributor is pinned elsewhere, the Morse
            // count at this degree is 0, below the computed Betti number.
            Int off = json_int(step.at("offset"), "offset");
            int b = betti_off(off);
            int supply = step.value("supply", 0);
            set(r, supply < b,
                "b_{2N" + std::string(off < 0 ? "" : "+") + off.str() + "} = " + std::to_string(b) +
                    " exceeds the remaining supply " + std::to_string(supply) +
                    (step.contains("because") ? " (" + step["because"].get<std::string>() + ")" : ""));
        } else if (rule == "single_degree_gap") {
            const auto& g = geo(step);
            Int m = 2 * m_of(step) + json_int(step.at("m_offset"), "m_offset");
            int nu = iterate_nu(g, m, ctx_.prec);
            Int a = json_int(step.at("offsets").at(0), "offsets"),
                bo = json_int(step.at("offsets").at(1), "offsets");
            bool ok = nu == 0 && a != bo && betti_off(a) >= 1 && betti_off(bo) >= 1;
            set(r, ok, g.name + "^" + m.str() + " is nondegenerate (nu=" + std::to_string(nu) +
                           "): one critical degree cannot cover both 2N+" + a.str() + " and 2N+" +
                           bo.str() + " (betti " + std::to_string(betti_off(a)) + ", " +
                           std::to_string(betti_off(bo)) + ")");
        } else if (rule == "euler_hat_interval_excludes_integers") {
            Rat c = json_rat(step.at("constant"), "constant");
            Rat lo = c, hi = c;
            for (const auto& t : step.at("terms")) {
                Rat num = json_rat(t.at("num"), "num");
                Rat a = json_rat(t.at("lo"), "lo"), b = json_rat(t.at("hi"), "hi");
                if (!(a > 0) || !(b > a)) throw MalformedScript("term interval must satisfy 0 < lo < hi");
                lo += num > 0 ? num / b : num / a;
                hi += num > 0 ? num / a : num / b;
            }
            Int n = rat_floor(hi);
            bool has_int = Rat(n) > lo && Rat(n) < hi;
            set(r, !has_int, "sum lies in the open interval (" + rat_str(lo) + ", " + rat_str(hi) +
                                 ") which contains no integer");
        } else if (rule == "classification_conflicts") {
            classification_conflicts(step, r);
        } else if (rule == "mean_identity_infeasible") {
            mean_identity_infeasible(step, r);
        } else if (rule == "transfer_conflict") {
            transfer_conflict(step, r);
        } else if (rule == "parity_excludes_full_nullity") {
            int claimed = step.at("claimed_index").get<int>();
            EnumerationFilters f;
            f.nullity = {{6, 6}};
            auto pats = enumerate_patterns(f);
            bool ok = !pats.empty();
            std::string ev = "nu(c)=6 forces";
            for (const auto& b : pats) {
                ev += " " + b.label();
                ok = ok && b.parity() == 1;
            }
            ok = ok && claimed % 2 == 0;
            set(r, ok, ev + ", whose index parity is odd; the claimed index " +
                           std::to_string(claimed) + " is even");
        } else if (rule == "forcing_irrational_count") {
            forcing_irrational_count(step, r);
        } else if (rule == "euler_transfer_conflict") {
            euler_transfer_conflict(step, r);
        } else {
            throw MalformedScript("unknown contradiction rule \"" + rule + "\"");
        }
    }

    void classification_conflicts(const json& step, ScriptStepResult& r) {
        std::string win = step.at("window").get<std::string>();
        int q = step.at("q").get<int>();
        auto classes = win == "odd" ? classify_odd_window(q) : classify_even_window(q);
        std::string conflict = step.at("conflict").get<std::string>();
        size_t members = 0;
        bool all = true;
        std::string why;
        for (const auto& c : classes)
            for (const auto& b : c.members) {
                ++members;
                bool bad = false;
                if (conflict == "nondegenerate") {
                    // every class member is degenerate, against nu(c^m)=0
                    bad = b.nu1() > 0 || b.nu2() > 0;
                    if (bad && why.empty()) why = c.label + " has nu(c)=" + std::to_string(b.nu1());
                } else if (conflict == "constraints") {
                    for (const auto& n : step.at("zero_counters"))
                        if (pattern_counter(b, n.get<std::string>()) != 0) {
                            bad = true;
                            if (why.empty()) why = c.label + " has " + n.get<std::string>() + " != 0";
                        }
                    if (!bad && step.contains("min_counters"))
                        for (const auto& [n, mn] : step["min_counters"].items())
                            if (pattern_counter(b, n) < mn.get<int>()) {
                                bad = true;
                                if (why.empty()) why = c.label + " has " + n + " < " + mn.dump();
                            }
                } else {
                    throw MalformedScript("unknown conflict mode \"" + conflict + "\"");
                }
                all = all && bad;
            }
        set(r, all && members > 0,
            "all " + std::to_string(members) + " class members conflict (" + why + ")");
    }

    void mean_identity_infeasible(const json& step, ScriptStepResult& r) {
        Rat lo = 0, hi = 0;
        bool open = false;
        for (const auto& t : step.at("terms")) {
            Rat chi = json_rat(t.at("chi_hat"), "chi_hat");
            const json& ih = t.at("ihat");
            if (ih.contains("point")) {
                Rat v = json_rat(ih["point"], "point");
                if (!(v > 0)) throw MeanIndexNotPositive("mean index point must be positive");
                lo += chi / v;
                hi += chi / v;
            } else if (ih.contains("geodesic")) {
                const auto& g = system()[geo_index(ih["geodesic"].get<std::string>())];
                MeanIndexValue v = mean_index(g);
                if (!v.is_exact()) throw MalformedScript("geodesic mean index is not exactly rational");
                if (!(v.rational_part > 0)) throw MeanIndexNotPositive("mean index must be positive");
                lo += chi / v.rational_part;
                hi += chi / v.rational_part;
            } else {
                Rat a = json_rat(ih.at("open").at(0), "open"), b = json_rat(ih.at("open").at(1), "open");
                if (!(a > 0) || !(b > a)) throw MalformedScript("open interval must satisfy 0 < lo < hi");
                if (chi != 0) open = true;
                lo += chi < 0 ? chi / a : chi / b;
                hi += chi < 0 ? chi / b : chi / a;
            }
        }
        Rat target = json_rat(step.at("target"), "target");
        bool excluded = open ? (target <= lo || target >= hi) : (target != lo);
        std::string iv = open ? "(" + rat_str(lo) + ", " + rat_str(hi) + ")" : rat_str(lo);
        if (excluded) {
            emit("sum interval=" + iv);
            emit("target=" + rat_str(target));
        }
        set(r, excluded, "sum of chi_hat/ihat lies in " + iv + "; the required value " +
                             rat_str(target) + " is outside");
    }

    // A window class would need nonzero critical modules at a degree at or
    // below the bottom of its support; iterate transfer carries the same
    // module to the asserted target degree, which is impossible.
    void transfer_conflict(const json& step, ScriptStepResult& r) {
        int q = step.at("q").get<int>();
        Int z = json_int(step.at("zero_offset"), "zero_offset");
        Int target = json_int(step.at("target_offset"), "target_offset");
        if (target != z + q) throw MalformedScript("target_offset must equal zero_offset + q");
        std::optional<Int> hit;
        if (step.contains("hit_offset")) hit = json_int(step["hit_offset"], "hit_offset");
        auto classes = classify_odd_window(q);
        bool all = true;
        std::string ev;
        for (const auto& c : classes) {
            const BlockPattern& b = c.members.at(0);
            bool transferable =
                b.q_minus + b.q_zero + b.q_plus + b.r1 + b.r3 + b.r4 + b.r5 + b.r6 == 0;
            Int slot = z - c.initial_index;
            std::string why;
            if (!transferable)
                why = "nullity varies between iterates";
            else if (slot < 0)
                why = "degree 2N" + (z < 0 ? z.str() : "+" + z.str()) + " lies below the support";
            else if (slot == 0 && hit)
                why = "an endpoint class would exclude the required interior hit at 2N+" + hit->str();
            if (why.empty() || !transferable) {
                all = false;
                ev = c.label + ": not eliminated";
                break;
            }
            ev += (ev.empty() ? "" : "; ") + c.label + " (i=" + c.initial_index.str() + "): " + why;
        }
        set(r, all && !classes.empty(), ev + (all ? "; transfer to 2N+" + target.str() + " is zero" : ""));
    }

    // Under the preset zero-multiplicities, the budget identity gives
    // v = 3 - 2*r2; excluding the asserted values forces r2 = 3.
    void forcing_irrational_count(const json& step, ScriptStepResult& r) {
        EnumerationFilters f;
        for (const auto& n : step.at("zero_counters")) f.forbidden.insert(n.get<std::string>());
        std::set<int> excluded;
        for (const auto& v : step.at("excluded_values")) excluded.insert(v.get<int>());
        int forced = step.at("forced_r2").get<int>();
        size_t considered = 0;
        bool ok = true;
        std::string ev;
        for (const BlockPattern& b : enumerate_patterns(f)) {
            if (b.r2 < 1) continue;
            ++considered;
            int v = b.p_zero + b.p_plus + b.q_minus + b.q_zero + b.r1 + 2 * b.r5 - b.r2;
            if (v != 3 - 2 * b.r2 || v % 2 == 0) {
                ok = false;
                ev = b.label() + ": budget identity violated";
                break;
            }
            if (excluded.count(v)) continue;  // eliminated by the asserted parity facts
            if (b.r2 != forced) {
                ok = false;
                ev = b.label() + ": survives with r2=" + std::to_string(b.r2);
                break;
            }
        }
        if (ok)
            ev = std::to_string(considered) + " patterns: v = 3-2*r2 is odd, and every survivor has r2=" +
                 std::to_string(forced);
        set(r, ok && considered > 0, ev);
    }

    // The window classes have analytical period 1, so the Euler number
    // forced by the lower betti block contradicts the reference bound.
    void euler_transfer_conflict(const json& step, ScriptStepResult& r) {
        int q = step.at("q").get<int>();
        auto sum_over = [&](const json& range) {
            Int from = json_int(range.at(0), "window"), to = json_int(range.at(1), "window");
            Int s = 0;
            for (Int off = from; off <= to; ++off)
                s += Int(((2 * tuple().N + off) % 2 == 0 ? 1 : -1) * betti_off(off));
            return s;
        };
        Int low = sum_over(step.at("low_window"));
        Int ref = sum_over(step.at("ref_window"));
        Int low_expect = json_int(step.at("low_expect"), "low_expect");
        Int ref_expect = json_int(step.at("ref_expect"), "ref_expect");
        bool ok = low == low_expect && ref == ref_expect;
        auto classes = classify_odd_window(q);
        for (const auto& c : classes) {
            AngleSupply supply;
            GeodesicDescriptor g =
                make_descriptor(c.label, instantiate(c.members.at(0), supply), c.initial_index);
            if (analytical_period(g) != 1) {
                set(r, false, c.label + ": analytical period differs from 1");
                return;
            }
        }
        // chi(c) pinned to `low` by the lower block, but the reference block
        // bounds chi(c) >= ref + 1; a contradiction whenever low < ref + 1.
        ok = ok && low < ref + 1 && !classes.empty();
        set(r, ok, "alternating betti sums: lower block " + low.str() + ", reference block " +
                       ref.str() + "; every q=" + std::to_string(q) +
                       " class has period 1, so chi(c) = " + low.str() + " contradicts chi(c) >= " +
                       Int(ref + 1).str());
    }
};

}  // namespace detail

inline ScriptReport run_proof_script(const json& script, const ScriptContext& ctx = {}) {
    return detail::ScriptRunner(script, ctx).run();
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

}  // namespace geoindex
