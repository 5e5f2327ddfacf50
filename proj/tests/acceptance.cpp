// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "geoindex/config.hpp"
#include "geoindex/enumeration.hpp"
#include "geoindex/lemma_checks.hpp"
#include "geoindex/morse.hpp"
#include "geoindex/proof_script.hpp"

using namespace geoindex;

#ifndef GEOINDEX_DATA_DIR
#define GEOINDEX_DATA_DIR "data"
#endif
#ifndef GEOINDEX_BIN
#define GEOINDEX_BIN "./geoindex"
#endif

namespace {

int g_failures = 0;

void report(int n, bool ok, const std::string& detail) {
    std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL")
              << (detail.empty() ? "" : " (" + detail + ")") << std::endl;
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string data_path(const char* file) { return std::string(GEOINDEX_DATA_DIR) + "/" + file; }

int run_cli(const std::string& args, const std::string& outfile) {
    std::string cmd = std::string(GEOINDEX_BIN) + " " + args + " > " + outfile + " 2>&1";
    int rc = std::system(cmd.c_str());
    return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// --- criteria --------------------------------------------------------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    std::map<std::string, Int> got;
    try {
        for (const auto& c : classify_odd_window(6)) got[c.label] = c.initial_index;
    } catch (const Error& e) {
        report(1, false, e.what());
        return;
    }
    double dt = seconds_since(t0);
    std::map<std::string, Int> expect{
        {"N1(1,1)*I4", 3}, {"I6", 3},          {"N1(1,1)*I2*N1(1,-1)", 4},
        {"I4*N1(1,-1)", 4}, {"I4*H(2)", 4},
    };
    report(1, got == expect && dt < 1.0,
           "odd window q=6: " + std::to_string(got.size()) + " classes in " +
               std::to_string(dt) + "s");
}

void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    std::map<std::string, Int> got;
    size_t members = 0;
    try {
        for (const auto& c : classify_even_window(12)) {
            got[c.label] = c.initial_index;
            members += c.members.size();
        }
    } catch (const Error& e) {
        report(2, false, e.what());
        return;
    }
    double dt = seconds_since(t0);
    std::map<std::string, Int> expect{
        {"I{2p0}*(-I{2q0})*H(2)", 10},
        {"N1(1,1)^p-*N1(-1,-1)^q+*I{2p0}*(-I{2q0})*N1(1,-1)^p+*N1(-1,1)^q-", 10},
        {"I{2p0}*(-I{2q0})*N1(1,-1)^p+*N1(-1,1)^q-", 10},
        {"N1(1,1)^p-*N1(-1,-1)^q+*I{2p0}*(-I{2q0})", 9},
        {"I{2p0}*(-I{2q0})", 9},
    };
    report(2, got == expect && members > 0 && dt < 1.0,
           "even window q=12: " + std::to_string(got.size()) + " families, " +
               std::to_string(members) + " members in " + std::to_string(dt) + "s");
}

std::vector<GeodesicDescriptor> g_sample;  // reused by criterion 6

void criterion_3() {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(20250823u);
    auto patterns = enumerate_patterns();
    std::uniform_int_distribution<size_t> pick(0, patterns.size() - 1);
    size_t found = 0, exhausted = 0, failures = 0;
    std::string first_failure;
    JumpSearchParams sp;  // defaults: eps = 1e-6, M0 = 3, mbar = 4
    sp.N_limit = 30000000;
    while (g_sample.size() < 120) {
        const BlockPattern& b = patterns[pick(rng)];
        AngleSupply supply;
        supply.shared_irrational = true;
        PoincareDecomposition d = instantiate(b, supply);
        std::optional<GeodesicDescriptor> chosen;
        for (Int i0 = d.index_parity() ? 3 : 4; i0 <= 21 && !chosen; i0 += 2) {
            GeodesicDescriptor g = make_descriptor(b.label(), d, i0);
            auto pin = pinching_predicates(g, 100);
            if (pin.index_growth == Verdict::Pass && pin.mean_above_5 == Verdict::Pass)
                chosen = std::move(g);
        }
        if (!chosen) continue;  // pattern admits no pinching-valid index
        g_sample.push_back(*chosen);
        try {
            auto tuples = find_jump_tuples({*chosen}, sp);
            for (const auto& tu : tuples) {
                auto rep = verify_tuple(tu, {*chosen});
                if (rep.verified()) {
                    ++found;
                } else {
                    ++failures;
                    if (first_failure.empty()) first_failure = chosen->name;
                }
            }
        } catch (const SearchExhausted&) {
            ++exhausted;  // existence only guaranteed for some larger N
        } catch (const Error& e) {
            ++failures;
            if (first_failure.empty()) first_failure = chosen->name + ": " + e.what();
        }
    }
    double dt = seconds_since(t0);
    report(3, failures == 0 && g_sample.size() >= 100 && dt < 300.0,
           std::to_string(g_sample.size()) + " descriptors, " + std::to_string(found) +
               " tuples verified, " + std::to_string(exhausted) + " exhausted, " +
               std::to_string(failures) + " failures" +
               (first_failure.empty() ? "" : " [" + first_failure + "]") + " in " +
               std::to_string(dt) + "s");
}

void criterion_4() {
    size_t mismatches = 0, checked = 0;
    std::string first;
    for (const auto& b : enumerate_patterns()) {
        AngleSupply supply;
        PoincareDecomposition d = instantiate(b, supply);
        int sp_one = 0, sm_one = 0, sm_away = 0, sp_angles = 0;
        for (const auto& sp : d.spectrum_points()) {
            if (sp.where == SpectrumPoint::Where::One) {
                sp_one += sp.s_plus;
                sm_one += sp.s_minus;
            } else {
                sm_away += sp.s_minus;
                if (sp.where == SpectrumPoint::Where::AtAngle) sp_angles += sp.s_plus;
            }
        }
        ++checked;
        bool ok = sp_one == b.p_minus + b.p_zero && sm_one == b.p_minus + b.p_zero &&
                  sm_away == b.q_zero + b.q_plus + b.r1 + b.r2 + 2 * b.r3 + 2 * b.r4 &&
                  sp_angles == b.r1 + b.r2 + 2 * b.r3 + 2 * b.r4 &&
                  d.s_plus_at_one() == sp_one && d.c_total() == sm_away;
        if (!ok) {
            ++mismatches;
            if (first.empty()) first = b.label();
        }
    }
    report(4, mismatches == 0 && checked == 260,
           std::to_string(checked) + " patterns, " + std::to_string(mismatches) + " mismatches" +
               (first.empty() ? "" : " [" + first + "]"));
}

void criterion_5() {
    const int limit = 10000;
    std::vector<int> b(limit + 1, 0);
    for (int j = 3; j <= limit; j += 2) b[j] += 1;
    for (int j = 9; j <= limit; j += 6) b[j] += 1;
    size_t mismatches = 0;
    for (int j = 0; j <= limit; ++j)
        if (betti_s4(j) != b[j]) ++mismatches;
    size_t rank2 = 0;
    for (Int N = 6; N <= 9999; N += 3)
        if (betti_s4(2 * N - 3) != 2 || betti_s4(2 * N + 3) != 2) ++rank2;
    report(5, mismatches == 0 && rank2 == 0,
           "degrees 0.." + std::to_string(limit) + ": " + std::to_string(mismatches) +
               " mismatches; 2N+-3 rank-2 violations: " + std::to_string(rank2));
}

void criterion_6() {
    size_t violations = 0, checked = 0;
    std::string first;
    for (const auto& g : g_sample) {
        Int prev = iterate_i(g, 1);
        for (Int m = 1; m <= 100; ++m) {
            ++checked;
            bool ok = bott_bound_check(g, m);
            Int next = iterate_i(g, m + 1);
            ok = ok && next >= prev;  // monotone growth under the pinching bound
            prev = next;
            if (!ok) {
                ++violations;
                if (first.empty()) first = g.name + " at m=" + m.str();
            }
        }
    }
    report(6, violations == 0 && !g_sample.empty(),
           std::to_string(checked) + " iterate checks over " + std::to_string(g_sample.size()) +
               " descriptors, " + std::to_string(violations) + " violations" +
               (first.empty() ? "" : " [" + first + "]"));
}

void criterion_7() {
    int rc1 = run_cli("prove --script " + data_path("lemma-3.2.json"), "acceptance_c7_lemma.txt");
    std::string out1 = slurp("acceptance_c7_lemma.txt");
    bool ok1 = rc1 == 0 && contains(out1, "verdict: VERIFIED") &&
               contains(out1, "260/260 patterns verified");

    int rc2 = run_cli("prove --script " + data_path("theorem-4.2.json") + " --config " +
                          data_path("tcg.json") + " --profiles " + data_path("tcg-profiles.json"),
                      "acceptance_c7_theorem.txt");
    std::string out2 = slurp("acceptance_c7_theorem.txt");
    bool ok2 = rc2 == 0 && contains(out2, "verdict: VERIFIED") && contains(out2, "i(c1)=3") &&
               contains(out2, "i(c2)=9") && contains(out2, "chi_hat(c1)=-1") &&
               contains(out2, "chi_hat(c2)=-1") &&
               contains(out2, "sum interval=(-13/20, -7/12)") && contains(out2, "target=-2/3");
    report(7, ok1 && ok2,
           std::string("window-tail script rc=") + std::to_string(rc1) +
               ", case-analysis script rc=" + std::to_string(rc2));
}

void criterion_8() {
    size_t mismatches = 0, checked = 0;
    std::string first;
    for (const auto& b : enumerate_patterns()) {
        if (b.r2 || b.r4 || b.r6) continue;  // rational angles only: exact brute force
        AngleSupply supply;                  // pool denominators are all <= 12
        PoincareDecomposition d = instantiate(b, supply);
        GeodesicDescriptor g = make_descriptor(b.label(), d, d.index_parity() ? 5 : 6);
        ++checked;
        Int n = analytical_period(g);
        Int L = 4 * nullity_period(d);
        int numax = 0;
        for (Int m = 1; m <= L; ++m) numax = std::max(numax, iterate_nu(g, m));
        Int brute = 0;
        for (Int l = 1; l <= L && brute == 0; ++l) {
            if (iterate_nu(g, l) != numax) continue;
            bool even_gaps = true;
            for (Int m = 1; m <= L && even_gaps; ++m)
                even_gaps = (iterate_i(g, m + l) - iterate_i(g, m)) % 2 == 0;
            if (even_gaps) brute = l;
        }
        if (n != brute) {
            ++mismatches;
            if (first.empty()) first = b.label();
        }
    }
    report(8, mismatches == 0 && checked > 0,
           std::to_string(checked) + " rational-angle patterns, " + std::to_string(mismatches) +
               " period mismatches" + (first.empty() ? "" : " [" + first + "]"));
}

void criterion_9() {
    struct Run {
        std::string args;
        int expect_rc;
    };
    std::vector<Run> runs = {
        {"classify --window odd --q 6 --seed 7 --format json", 0},
        {"verify-tuple --config " + data_path("tcg.json") + " --seed 7 --format json", 0},
        {"prove --script " + data_path("theorem-4.2.json") + " --config " + data_path("tcg.json") +
             " --profiles " + data_path("tcg-profiles.json") + " --seed 7 --format md",
         0},
    };
    bool ok = true;
    std::string detail;
    for (size_t i = 0; i < runs.size(); ++i) {
        std::string f1 = "acceptance_c9_" + std::to_string(i) + "a.txt";
        std::string f2 = "acceptance_c9_" + std::to_string(i) + "b.txt";
        int r1 = run_cli(runs[i].args, f1);
        int r2 = run_cli(runs[i].args, f2);
        std::string o1 = slurp(f1), o2 = slurp(f2);
        bool same = r1 == runs[i].expect_rc && r2 == runs[i].expect_rc && !o1.empty() && o1 == o2;
        ok = ok && same;
        if (!same && detail.empty()) detail = "run " + std::to_string(i) + " differs";
    }
    report(9, ok, detail.empty() ? std::to_string(runs.size()) + " commands byte-identical" : detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    return g_failures == 0 ? 0 : 1;
}
