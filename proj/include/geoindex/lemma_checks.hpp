#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geoindex/enumeration.hpp"
#include "geoindex/index_jump.hpp"

namespace geoindex {

struct Step {
    std::string name;
    Verdict verdict = Verdict::Unknown;
    std::string evidence;
};

struct StepReport {
    std::vector<Step> steps;
    bool hypothesis_failed = false;

    Verdict verdict() const {
        if (hypothesis_failed) return Verdict::Unknown;
        for (const auto& s : steps) {
            if (s.verdict == Verdict::Fail) return Verdict::Fail;
            if (s.verdict == Verdict::Unknown) return Verdict::Unknown;
        }
        return Verdict::Pass;
    }
};

namespace detail {

// The exceptional scenarios ruled out when pushing the two-back window
// bound from 2N-6 down to 2N-9: claimed value of i(c^2) plus exact values
// of p_+ + q_- (and p_- + q_+ where constrained).
struct TwoBackScenario {
    std::string name;
    int i_c2;
    int pq_sum;
    std::optional<int> pm_sum;
};

inline const std::vector<TwoBackScenario>& two_back_scenarios() {
    static const std::vector<TwoBackScenario> s{
        {"case 1: value 2N-6", 9, 3, std::nullopt},
        {"case 2(i): value 2N-7", 10, 3, std::nullopt},
        {"case 2(ii): value 2N-7", 9, 2, 0},
        {"case 3(i): value 2N-8", 11, 3, std::nullopt},
        {"case 3(ii): value 2N-8", 10, 2, 0},
        {"case 3(iii): value 2N-8", 9, 2, 1},
        {"case 3(iv): value 2N-8", 9, 1, 0},
    };
    return s;
}

// Why a pattern claiming this i(c^2) is impossible (given mean index > 5),
// or nullopt if the claim is not refuted by the scenario arithmetic.
inline std::optional<std::string> refute_two_back(const BlockPattern& b, int i_c2) {
    int parity = (b.p_minus + b.p_zero + b.q_zero + b.q_plus + b.r1 + b.r2) % 2;
    if (i_c2 % 2 != parity)
        return "i(c^2)=" + std::to_string(i_c2) + " contradicts blockwise parity " +
               std::to_string(parity);
    // 2*ihat <= i(c^2) + p- + p0 + q0 + q+ + r1 + r2 (equality only without
    // rotations), against the hypothesis 2*ihat > 10.
    int bound = i_c2 + b.p_minus + b.p_zero + b.q_zero + b.q_plus + b.r1 + b.r2;
    if (bound <= 10)
        return "2*ihat <= " + std::to_string(bound) + " <= 10 contradicts mean index > 5";
    return std::nullopt;
}

}  // namespace detail

// Verifies both window-tail bounds for one geodesic of a verified tuple,
// step by step: hypotheses, exact identities, direct estimates, and the
// exhaustive elimination of the exceptional two-back scenarios.
inline StepReport verify_lemma_3_2(const GeodesicDescriptor& g, const JumpTuple& t, size_t k,
                                   const Precision& prec = {}) {
    StepReport rep;
    const auto& d = g.decomp;
    const Int M = t.m.at(k);
    const Int twoN = 2 * t.N;

    // Hypotheses: mean index > 5 and the quadratic-iterate growth bound.
    Verdict mean_ok = compare_above(mean_index(g), Rat(5), prec);
    rep.steps.push_back({"hypothesis: mean index > 5", mean_ok,
                         mean_ok == Verdict::Pass ? "enclosure strictly above 5" : "not established"});
    Int i1 = iterate_i(g, 1, prec), i2 = iterate_i(g, 2, prec);
    bool growth = i1 >= 3 && i2 >= 9;
    rep.steps.push_back({"hypothesis: i(c) >= 3 and i(c^2) >= 9",
                         growth ? Verdict::Pass : Verdict::Fail,
                         "i(c)=" + i1.str() + ", i(c^2)=" + i2.str()});
    if (mean_ok != Verdict::Pass || !growth) {
        rep.hypothesis_failed = true;
        return rep;
    }
    if (M < 2) {
        rep.steps.push_back({"hypothesis: m_k >= 2", Verdict::Fail, "m_k = " + M.str()});
        rep.hypothesis_failed = true;
        return rep;
    }

    // One-back identity and bound.
    auto p1 = iterate_index(g, 2 * M - 1, prec);
    Int lhs1 = p1.i + p1.nu;
    bool id1 = lhs1 == twoN - i1 - d.p_minus + d.p_plus;
    rep.steps.push_back({"identity: (i+nu)(2m_k-1) = 2N - i(c) - p- + p+",
                         id1 ? Verdict::Pass : Verdict::Fail,
                         "(i+nu)(2m_k-1) = " + lhs1.str()});
    Int floor6 = i1 + d.p_minus + d.p_zero + d.r1 + d.r2;
    rep.steps.push_back({"bound: i(c) + p- + p0 + r1 + r2 >= 6",
                         floor6 >= 6 ? Verdict::Pass : Verdict::Fail, "value " + floor6.str()});
    rep.steps.push_back({"bound: (i+nu)(2m_k-1) <= 2N-3",
                         lhs1 <= twoN - 3 ? Verdict::Pass : Verdict::Fail,
                         lhs1.str() + " vs " + Int(twoN - 3).str()});

    // Two-back identity and the direct 2N-6 estimate.
    auto p2 = iterate_index(g, 2 * M - 2, prec);
    Int lhs2 = p2.i + p2.nu;
    bool id2 = lhs2 == twoN - i2 - d.p_minus + d.p_plus + d.q_minus - d.q_plus;
    rep.steps.push_back({"identity: (i+nu)(2m_k-2) = 2N - i(c^2) - p- + p+ + q- - q+",
                         id2 ? Verdict::Pass : Verdict::Fail,
                         "(i+nu)(2m_k-2) = " + lhs2.str()});
    rep.steps.push_back({"bound: (i+nu)(2m_k-2) <= 2N-6",
                         lhs2 <= twoN - 6 ? Verdict::Pass : Verdict::Fail,
                         lhs2.str() + " vs " + Int(twoN - 6).str()});

    // Exhaustive elimination of values 2N-6, 2N-7, 2N-8 over all budget-3
    // patterns matching each exceptional scenario.
    const auto all_patterns = enumerate_patterns();
    for (const auto& sc : detail::two_back_scenarios()) {
        bool all_refuted = true;
        std::string evidence;
        int matched = 0;
        for (const BlockPattern& b : all_patterns) {
            if (b.p_plus + b.q_minus != sc.pq_sum) continue;
            if (sc.pm_sum && b.p_minus + b.q_plus != *sc.pm_sum) continue;
            ++matched;
            auto why = detail::refute_two_back(b, sc.i_c2);
            if (!why) {
                all_refuted = false;
                evidence = "pattern " + b.label() + " not refuted";
                break;
            }
            if (evidence.empty()) evidence = *why;
        }
        if (matched == 0) evidence = "no matching patterns";
        rep.steps.push_back({"elimination, " + sc.name + " with i(c^2)=" + std::to_string(sc.i_c2),
                             all_refuted ? Verdict::Pass : Verdict::Fail, evidence});
    }

    rep.steps.push_back({"bound: (i+nu)(2m_k-2) <= 2N-9",
                         lhs2 <= twoN - 9 ? Verdict::Pass : Verdict::Fail,
                         lhs2.str() + " vs " + Int(twoN - 9).str()});
    return rep;
}

}  // namespace geoindex
