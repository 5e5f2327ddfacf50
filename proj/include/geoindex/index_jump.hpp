#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "geoindex/iteration.hpp"

namespace geoindex {

using System = std::vector<GeodesicDescriptor>;

// Least M with M * (theta/pi) integral for every rational angle fraction
// theta/2pi = p/q in the system: q/gcd(2p,q) must divide M.
inline Int compute_Mbar(const System& system) {
    Int M = 1;
    auto fold = [&M](const std::vector<AngleFraction>& angles) {
        for (const auto& a : angles) {
            if (!a.is_rational()) continue;
            Int p = rat_num(a.rational_value()), q = rat_den(a.rational_value());
            M = int_lcm(M, q / int_gcd(2 * p, q));
        }
    };
    for (const auto& g : system) {
        fold(g.decomp.rotation_angles);
        fold(g.decomp.nontrivial_n2_angles);
        fold(g.decomp.trivial_n2_angles);
    }
    return M;
}

struct JumpTuple {
    Int N;
    std::vector<Int> m;    // per geodesic, in system order
    std::vector<int> chi;  // 0 or 1
    Int Mbar = 1;
    Int M0 = 3;
    Rat eps;
    Rat delta;
    int mbar = 4;
};

// Q(m): splitting-number sum over spectrum points aligned with the jump
// iterate. A point at fraction t contributes S^- when both 2*m_k*t and m*t
// are integral; alignment never happens at irrational points.
inline int q_of_m(const GeodesicDescriptor& g, const Int& m_k, const Int& m, const Precision& prec = {}) {
    int total = 0;
    for (const auto& sp : g.decomp.spectrum_points(prec)) {
        if (sp.where == SpectrumPoint::Where::One) continue;
        if (!sp.rational()) continue;
        Rat t = sp.fraction();
        if (!rat_is_int(Rat(2 * m_k) * t)) continue;
        if (rat_is_int(Rat(m) * t)) total += sp.s_minus;
    }
    return total;
}

inline int q_of_m(const GeodesicDescriptor& g, const JumpTuple& t, size_t k, const Int& m,
                  const Precision& prec = {}) {
    return q_of_m(g, t.m.at(k), m, prec);
}

// Delta: S^- summed over spectrum points with 0 < {2*m_k*t} < delta. Only
// irrational points can land in the gap (rational ones align exactly at a
// jump iterate), decided by enclosure refinement.
inline int delta_k(const GeodesicDescriptor& g, const Int& m_k, const Rat& delta,
                   const Precision& prec = {}) {
    int total = 0;
    const Int two_mk = 2 * m_k;
    const Rat max_w = prec.max_width();
    for (const auto& sp : g.decomp.spectrum_points(prec)) {
        if (sp.where == SpectrumPoint::Where::One) continue;
        if (sp.s_minus == 0) continue;
        if (sp.rational()) {
            Rat f = rat_frac(Rat(two_mk) * sp.fraction());
            if (f > 0 && f < delta) total += sp.s_minus;
            continue;
        }
        const auto& w = sp.angle.witness();
        Rat width = delta / 10;
        for (;;) {
            Rat target = width / Rat(two_mk);
            if (target < max_w) target = max_w;
            RatInterval x = w->refine(target) * Rat(two_mk);
            Int fl = rat_floor(x.lo);
            if (rat_floor(x.hi) == fl && !rat_is_int(x.lo)) {
                RatInterval f(x.lo - Rat(fl), x.hi - Rat(fl));
                if (sp.conjugate) f = RatInterval(Rat(1) - f.hi, Rat(1) - f.lo);
                if (f.strictly_below(delta) && f.strictly_above(0)) { total += sp.s_minus; break; }
                if (!f.strictly_below(delta) && f.lo >= delta) break;
            }
            if (target <= max_w)
                throw PrecisionExhausted("jump-gap enclosure undecidable vs delta for " + w->description());
            width = std::max(Rat(width / 1000), max_w);
        }
    }
    return total;
}

// Per-iterate identity and bound checks for one geodesic of a tuple.
struct JumpIterateChecks {
    Int m;
    bool nu_symmetric = true;    // nullity agrees at 2m_k -+ m and at m
    bool forward_identity = true;  // i(2m_k+m) = 2N + i(m)
    bool backward_identity = true; // i(2m_k-m) = 2N - i(m) - 2(S^+(1)+Q(m))
    bool backward_sum_identity = true;  // closed form for (i+nu)(2m_k-m)
    bool backward_window = true;  // (i+nu)(2m_k-m) <= 2N+3-3[5m/3]
    bool forward_window = true;   // i(2m_k+m) >= 2N+3[5m/3]
    bool all() const {
        return nu_symmetric && forward_identity && backward_identity && backward_sum_identity &&
               backward_window && forward_window;
    }
};

struct JumpGeodesicReport {
    std::string name;
    Int m_k;
    int chi = 0;
    bool m_k_consistent = true;  // m_k = ([N/(Mbar*ihat)] + chi)*Mbar
    bool frac_within_eps = true; // |{N/(Mbar*ihat)} - chi| < eps
    int s_plus_one = 0, c_total = 0, delta = 0, q_even = 0;
    bool pinched = false;  // initial index >= 3, mean index > 5, growth bound sampled
    std::vector<JumpIterateChecks> iterates;  // m = 1..mbar
    bool even_identity = true;      // i(2m_k) = 2N - (S^+(1) + C - 2*Delta)
    bool even_sum_identity = true;  // closed form for (i+nu)(2m_k)
    bool even_lower = true;         // i(2m_k) >= 2N - e/2
    bool even_upper = true;         // (i+nu)(2m_k) <= 2N + e/2
    bool tail_lower = true;         // (i+nu)(m) <= 2N+3-3[5mbar/3] for sampled m <= 2m_k-mbar
    bool tail_upper = true;         // i(m) >= 2N+3[5mbar/3] for sampled m >= 2m_k+mbar
    bool one_back_bound = true;     // (i+nu)(2m_k-1) <= 2N-3
    bool two_back_bound = true;     // (i+nu)(2m_k-2) <= 2N-9
    bool delta_bounded = true;      // Delta <= r2 + r4

    bool verified() const {
        bool ok = m_k_consistent && frac_within_eps && even_identity && even_sum_identity &&
                  even_lower && even_upper && delta_bounded;
        for (const auto& it : iterates)
            ok = ok && it.nu_symmetric && it.forward_identity && it.backward_identity &&
                 it.backward_sum_identity;
        if (!pinched) return ok;  // growth-dependent bounds only bind under pinching
        ok = ok && tail_lower && tail_upper && one_back_bound && two_back_bound;
        for (const auto& it : iterates) ok = ok && it.backward_window && it.forward_window;
        return ok;
    }
};

struct VerificationReport {
    Int N;
    std::vector<JumpGeodesicReport> geodesics;
    bool verified() const {
        for (const auto& g : geodesics)
            if (!g.verified()) return false;
        return !geodesics.empty();
    }
};

namespace detail {

// {N/(Mbar*ihat)} resolved to (floor, chi, passes-eps); nullopt when the
// enclosure cannot separate the fraction from the eps thresholds.
struct FracResolution {
    Int floor;
    int chi;
    bool within_eps;
};

inline std::optional<FracResolution> resolve_frac(const MeanIndexValue& ihat, const Int& Mbar,
                                                  const Int& N, const Rat& eps, const Precision& prec) {
    if (ihat.is_exact()) {
        Rat x = Rat(N) / (Rat(Mbar) * ihat.rational_part);
        Int fl = rat_floor(x);
        Rat f = x - Rat(fl);
        int chi = f < Rat(1, 2) ? 0 : 1;
        if (f == Rat(1, 2)) return std::nullopt;  // tie: no admissible chi
        Rat dist = chi == 0 ? f : Rat(1) - f;
        return FracResolution{fl, chi, dist < eps};
    }
    Rat width = eps / 8;
    const Rat max_w = prec.max_width();
    for (;;) {
        RatInterval h = ihat.evaluate(width);
        if (!h.strictly_above(0)) throw MeanIndexNotPositive("mean index enclosure not positive");
        RatInterval x = h.inverse() * (Rat(N) / Rat(Mbar));
        Int fl = rat_floor(x.lo);
        if (rat_floor(x.hi) == fl) {
            RatInterval f(x.lo - Rat(fl), x.hi - Rat(fl));
            if (f.strictly_below(eps)) return FracResolution{fl, 0, true};
            if (f.strictly_above(Rat(1) - eps)) return FracResolution{fl, 1, true};
            if (f.strictly_above(eps) && f.strictly_below(Rat(1) - eps)) {
                int chi = f.strictly_below(Rat(1, 2)) ? 0 : f.strictly_above(Rat(1, 2)) ? 1 : -1;
                if (chi >= 0) return FracResolution{fl, chi, false};
            }
        }
        if (width <= max_w) return std::nullopt;
        width = std::max(Rat(width / 1000), max_w);
    }
}

inline Int growth_floor(const Int& m) { return 3 * rat_floor(Rat(5 * m, 3)); }

}  // namespace detail

// Exact check of all jump identities and window bounds for one tuple. With
// fail_fast the cheap alignment-sensitive checks run first and a failure
// aborts the remaining (expensive) checks; the report is then partial but
// verified() is already false.
inline VerificationReport verify_tuple(const JumpTuple& t, const System& system,
                                       const Precision& prec = {}, bool fail_fast = false) {
    if (t.m.size() != system.size() || t.chi.size() != system.size())
        throw ValidationError("tuple arity does not match system");
    VerificationReport rep;
    rep.N = t.N;
    const Int twoN = 2 * t.N;
    for (size_t k = 0; k < system.size(); ++k) {
        const GeodesicDescriptor& g = system[k];
        const auto& d = g.decomp;
        JumpGeodesicReport gr;
        gr.name = g.name;
        gr.m_k = t.m[k];
        gr.chi = t.chi[k];
        if (gr.m_k < 1) throw ValidationError(g.name + ": jump iterate must be >= 1");
        const Int M = gr.m_k;

        auto res = detail::resolve_frac(mean_index(g), t.Mbar, t.N, t.eps, prec);
        if (!res) {
            gr.m_k_consistent = gr.frac_within_eps = false;
        } else {
            gr.m_k_consistent = (Int(res->floor + res->chi) * t.Mbar == M) && res->chi == gr.chi;
            gr.frac_within_eps = res->within_eps;
        }

        gr.s_plus_one = d.s_plus_at_one();
        gr.c_total = d.c_total(prec);
        gr.delta = delta_k(g, M, t.delta, prec);
        gr.delta_bounded = gr.delta <= d.r2 + d.r4;

        {
            auto even = iterate_index(g, 2 * M, prec);
            gr.even_identity = even.i == twoN - (gr.s_plus_one + gr.c_total - 2 * gr.delta);
            gr.even_sum_identity =
                even.i + even.nu == twoN + d.p_zero + d.p_plus + d.q_minus + d.q_zero + d.r1 +
                                        2 * d.r5 - d.r2 - 2 * d.r4 + 2 * gr.delta;
            int half_e = d.elliptic_height() / 2;
            gr.even_lower = even.i >= twoN - half_e;
            gr.even_upper = even.i + even.nu <= twoN + half_e;
        }
        if (fail_fast && !(gr.m_k_consistent && gr.frac_within_eps && gr.delta_bounded &&
                           gr.even_identity && gr.even_sum_identity && gr.even_lower &&
                           gr.even_upper)) {
            rep.geodesics.push_back(std::move(gr));
            return rep;
        }

        {
            auto pin = pinching_predicates(g, std::min(Int(100), Int(2 * M + t.mbar)), prec);
            gr.pinched = g.initial_index >= 3 && pin.index_growth == Verdict::Pass &&
                         pin.mean_above_5 == Verdict::Pass;
        }

        auto phi_sum = [&](const std::vector<AngleFraction>& angles, const Int& m) {
            int s = 0;
            for (const auto& a : angles) s += a.phi_times(m, prec);
            return s;
        };

        for (Int m = 1; m <= t.mbar; ++m) {
            JumpIterateChecks ic;
            ic.m = m;
            auto base = iterate_index(g, m, prec);
            auto fwd = iterate_index(g, 2 * M + m, prec);
            ic.forward_identity = fwd.i == twoN + base.i;
            ic.forward_window = fwd.i >= twoN + detail::growth_floor(m);
            ic.nu_symmetric = fwd.nu == base.nu;
            if (2 * M - m >= 1) {
                auto bwd = iterate_index(g, 2 * M - m, prec);
                ic.nu_symmetric = ic.nu_symmetric && bwd.nu == base.nu;
                int Q = q_of_m(g, M, m, prec);
                ic.backward_identity = bwd.i == twoN - base.i - 2 * (gr.s_plus_one + Q);
                Int even_term = m % 2 == 0 ? Int(d.q_minus - d.q_plus) : Int(0);
                // Counters must cover all angles in the phi sums: irrational
                // entries contribute phi = 1 and cancel against r4/r6.
                Int rhs = twoN - base.i - d.p_minus + d.p_plus + even_term +
                          2 * (d.r5 + d.r6 - phi_sum(d.trivial_n2_angles, m)) -
                          2 * (d.r3 + d.r4 - phi_sum(d.nontrivial_n2_angles, m));
                ic.backward_sum_identity = bwd.i + bwd.nu == rhs;
                ic.backward_window = bwd.i + bwd.nu <= twoN + 3 - detail::growth_floor(m);
            }
            gr.iterates.push_back(ic);
        }

        if (2 * M - 1 >= 1) {
            auto p1 = iterate_index(g, 2 * M - 1, prec);
            gr.one_back_bound = p1.i + p1.nu <= twoN - 3;
        }
        if (2 * M - 2 >= 1) {
            auto p2 = iterate_index(g, 2 * M - 2, prec);
            gr.two_back_bound = p2.i + p2.nu <= twoN - 9;
        }

        // Window tails, checked at the boundary iterate and nearby samples
        // (the interior follows from index growth, property-tested separately).
        Int lo_edge = 2 * M - t.mbar;
        Int bound_lo = twoN + 3 - detail::growth_floor(t.mbar);
        for (Int j = 0; j < 16 && lo_edge - j >= 1; ++j) {
            auto p = iterate_index(g, lo_edge - j, prec);
            if (p.i + p.nu > bound_lo) { gr.tail_lower = false; break; }
        }
        Int hi_edge = 2 * M + t.mbar;
        Int bound_hi = twoN + detail::growth_floor(t.mbar);
        for (Int j = 0; j < 16; ++j) {
            if (iterate_i(g, hi_edge + j, prec) < bound_hi) { gr.tail_upper = false; break; }
        }

        rep.geodesics.push_back(std::move(gr));
    }
    return rep;
}

struct JumpSearchParams {
    int mbar = 4;
    Rat eps = pow10_inv(6);
    Rat delta = pow10_inv(6);
    Int M0 = 3;
    int count = 1;
    Int N_limit = Int(1000000000);
};

// Linear scan over N in M0*Z: interval prefilter on the fractional parts,
// then exact verification as the acceptance gate.
inline std::vector<JumpTuple> find_jump_tuples(const System& system, const JumpSearchParams& p,
                                               const Precision& prec = {}) {
    if (system.empty()) throw ValidationError("empty system");
    if (p.M0 < 1 || p.mbar < 1 || !(p.eps > 0) || !(p.delta > 0))
        throw ValidationError("jump search parameters must be positive");
    std::vector<MeanIndexValue> hats;
    for (const auto& g : system) {
        MeanIndexValue h = mean_index(g);
        if (h.is_exact()) {
            if (!(h.rational_part > 0))
                throw MeanIndexNotPositive(g.name + ": mean index " + rat_str(h.rational_part));
        } else if (!h.evaluate(p.eps / 4).strictly_above(0)) {
            throw MeanIndexNotPositive(g.name + ": mean index enclosure reaches 0");
        }
        hats.push_back(std::move(h));
    }
    Int Mbar = compute_Mbar(system);
    // Cheap floating prefilter: a conservative slack around eps guarantees no
    // genuine candidate is skipped (error < N_limit * enclosure width plus
    // rounding, far below the slack); exact resolution remains the gate.
    const long double slack = 1e-8L;
    const long double eps_ld = p.eps.convert_to<long double>() + slack;
    std::vector<long double> inv_ld;
    for (auto& h : hats) {
        RatInterval iv = h.is_exact() ? RatInterval(h.rational_part) : h.evaluate(pow10_inv(30));
        inv_ld.push_back((Rat(1) / (Rat(Mbar) * iv.lo)).convert_to<long double>());
    }
    std::vector<JumpTuple> found;
    // Incremental fractional accumulators, resynchronized from exact N every
    // 2^20 steps so rounding drift stays orders of magnitude below the slack.
    std::vector<long double> step_frac(inv_ld.size()), acc(inv_ld.size());
    const long double M0_ld = p.M0.convert_to<long double>();
    for (size_t k = 0; k < inv_ld.size(); ++k) step_frac[k] = fmodl(M0_ld * inv_ld[k], 1.0L);
    // The counter stays in native integers (N_limit is validated to fit);
    // exact arithmetic resumes at prefilter hits.
    if (p.N_limit > Int(std::numeric_limits<int64_t>::max() / 2))
        throw ValidationError("search limit too large");
    const int64_t n_limit = p.N_limit.convert_to<int64_t>();
    const int64_t m0 = p.M0.convert_to<int64_t>();
    uint64_t ticks = 0;
    for (int64_t n = m0; n <= n_limit; n += m0, ++ticks) {
        if (ticks % (1u << 20) == 0) {
            for (size_t k = 0; k < inv_ld.size(); ++k)
                acc[k] = fmodl(static_cast<long double>(n) * inv_ld[k], 1.0L);
        } else {
            for (size_t k = 0; k < inv_ld.size(); ++k) {
                acc[k] += step_frac[k];
                if (acc[k] >= 1.0L) acc[k] -= 1.0L;
            }
        }
        bool maybe = true;
        for (size_t k = 0; k < inv_ld.size() && maybe; ++k)
            maybe = acc[k] < eps_ld || acc[k] > 1.0L - eps_ld;
        if (!maybe) continue;
        const Int N(n);
        JumpTuple t;
        t.N = N;
        t.Mbar = Mbar;
        t.M0 = p.M0;
        t.eps = p.eps;
        t.delta = p.delta;
        t.mbar = p.mbar;
        bool ok = true;
        for (size_t k = 0; k < system.size() && ok; ++k) {
            auto res = detail::resolve_frac(hats[k], Mbar, N, p.eps, prec);
            if (!res || !res->within_eps) { ok = false; break; }
            Int mk = Int(res->floor + res->chi) * Mbar;
            if (mk < 1) { ok = false; break; }
            t.m.push_back(mk);
            t.chi.push_back(res->chi);
        }
        if (!ok) continue;
        if (verify_tuple(t, system, prec, /*fail_fast=*/true).verified()) {
            found.push_back(std::move(t));
            if (int(found.size()) >= p.count) return found;
        }
    }
    if (found.empty())
        throw SearchExhausted("no common jump tuple with N <= " + p.N_limit.str() +
                              " (existence holds for some larger N)");
    return found;
}

}  // namespace geoindex
