#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "geoindex/index_jump.hpp"

namespace geoindex {

// Betti numbers of the free-loop-space quotient of S^4: 2 on {9,15,21,...},
// 1 on the remaining odd degrees >= 3, 0 elsewhere.
inline int betti_s4(const Int& j) {
    if (j < 3 || j % 2 == 0) return 0;
    return (j >= 9 && j % 3 == 0) ? 2 : 1;
}

inline int betti(const std::string& manifold, const Int& j) {
    if (manifold != "S4") throw UnsupportedManifold("betti numbers implemented for S4 only");
    return betti_s4(j);
}

// Local homology data of a geodesic: per iterate m, the vectors k_l^{+1}
// and k_l^{-1} for l in 0..nu(c^m).
struct LocalHomologyProfile {
    struct Row {
        std::vector<Int> k_plus, k_minus;
        Int k(size_t l) const { return k_plus.at(l) + k_minus.at(l); }
        Int k_signed(size_t l, int eps) const { return eps > 0 ? k_plus.at(l) : k_minus.at(l); }
    };
    std::map<Int, Row> rows;
};

// Structural constraints on a profile row (support, endpoint exclusivity,
// positive-eigenspace bottom class).
inline void validate_profile(const GeodesicDescriptor& g, const LocalHomologyProfile& p,
                             const Precision& prec = {}) {
    for (const auto& [m, row] : p.rows) {
        int nu = iterate_nu(g, m, prec);
        if (int(row.k_plus.size()) != nu + 1 || int(row.k_minus.size()) != nu + 1)
            throw ValidationError(g.name + ": profile row at m=" + m.str() + " must have length nu+1=" +
                                  std::to_string(nu + 1));
        for (size_t l = 0; l <= size_t(nu); ++l)
            if (row.k_plus[l] < 0 || row.k_minus[l] < 0)
                throw ValidationError(g.name + ": negative profile entry");
        if (row.k_minus[0] != 0)
            throw ValidationError(g.name + ": bottom class must lie in the positive eigenspace");
        if (nu == 0) {
            if (row.k(0) != 1) throw ValidationError(g.name + ": nondegenerate row must be k_0=1");
            continue;
        }
        Int ends = row.k(0) + row.k(nu);
        if (ends > 1) throw ValidationError(g.name + ": k_0 + k_nu exceeds 1 at m=" + m.str());
        if (ends == 1)
            for (int l = 1; l < nu; ++l)
                if (row.k(l) != 0)
                    throw ValidationError(g.name + ": interior classes with an endpoint hit at m=" + m.str());
    }
    // Iterate transfer: equal-nullity rows at m and a multiple must agree.
    for (const auto& [m, row] : p.rows)
        for (const auto& [m2, row2] : p.rows) {
            if (m2 <= m || m2 % m != 0) continue;
            if (iterate_nu(g, m, prec) != iterate_nu(g, m2, prec)) continue;
            if (row.k_plus != row2.k_plus || row.k_minus != row2.k_minus)
                throw ValidationError(g.name + ": iterate transfer violated between m=" + m.str() +
                                      " and m=" + m2.str());
        }
}

// Resolves the profile row for iterate m, transferring from a divisor with
// the same nullity when m itself has no row.
inline const LocalHomologyProfile::Row* resolve_row(const GeodesicDescriptor& g,
                                                    const LocalHomologyProfile& p, const Int& m,
                                                    const Precision& prec = {}) {
    auto it = p.rows.find(m);
    if (it != p.rows.end()) return &it->second;
    int nu = iterate_nu(g, m, prec);
    for (const auto& [n, row] : p.rows)
        if (m % n == 0 && iterate_nu(g, n, prec) == nu) return &row;
    return nullptr;
}

// Rank of the degree-q critical module of c^m.
inline Int critical_module_rank(const GeodesicDescriptor& g, const LocalHomologyProfile* profile,
                                const Int& m, const Int& q, const Precision& prec = {}) {
    auto [i, nu] = iterate_index(g, m, prec);
    if (q < i || q > i + nu) return 0;
    int eps = (i - g.initial_index) % 2 == 0 ? 1 : -1;
    if (nu == 0) return eps > 0 ? 1 : 0;  // hit exactly at q = i(c^m), positive eigenspace
    const LocalHomologyProfile::Row* row = profile ? resolve_row(g, *profile, m, prec) : nullptr;
    if (!row)
        throw ProfileMissing(g.name + ": no local homology row for degenerate iterate m=" + m.str());
    return row->k_signed(size_t(Int(q - i)), eps);
}

// Exact / range / unknown integer used throughout window assembly.
struct Quantity {
    Int lo = 0;
    std::optional<Int> hi;  // absent: no upper bound known

    static Quantity exact(Int v) { return {v, v}; }
    static Quantity range(Int l, Int h) { return {std::move(l), std::move(h)}; }
    static Quantity unknown() { return {0, std::nullopt}; }
    bool is_exact() const { return hi && *hi == lo; }
    Quantity operator+(const Quantity& o) const {
        Quantity s;
        s.lo = lo + o.lo;
        if (hi && o.hi) s.hi = *hi + *o.hi;
        return s;
    }
    std::string str() const {
        if (is_exact()) return lo.str();
        if (hi) return "[" + lo.str() + "," + hi->str() + "]";
        return ">=" + lo.str();
    }
};

// One contributor M_q(k,m) inside a window degree.
struct WindowEntry {
    size_t k;  // geodesic index in the system
    Int m;
    Quantity value;
};

struct MorseWindow {
    Int N;
    std::map<Int, std::vector<WindowEntry>> rows;  // keyed by q - 2N
    Quantity total(const Int& offset) const {
        Quantity t = Quantity::exact(0);
        auto it = rows.find(offset);
        if (it == rows.end()) return t;
        for (const auto& e : it->second) t = t + e.value;
        return t;
    }
};

namespace detail {

inline Quantity window_value(const GeodesicDescriptor& g, const LocalHomologyProfile* profile,
                             const Int& m, const Int& q, const Precision& prec) {
    auto [i, nu] = iterate_index(g, m, prec);
    if (q < i || q > i + nu) return Quantity::exact(0);
    if (nu == 0 || (profile && resolve_row(g, *profile, m, prec)))
        return Quantity::exact(critical_module_rank(g, profile, m, q, prec));
    // Endpoint degrees carry at most one class even without a profile.
    if (q == i || q == i + nu) return Quantity::range(0, 1);
    return Quantity::unknown();
}

}  // namespace detail

// Morse-type numbers over the jump window [2N-9, 2N+17], with contributors
// restricted per the window partition lemma. Values are exact where the
// normal form or a profile determines them, otherwise three-valued.
inline MorseWindow morse_window(const System& system, const JumpTuple& t,
                                const std::map<std::string, LocalHomologyProfile>& profiles,
                                const Precision& prec = {}) {
    auto rep = verify_tuple(t, system, prec);
    if (!rep.verified()) throw TupleNotVerified("window assembly requires a verified tuple");
    for (const auto& gr : rep.geodesics)
        if (!gr.pinched) throw TupleNotVerified(gr.name + ": window partition needs the pinching predicates");

    MorseWindow w;
    w.N = t.N;
    auto contributors = [&](const Int& off) -> std::vector<Int> {
        // offsets of m around 2m_k for each row of the partition
        if (off == -9) return {-1, -2};
        if (off >= -8 && off <= -4) return {-1};
        if (off == -3) return {-1, 0};
        if (off >= -2 && off <= 2) return {0};
        if (off == 3) return {0, 1};
        if (off >= 4 && off <= 8) return {1};
        if (off >= 9 && off <= 14) return {1, 2};
        return {1, 2, 3};  // 15..17
    };
    for (Int off = -9; off <= 17; ++off) {
        std::vector<WindowEntry>& row = w.rows[off];
        for (size_t k = 0; k < system.size(); ++k) {
            const LocalHomologyProfile* prof = nullptr;
            if (auto it = profiles.find(system[k].name); it != profiles.end()) prof = &it->second;
            for (const Int& dm : contributors(off)) {
                Int m = 2 * t.m[k] + dm;
                if (m < 1) continue;
                row.push_back({k, m, detail::window_value(system[k], prof, m, 2 * t.N + off, prec)});
            }
        }
    }
    // Endpoint exclusivity: an exact endpoint hit zeroes the same iterate's
    // other degrees within the window.
    for (auto& [off, row] : w.rows) {
        for (auto& e : row) {
            if (!e.value.is_exact() || e.value.lo != 1) continue;
            auto [i, nu] = iterate_index(system[e.k], e.m, prec);
            Int q = 2 * t.N + off;
            if (q != i && q != i + nu) continue;
            for (auto& [off2, row2] : w.rows)
                for (auto& e2 : row2)
                    if (e2.k == e.k && e2.m == e.m && off2 != off && !e2.value.is_exact())
                        e2.value = Quantity::exact(0);
        }
    }
    return w;
}

// Pointwise Morse inequality M_q >= b_q over the window, three-valued.
inline std::map<Int, Verdict> morse_inequality_check(const MorseWindow& w,
                                                     const std::string& manifold = "S4") {
    std::map<Int, Verdict> out;
    for (const auto& [off, row] : w.rows) {
        Quantity Mq = w.total(off);
        int b = betti(manifold, 2 * w.N + off);
        if (Mq.lo >= b) out[off] = Verdict::Pass;
        else if (Mq.hi && *Mq.hi < b) out[off] = Verdict::Fail;
        else out[off] = Verdict::Unknown;
    }
    return out;
}

// Euler characteristic of one iterate from its local homology.
inline Int euler_characteristic_term(const GeodesicDescriptor& g, const LocalHomologyProfile* profile,
                                     const Int& m, const Precision& prec = {}) {
    auto [i, nu] = iterate_index(g, m, prec);
    int eps = (i - g.initial_index) % 2 == 0 ? 1 : -1;
    int sign_i = i % 2 == 0 ? 1 : -1;
    if (nu == 0) return eps > 0 ? Int(sign_i) : Int(0);
    const LocalHomologyProfile::Row* row = profile ? resolve_row(g, *profile, m, prec) : nullptr;
    if (!row)
        throw ProfileMissing(g.name + ": no local homology row for degenerate iterate m=" + m.str());
    Int chi = 0;
    for (int l = 0; l <= nu; ++l) chi += Int((l % 2 == 0 ? 1 : -1) * sign_i) * row->k_signed(size_t(l), eps);
    return chi;
}

// Mean Euler characteristic: average of chi over one analytical period.
inline Rat euler_hat(const GeodesicDescriptor& g, const LocalHomologyProfile* profile,
                     const Precision& prec = {}) {
    Int n = analytical_period(g);
    Int sum = 0;
    for (Int m = 1; m <= n; ++m) sum += euler_characteristic_term(g, profile, m, prec);
    return Rat(sum, n);
}

// One geodesic's contribution to the mean identity: exact chi-hat over an
// enclosure (possibly just an a-priori interval) of the mean index.
struct MeanContribution {
    Rat chi_hat;
    RatInterval ihat;
};

inline MeanContribution mean_contribution(const GeodesicDescriptor& g, const LocalHomologyProfile* profile,
                                          const Rat& width, const Precision& prec = {}) {
    return {euler_hat(g, profile, prec), mean_index(g).evaluate(width)};
}

// Sum chi_hat_k / ihat_k compared against -2/3: infeasible when the target
// lies outside the enclosure, feasible when everything is an exact match.
inline Verdict mean_identity_check(const std::vector<MeanContribution>& terms) {
    RatInterval sum(Rat(0));
    bool exact = true;
    for (const auto& c : terms) {
        if (!(c.ihat.lo > 0)) throw MeanIndexNotPositive("mean index enclosure reaches 0");
        sum = sum + c.ihat.inverse() * c.chi_hat;
        exact = exact && c.ihat.is_point();
    }
    const Rat target(-2, 3);
    if (!sum.contains(target)) return Verdict::Fail;
    if (exact) return Verdict::Pass;
    return Verdict::Unknown;
}

}  // namespace geoindex
