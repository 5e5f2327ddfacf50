#pragma once

#include <map>
#include <string>
#include <vector>

#include "geoindex/normal_forms.hpp"

namespace geoindex {

enum class Verdict { Pass, Fail, Unknown };

inline const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        default: return "unknown";
    }
}

// A prime closed geodesic: decomposition of its Poincare map plus the
// initial Morse index.
struct GeodesicDescriptor {
    std::string name;
    PoincareDecomposition decomp;
    Int initial_index = 0;
};

inline GeodesicDescriptor make_descriptor(std::string name, PoincareDecomposition d, Int initial_index) {
    if (initial_index < 0) throw ValidationError(name + ": initial index must be >= 0");
    if (int(initial_index % 2) != d.index_parity())
        throw ValidationError(name + ": initial index " + initial_index.str() +
                              " has wrong parity for this decomposition (must be " +
                              (d.index_parity() ? "odd" : "even") + ")");
    return {std::move(name), std::move(d), std::move(initial_index)};
}

// Exact value of the form rational + sum coeff_j * t_j with t_j irrational
// angle fractions; evaluable to arbitrarily tight nested enclosures.
struct MeanIndexValue {
    Rat rational_part;
    std::vector<std::pair<Rat, AngleFraction>> irrational_terms;

    bool is_exact() const { return irrational_terms.empty(); }

    RatInterval evaluate(const Rat& width) const {
        RatInterval acc(rational_part);
        if (irrational_terms.empty()) return acc;
        Rat per = width / Rat(irrational_terms.size());
        for (const auto& [coeff, angle] : irrational_terms) {
            Rat target = per / boost::multiprecision::abs(coeff);
            acc = acc + angle.witness()->refine(target) * coeff;
        }
        return acc;
    }
};

// --- Long's iteration formulas ---

inline Int iterate_i(const GeodesicDescriptor& g, const Int& m, const Precision& prec = {}) {
    if (m < 1) throw ValidationError("iterate must be >= 1");
    const auto& d = g.decomp;
    const int r = d.r(), r_star = d.r3 + d.r4;
    Int i = m * (g.initial_index + d.p_minus + d.p_zero - r);
    for (const auto& t : d.rotation_angles) i += 2 * t.e_ceil_times(m, prec);
    i += -r - d.p_minus - d.p_zero;
    if (m % 2 == 0) i -= d.q_zero + d.q_plus;
    for (const auto& a : d.nontrivial_n2_angles) i += 2 * a.phi_times(m, prec);
    i -= 2 * r_star;
    return i;
}

inline int iterate_nu(const GeodesicDescriptor& g, const Int& m, const Precision& prec = {}) {
    if (m < 1) throw ValidationError("iterate must be >= 1");
    const auto& d = g.decomp;
    int nu = d.nu_initial();
    if (m % 2 == 0) nu += d.q_minus + 2 * d.q_zero + d.q_plus;
    int sigma = d.r() + d.r3 + d.r4 + d.r5 + d.r6;
    for (const auto& t : d.rotation_angles) sigma -= t.phi_times(m, prec);
    for (const auto& a : d.nontrivial_n2_angles) sigma -= a.phi_times(m, prec);
    for (const auto& b : d.trivial_n2_angles) sigma -= b.phi_times(m, prec);
    return nu + 2 * sigma;
}

struct IteratePair {
    Int i;
    int nu;
};

inline IteratePair iterate_index(const GeodesicDescriptor& g, const Int& m, const Precision& prec = {}) {
    return {iterate_i(g, m, prec), iterate_nu(g, m, prec)};
}

// epsilon(c^m) = (-1)^{i(c^m)-i(c)}
inline int iterate_eps(const GeodesicDescriptor& g, const Int& m, const Precision& prec = {}) {
    return (iterate_i(g, m, prec) - g.initial_index) % 2 == 0 ? 1 : -1;
}

// Mean index: only the rotation angles contribute a growing term.
inline MeanIndexValue mean_index(const GeodesicDescriptor& g) {
    const auto& d = g.decomp;
    MeanIndexValue v;
    v.rational_part = Rat(g.initial_index + d.p_minus + d.p_zero - d.r());
    for (const auto& t : d.rotation_angles) {
        if (t.is_rational())
            v.rational_part += 2 * t.rational_value();
        else
            v.irrational_terms.push_back({Rat(2), t});
    }
    return v;
}

// Least l making the nullity maximal: every rational angle must complete a
// full turn, and eigenvalue -1 blocks need l even.
inline Int nullity_period(const PoincareDecomposition& d) {
    Int l = 1;
    if (d.q_minus + d.q_zero + d.q_plus > 0) l = 2;
    auto fold = [&l](const std::vector<AngleFraction>& angles) {
        for (const auto& a : angles)
            if (a.is_rational()) l = int_lcm(l, rat_den(a.rational_value()));
    };
    fold(d.rotation_angles);
    fold(d.nontrivial_n2_angles);
    fold(d.trivial_n2_angles);
    return l;
}

// Analytical period: minimal l with nu(c^l) maximal and i(c^{m+l})-i(c^m)
// even for all m. Only the linear term and the even-iterate term of the
// index formula affect parity, which gives the closed-form reduction below.
inline Int analytical_period(const GeodesicDescriptor& g) {
    const auto& d = g.decomp;
    Int l0 = nullity_period(d);
    if (l0 % 2 == 0) return l0;
    bool q_even = (d.q_zero + d.q_plus) % 2 == 0;
    bool lin_even = (g.initial_index + d.p_minus + d.p_zero - d.r()) % 2 == 0;
    return (q_even && lin_even) ? l0 : 2 * l0;
}

// Two-sided iteration bound plus the monotonicity estimate available once
// the initial index is at least 3.
inline bool bott_bound_check(const GeodesicDescriptor& g, const Int& m, const Precision& prec = {}) {
    auto cur = iterate_index(g, m, prec);
    auto next = iterate_index(g, m + 1, prec);
    Int diff = next.i - cur.i - g.initial_index;
    int e = g.decomp.elliptic_height();
    if (!(Int(cur.nu) - e / 2 <= diff)) return false;
    if (!(diff <= Int(g.decomp.nu_initial() - next.nu) + e / 2)) return false;
    if (g.initial_index >= 3) {
        // i(c^{m+1}) - i(c^m) - nu(c^m) >= i(c) - e(P)/2
        if (!(next.i - cur.i - cur.nu >= g.initial_index - e / 2)) return false;
    }
    return true;
}

struct PinchingReport {
    Verdict index_growth = Verdict::Pass;   // i(c^m) >= 3[5m/3] up to m_max
    Verdict mean_above_5 = Verdict::Pass;   // i-hat > 5
    Int first_growth_failure = 0;
};

inline PinchingReport pinching_predicates(const GeodesicDescriptor& g, const Int& m_max,
                                          const Precision& prec = {}) {
    PinchingReport rep;
    for (Int m = 1; m <= m_max; ++m) {
        Int bound = 3 * rat_floor(Rat(5 * m, 3));
        if (iterate_i(g, m, prec) < bound) {
            rep.index_growth = Verdict::Fail;
            rep.first_growth_failure = m;
            break;
        }
    }
    MeanIndexValue hat = mean_index(g);
    if (hat.is_exact()) {
        rep.mean_above_5 = hat.rational_part > 5 ? Verdict::Pass : Verdict::Fail;
        return rep;
    }
    Rat width(1, 100);
    const Rat max_w = prec.max_width();
    for (;;) {
        RatInterval iv = hat.evaluate(width);
        if (iv.strictly_above(5)) { rep.mean_above_5 = Verdict::Pass; break; }
        if (!(iv.hi > 5)) { rep.mean_above_5 = Verdict::Fail; break; }
        if (width <= max_w) { rep.mean_above_5 = Verdict::Unknown; break; }
        width = std::max(Rat(width / 1000), max_w);
    }
    return rep;
}

// Decides value > threshold by interval refinement; Unknown when the
// enclosure still straddles the threshold at maximum precision.
inline Verdict compare_above(const MeanIndexValue& v, const Rat& threshold, const Precision& prec = {}) {
    if (v.is_exact()) return v.rational_part > threshold ? Verdict::Pass : Verdict::Fail;
    Rat width(1, 100);
    const Rat max_w = prec.max_width();
    for (;;) {
        RatInterval iv = v.evaluate(width);
        if (iv.strictly_above(threshold)) return Verdict::Pass;
        if (!(iv.hi > threshold)) return Verdict::Fail;
        if (width <= max_w) return Verdict::Unknown;
        width = std::max(Rat(width / 1000), max_w);
    }
}

// Per-iterate record cache; all fills are idempotent.
class IndexProfile {
  public:
    explicit IndexProfile(const GeodesicDescriptor& g, Precision prec = {}) : g_(g), prec_(prec) {}

    const GeodesicDescriptor& descriptor() const { return g_; }

    IteratePair at(const Int& m) const {
        auto it = cache_.find(m);
        if (it == cache_.end()) it = cache_.emplace(m, iterate_index(g_, m, prec_)).first;
        return it->second;
    }
    int eps(const Int& m) const { return (at(m).i - g_.initial_index) % 2 == 0 ? 1 : -1; }
    MeanIndexValue mean() const { return mean_index(g_); }
    Int period() const { return analytical_period(g_); }
    int elliptic_height() const { return g_.decomp.elliptic_height(); }

  private:
    const GeodesicDescriptor& g_;
    Precision prec_;
    mutable std::map<Int, IteratePair> cache_;
};

}  // namespace geoindex
