#pragma once

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geoindex/normal_forms.hpp"

namespace geoindex {

// Abstract budget-3 block pattern: multiplicities only, angles reduced to
// rational/irrational markers.
struct BlockPattern {
    int p_minus = 0, p_zero = 0, p_plus = 0;
    int q_minus = 0, q_zero = 0, q_plus = 0;
    int r1 = 0, r2 = 0, r3 = 0, r4 = 0, r5 = 0, r6 = 0;
    int h_plus = 0, h_minus = 0;

    int budget() const {
        return p_minus + p_zero + p_plus + q_minus + q_zero + q_plus + r1 + r2 +
               2 * (r3 + r4 + r5 + r6) + h_plus + h_minus;
    }
    int h() const { return h_plus + h_minus; }
    int parity() const {
        return (p_minus + p_zero + q_minus + q_zero + q_plus + r1 + r2 + h_minus) % 2;
    }
    int nu1() const { return p_minus + 2 * p_zero + p_plus; }
    int nu2() const { return nu1() + q_minus + 2 * q_zero + q_plus; }

    auto key() const {
        return std::tie(p_minus, p_zero, p_plus, q_minus, q_zero, q_plus, r1, r2, r3, r4, r5, r6,
                        h_plus, h_minus);
    }
    bool operator<(const BlockPattern& o) const { return key() < o.key(); }
    bool operator==(const BlockPattern& o) const { return key() == o.key(); }

    std::string label() const {
        std::vector<std::string> parts;
        auto rep = [&](int n, const std::string& s) { for (int i = 0; i < n; ++i) parts.push_back(s); };
        rep(p_minus, "N1(1,1)");
        if (p_zero) parts.push_back("I" + std::to_string(2 * p_zero));
        rep(p_plus, "N1(1,-1)");
        rep(q_minus, "N1(-1,1)");
        if (q_zero) parts.push_back("-I" + std::to_string(2 * q_zero));
        rep(q_plus, "N1(-1,-1)");
        rep(r1, "R(rat)");
        rep(r2, "R(irr)");
        rep(r3, "N2(rat,*)");
        rep(r4, "N2(irr,*)");
        rep(r5, "N2(rat)");
        rep(r6, "N2(irr)");
        rep(h_plus, "H(2)");
        rep(h_minus, "H(-2)");
        std::string out;
        for (size_t i = 0; i < parts.size(); ++i) out += (i ? "*" : "") + parts[i];
        return out;
    }
};

struct EnumerationFilters {
    std::optional<int> parity;                       // forced index parity
    std::optional<std::pair<int, int>> nullity;      // nu(c) range
    std::optional<std::pair<int, int>> nullity_sq;   // nu(c^2) range
    bool always_nondegenerate = false;  // nu(c^m)=0 for all m: no +-1 eigenvalues, no N2, no rational R
    bool purely_elliptic = false;       // no hyperbolic blocks
    std::set<std::string> forbidden;    // counter names: p-,p0,p+,q-,q0,q+,r1..r6,h+,h-
};

// Complete, duplicate-free, canonically ordered list of budget-3 patterns.
inline std::vector<BlockPattern> enumerate_patterns(const EnumerationFilters& f = {}) {
    std::vector<BlockPattern> out;
    auto banned = [&f](const char* name) { return f.forbidden.count(name) != 0; };
    for (int pm = 0; pm <= 3; ++pm)
    for (int p0 = 0; p0 <= 3; ++p0)
    for (int pp = 0; pp <= 3; ++pp)
    for (int qm = 0; qm <= 3; ++qm)
    for (int q0 = 0; q0 <= 3; ++q0)
    for (int qp = 0; qp <= 3; ++qp)
    for (int r1 = 0; r1 <= 3; ++r1)
    for (int r2 = 0; r2 <= 3; ++r2)
    for (int r3 = 0; r3 <= 1; ++r3)
    for (int r4 = 0; r4 <= 1; ++r4)
    for (int r5 = 0; r5 <= 1; ++r5)
    for (int r6 = 0; r6 <= 1; ++r6)
    for (int hp = 0; hp <= 3; ++hp)
    for (int hm = 0; hm <= 3; ++hm) {
        BlockPattern b{pm, p0, pp, qm, q0, qp, r1, r2, r3, r4, r5, r6, hp, hm};
        if (b.budget() != 3) continue;
        if (f.parity && b.parity() != *f.parity) continue;
        if (f.nullity && (b.nu1() < f.nullity->first || b.nu1() > f.nullity->second)) continue;
        if (f.nullity_sq && (b.nu2() < f.nullity_sq->first || b.nu2() > f.nullity_sq->second)) continue;
        if (f.always_nondegenerate &&
            (pm + p0 + pp + qm + q0 + qp + r1 + r3 + r4 + r5 + r6) != 0) continue;
        if (f.purely_elliptic && b.h() != 0) continue;
        if ((banned("p-") && pm) || (banned("p0") && p0) || (banned("p+") && pp) ||
            (banned("q-") && qm) || (banned("q0") && q0) || (banned("q+") && qp) ||
            (banned("r1") && r1) || (banned("r2") && r2) || (banned("r3") && r3) ||
            (banned("r4") && r4) || (banned("r5") && r5) || (banned("r6") && r6) ||
            (banned("h+") && hp) || (banned("h-") && hm)) continue;
        out.push_back(b);
    }
    return out;
}

// Deterministic angle dispenser for turning a pattern into a concrete
// decomposition.
struct AngleSupply {
    std::vector<Rat> rational_pool{Rat(1, 3), Rat(1, 4), Rat(2, 5), Rat(1, 6), Rat(3, 7), Rat(5, 8)};
    std::vector<Rat> irrational_pool{Rat(1, 2), Rat(2, 5), Rat(3, 5), Rat(7, 10), Rat(1, 5)};  // sqrt args
    size_t ri = 0, ii = 0;
    // Reuse one irrational witness for every irrational slot. Distinct
    // irrational angles make the jump-tuple alignment a simultaneous
    // approximation problem that a linear scan cannot solve; with a shared
    // witness the alignment degenerates to a congruence and tuples appear at
    // small N. Any instantiation is an equally valid pattern representative.
    bool shared_irrational = false;
    WitnessPtr shared_witness;

    AngleFraction next_rational() {
        return AngleFraction::rational(rational_pool[ri++ % rational_pool.size()]);
    }
    AngleFraction next_irrational() {
        ++ii;
        if (shared_irrational) {
            if (!shared_witness) shared_witness = IrrationalWitness::sqrt_of(irrational_pool[0]);
            return AngleFraction::irrational(shared_witness);
        }
        return AngleFraction::irrational(
            IrrationalWitness::sqrt_of(irrational_pool[(ii - 1) % irrational_pool.size()]));
    }
};

inline PoincareDecomposition instantiate(const BlockPattern& b, AngleSupply& supply) {
    std::vector<NormalFormBlock> blocks;
    for (int i = 0; i < b.p_minus; ++i) blocks.push_back(NormalFormBlock::n1(1, 1));
    for (int i = 0; i < b.p_zero; ++i) blocks.push_back(NormalFormBlock::i2());
    for (int i = 0; i < b.p_plus; ++i) blocks.push_back(NormalFormBlock::n1(1, -1));
    for (int i = 0; i < b.q_minus; ++i) blocks.push_back(NormalFormBlock::n1(-1, 1));
    for (int i = 0; i < b.q_zero; ++i) blocks.push_back(NormalFormBlock::neg_i2());
    for (int i = 0; i < b.q_plus; ++i) blocks.push_back(NormalFormBlock::n1(-1, -1));
    for (int i = 0; i < b.r1; ++i) blocks.push_back(NormalFormBlock::rotation(supply.next_rational()));
    for (int i = 0; i < b.r2; ++i) blocks.push_back(NormalFormBlock::rotation(supply.next_irrational()));
    for (int i = 0; i < b.r3; ++i) blocks.push_back(NormalFormBlock::two_four(supply.next_rational(), true));
    for (int i = 0; i < b.r4; ++i) blocks.push_back(NormalFormBlock::two_four(supply.next_irrational(), true));
    for (int i = 0; i < b.r5; ++i) blocks.push_back(NormalFormBlock::two_four(supply.next_rational(), false));
    for (int i = 0; i < b.r6; ++i) blocks.push_back(NormalFormBlock::two_four(supply.next_irrational(), false));
    for (int i = 0; i < b.h_plus; ++i) blocks.push_back(NormalFormBlock::hyperbolic(2));
    for (int i = 0; i < b.h_minus; ++i) blocks.push_back(NormalFormBlock::hyperbolic(-2));
    return validate(std::move(blocks));
}

// A classification result: a (possibly parameterized) family of patterns
// together with the resolved initial index in terms of the window growth
// rate q.
struct ConfigurationClass {
    std::string label;       // representative pattern, placeholders collapsed
    std::string constraint;  // multiplicity constraints, empty for a concrete class
    std::vector<BlockPattern> members;
    Int initial_index;       // i(c) at the given q
    std::string index_formula;
};

// Degenerate-window classification, odd iterate: from a critical module at
// degree 2N-q+-1 of c^{2m_k-1} (equivalently 2N+q+-1 of c^{2m_k+1}), the
// nullity is pinned to {4,5,6} and parity resolves the index exactly.
inline std::vector<ConfigurationClass> classify_odd_window(int q, bool pinching = true) {
    if (q <= 0 || q % 2 != 0) throw ValidationError("window growth rate must be a positive even integer");
    if (pinching && q <= 5) return {};  // mean index q would violate the pinching bound
    EnumerationFilters f;
    f.nullity = {{4, 6}};
    std::vector<ConfigurationClass> out;
    for (const BlockPattern& b : enumerate_patterns(f)) {
        // i(c^{2m_k-1}) = 2N - i(c) - 2(p_- + p_0), squeezed into
        // [2N-q-2-nu(c), 2N-q-2] by the module hypothesis.
        int lo = q + 2 - 2 * (b.p_minus + b.p_zero);
        int hi = q - 2 - b.p_minus + b.p_plus;
        std::optional<int> resolved;
        for (int i = lo; i <= hi; ++i) {
            if (i < 0 || i % 2 != b.parity()) continue;
            if (resolved) throw Error("ambiguous index resolution for " + b.label());
            resolved = i;
        }
        if (!resolved) continue;
        if (*resolved != q - b.p_minus - b.p_zero)
            throw Error("index resolution disagrees with the linear formula for " + b.label());
        ConfigurationClass c;
        c.label = b.label();
        c.members = {b};
        c.initial_index = *resolved;
        c.index_formula = "i(c^m) = " + std::to_string(q) + "m - " + std::to_string(b.p_minus + b.p_zero);
        out.push_back(std::move(c));
    }
    return out;
}

// Degenerate-window classification, even iterate: a critical module at
// degree 2N+q+-1 of c^{2m_k+2} pins nu(c^2) to {4,5,6}; the parity of
// i(c^2) then resolves each family. Results are the five parameterized
// families, with the hyperbolic block canonicalized to H(2).
inline std::vector<ConfigurationClass> classify_even_window(int q, bool pinching = true) {
    if (q <= 0) throw MeanIndexNotPositive("window growth rate must be positive");
    if (q % 2 != 0) throw ValidationError("window growth rate must be even");
    if (pinching && q <= 10) return {};  // mean index q/2 would violate the pinching bound
    EnumerationFilters f;
    f.nullity_sq = {{4, 6}};
    struct Family {
        std::string label, constraint;
        std::vector<BlockPattern> members;
        std::optional<Int> index;
    };
    std::array<Family, 5> fam{{
        {"I{2p0}*(-I{2q0})*H(2)", "p0+q0=2", {}, {}},
        {"N1(1,1)^p-*N1(-1,-1)^q+*I{2p0}*(-I{2q0})*N1(1,-1)^p+*N1(-1,1)^q-",
         "p-+q+=1, p0+q0=1, p++q-=1", {}, {}},
        {"I{2p0}*(-I{2q0})*N1(1,-1)^p+*N1(-1,1)^q-", "p0+q0=2, p++q-=1", {}, {}},
        {"N1(1,1)^p-*N1(-1,-1)^q+*I{2p0}*(-I{2q0})", "p0+q0=2, p-+q+=1", {}, {}},
        {"I{2p0}*(-I{2q0})", "p0+q0=3", {}, {}},
    }};
    for (const BlockPattern& b : enumerate_patterns(f)) {
        if (b.h_minus) continue;  // the proof's arithmetic only sees h; canonical form uses H(2)
        // i(c^2) = i(c^{2m_k+2}) - 2N, squeezed into [q+2-nu(c^2), q-2].
        int lo = q + 2 - b.nu2();
        int hi = q - 2;
        int par = (1 + b.p_plus + b.q_minus + b.h()) % 2;
        std::optional<int> resolved;
        for (int i = lo; i <= hi; ++i) {
            if (i < 0 || i % 2 != par) continue;
            if (resolved) { resolved.reset(); break; }  // ambiguous: not forced, reject
            resolved = i;
        }
        if (!resolved) continue;
        if (*resolved != q - b.p_minus - b.p_zero - b.q_plus - b.q_zero) continue;
        int S = b.p_minus + b.p_zero + b.p_plus + b.q_minus + b.q_zero + b.q_plus;
        size_t slot;
        if (b.nu2() == 4 && b.h() == 1 && S == 2) slot = 0;
        else if (b.nu2() == 4 && b.h() == 0 && S == 3) slot = 1;
        else if (b.nu2() == 5 && b.p_plus + b.q_minus == 1) slot = 2;
        else if (b.nu2() == 5 && b.p_minus + b.q_plus == 1) slot = 3;
        else if (b.nu2() == 6) slot = 4;
        else throw Error("unclassified surviving pattern " + b.label());
        fam[slot].members.push_back(b);
        if (fam[slot].index && *fam[slot].index != Int(*resolved))
            throw Error("inconsistent i(c^2) inside family " + fam[slot].label);
        fam[slot].index = Int(*resolved);
    }
    std::vector<ConfigurationClass> out;
    for (const auto& fm : fam) {
        if (fm.members.empty()) continue;
        ConfigurationClass c;
        c.label = fm.label;
        c.constraint = fm.constraint;
        c.members = fm.members;
        c.initial_index = *fm.index;  // i(c^2) at this q
        c.index_formula = "i(c^m) = " + std::to_string(q / 2) + "m - (p- + p0) - [m even](q0 + q+)";
        out.push_back(c);
    }
    return out;
}

}  // namespace geoindex
