#pragma once

#include <optional>
#include <vector>

#include "geoindex/angle.hpp"

namespace geoindex {

// Basic normal-form blocks in Sp(2) / Sp(4).
enum class BlockKind {
    EigOnePlus,        // N1(1,1)
    EigOneIdentity,    // I2
    EigOneMinus,       // N1(1,-1)
    EigNegOnePlus,     // N1(-1,1)
    EigNegOneIdentity, // -I2
    EigNegOneMinus,    // N1(-1,-1)
    Rotation,          // R(theta)
    TwoFour,           // N2(e^{i theta}, B), trivial or not
    HyperbolicPlus,    // H(2)
    HyperbolicMinus,   // H(-2)
};

struct NormalFormBlock {
    BlockKind kind;
    std::optional<AngleFraction> angle;  // Rotation / TwoFour only
    bool nontrivial = false;             // TwoFour only

    int half_dimension() const { return kind == BlockKind::TwoFour ? 2 : 1; }
    bool carries_angle() const { return kind == BlockKind::Rotation || kind == BlockKind::TwoFour; }
    bool angle_rational() const { return carries_angle() && angle->is_rational(); }
    bool on_unit_circle() const {
        return kind != BlockKind::HyperbolicPlus && kind != BlockKind::HyperbolicMinus;
    }

    static NormalFormBlock n1(int eig, int b) {
        if ((eig != 1 && eig != -1) || (b != 1 && b != -1)) throw ValidationError("N1 takes eig,b in {1,-1}");
        if (eig == 1) return {b == 1 ? BlockKind::EigOnePlus : BlockKind::EigOneMinus};
        return {b == 1 ? BlockKind::EigNegOnePlus : BlockKind::EigNegOneMinus};
    }
    static NormalFormBlock i2() { return {BlockKind::EigOneIdentity}; }
    static NormalFormBlock neg_i2() { return {BlockKind::EigNegOneIdentity}; }
    static NormalFormBlock rotation(AngleFraction a) { return {BlockKind::Rotation, std::move(a)}; }
    static NormalFormBlock two_four(AngleFraction a, bool nontriv) {
        return {BlockKind::TwoFour, std::move(a), nontriv};
    }
    static NormalFormBlock hyperbolic(int sign) {
        if (sign != 2 && sign != -2) throw ValidationError("H takes sign 2 or -2");
        return {sign == 2 ? BlockKind::HyperbolicPlus : BlockKind::HyperbolicMinus};
    }
};

// True iff the angle fraction lies in (0,1/2); refines irrational witnesses
// as needed (they are never exactly 1/2).
inline bool below_half(const AngleFraction& a, const Precision& prec = {}) {
    if (a.is_rational()) return a.rational_value() < Rat(1, 2);
    const Rat half(1, 2), max_w = prec.max_width();
    Rat width = a.witness()->enclosure().width();
    for (;;) {
        const RatInterval& iv = a.witness()->refine(width);
        if (iv.strictly_below(half)) return true;
        if (iv.strictly_above(half)) return false;
        if (width <= max_w) throw PrecisionExhausted("angle enclosure straddles 1/2 at maximum precision");
        width = std::max(Rat(width / 1000), max_w);
    }
}

// A unit-circle eigenvalue of a block together with the splitting numbers
// (S^+, S^-) there. Points away from +-1 are exp(2*pi*i*t) where t is either
// the block's angle fraction or its reflection 1-t (`conjugate`).
struct SpectrumPoint {
    enum class Where { One, MinusOne, AtAngle } where;
    AngleFraction angle;    // valid when where == AtAngle
    bool conjugate = false; // point at fraction 1 - angle
    int s_plus = 0, s_minus = 0;
    bool rational() const {
        return where != Where::AtAngle || angle.is_rational();
    }
    // The point's fraction t in [0,1), exact for rational inputs.
    Rat fraction() const {
        if (where == Where::One) return Rat(0);
        if (where == Where::MinusOne) return Rat(1, 2);
        if (!angle.is_rational()) throw Error("fraction() on irrational spectrum point");
        return conjugate ? Rat(1) - angle.rational_value() : angle.rational_value();
    }
    // Enclosure of the fraction t.
    RatInterval fraction_enclosure() const {
        if (rational()) return RatInterval(fraction());
        RatInterval e = angle.enclosure();
        return conjugate ? RatInterval(Rat(1) - e.hi, Rat(1) - e.lo) : e;
    }
};

// Per-block splitting numbers on the block's own spectrum.
// Off-spectrum points always give (0,0).
inline std::vector<SpectrumPoint> block_spectrum(const NormalFormBlock& b, const Precision& prec = {}) {
    using W = SpectrumPoint::Where;
    switch (b.kind) {
        case BlockKind::EigOnePlus:
        case BlockKind::EigOneIdentity:
            return {{W::One, {}, false, 1, 1}};
        case BlockKind::EigOneMinus:
            return {{W::One, {}, false, 0, 0}};
        case BlockKind::EigNegOnePlus:
            return {{W::MinusOne, {}, false, 0, 0}};
        case BlockKind::EigNegOneIdentity:
        case BlockKind::EigNegOneMinus:
            return {{W::MinusOne, {}, false, 1, 1}};
        case BlockKind::Rotation: {
            // S^- = 1 at the block's own angle, S^+ = 1 at the conjugate
            // (splitting numbers swap under complex conjugation). This
            // orientation is what makes the even-jump-iterate identity hold
            // in both approach directions.
            SpectrumPoint at{W::AtAngle, *b.angle, false, 0, 1};
            SpectrumPoint conj{W::AtAngle, *b.angle, true, 1, 0};
            return {at, conj};
        }
        case BlockKind::TwoFour: {
            int s = b.nontrivial ? 1 : 0;
            return {{W::AtAngle, *b.angle, false, s, s}, {W::AtAngle, *b.angle, true, s, s}};
        }
        case BlockKind::HyperbolicPlus:
        case BlockKind::HyperbolicMinus:
            return {};
    }
    throw Error("unreachable block kind");
}

// Unit-circle point for splitting-number queries.
struct CirclePoint {
    enum class Where { One, MinusOne, AtFraction } where;
    AngleFraction fraction;  // valid when AtFraction; conjugates are distinct points

    static CirclePoint one() { return {Where::One, {}}; }
    static CirclePoint minus_one() { return {Where::MinusOne, {}}; }
    static CirclePoint at(AngleFraction f) { return {Where::AtFraction, std::move(f)}; }
};

// (S^+, S^-) of a single block at omega. Irrational query points match a
// block's spectrum only when they share the same witness object.
inline std::pair<int, int> splitting_numbers(const NormalFormBlock& b, const CirclePoint& omega,
                                             const Precision& prec = {}) {
    for (const SpectrumPoint& sp : block_spectrum(b, prec)) {
        bool match = false;
        switch (omega.where) {
            case CirclePoint::Where::One:
                match = sp.where == SpectrumPoint::Where::One;
                break;
            case CirclePoint::Where::MinusOne:
                match = sp.where == SpectrumPoint::Where::MinusOne;
                break;
            case CirclePoint::Where::AtFraction:
                if (sp.where != SpectrumPoint::Where::AtAngle) break;
                if (omega.fraction.is_rational() && sp.rational())
                    match = omega.fraction.rational_value() == sp.fraction();
                else if (!omega.fraction.is_rational() && !sp.angle.is_rational())
                    match = omega.fraction.witness() == sp.angle.witness() && !sp.conjugate;
                break;
        }
        if (match) return {sp.s_plus, sp.s_minus};
    }
    return {0, 0};
}

// A Poincare map in Sp(6) decomposed into basic normal forms, with the
// multiplicities of each block family.
struct PoincareDecomposition {
    std::vector<NormalFormBlock> blocks;
    int p_minus = 0, p_zero = 0, p_plus = 0;
    int q_minus = 0, q_zero = 0, q_plus = 0;
    int r1 = 0, r2 = 0;  // rotations: rational / irrational angle
    int r3 = 0, r4 = 0;  // nontrivial N2: rational / irrational
    int r5 = 0, r6 = 0;  // trivial N2: rational / irrational
    int h_plus = 0, h_minus = 0;

    std::vector<AngleFraction> rotation_angles;       // r1 then r2 entries
    std::vector<AngleFraction> nontrivial_n2_angles;  // r3 then r4
    std::vector<AngleFraction> trivial_n2_angles;     // r5 then r6

    int h() const { return h_plus + h_minus; }
    int r() const { return r1 + r2; }
    int dimension_budget() const {
        return p_minus + p_zero + p_plus + q_minus + q_zero + q_plus + r1 + r2 +
               2 * (r3 + r4 + r5 + r6) + h();
    }

    // Forced parity of the initial index by blockwise additivity.
    int index_parity() const {
        return (p_minus + p_zero + q_minus + q_zero + q_plus + r1 + r2 + h_minus) % 2;
    }

    // Total algebraic multiplicity of unit-circle eigenvalues.
    int elliptic_height() const { return 2 * (3 - h()); }

    // nu(c) = p_- + 2 p_0 + p_+
    int nu_initial() const { return p_minus + 2 * p_zero + p_plus; }

    std::vector<SpectrumPoint> spectrum_points(const Precision& prec = {}) const {
        std::vector<SpectrumPoint> pts;
        for (const auto& b : blocks)
            for (auto& sp : block_spectrum(b, prec)) pts.push_back(sp);
        return pts;
    }

    int s_plus_at_one() const { return p_minus + p_zero; }

    // C(P) = sum of S^- over the spectrum away from omega = 1.
    int c_total(const Precision& prec = {}) const {
        int c = 0;
        for (const auto& sp : spectrum_points(prec))
            if (sp.where != SpectrumPoint::Where::One) c += sp.s_minus;
        return c;
    }
};

inline PoincareDecomposition validate(std::vector<NormalFormBlock> blocks) {
    if (blocks.empty()) throw ValidationError("empty block list");
    PoincareDecomposition d;
    d.blocks = std::move(blocks);
    std::vector<AngleFraction> rot_irr, nt_irr, tr_irr;
    for (const auto& b : d.blocks) {
        switch (b.kind) {
            case BlockKind::EigOnePlus: ++d.p_minus; break;
            case BlockKind::EigOneIdentity: ++d.p_zero; break;
            case BlockKind::EigOneMinus: ++d.p_plus; break;
            case BlockKind::EigNegOnePlus: ++d.q_minus; break;
            case BlockKind::EigNegOneIdentity: ++d.q_zero; break;
            case BlockKind::EigNegOneMinus: ++d.q_plus; break;
            case BlockKind::Rotation:
                if (b.angle->is_rational()) { ++d.r1; d.rotation_angles.push_back(*b.angle); }
                else { ++d.r2; rot_irr.push_back(*b.angle); }
                break;
            case BlockKind::TwoFour:
                if (b.nontrivial) {
                    if (b.angle->is_rational()) { ++d.r3; d.nontrivial_n2_angles.push_back(*b.angle); }
                    else { ++d.r4; nt_irr.push_back(*b.angle); }
                } else {
                    if (b.angle->is_rational()) { ++d.r5; d.trivial_n2_angles.push_back(*b.angle); }
                    else { ++d.r6; tr_irr.push_back(*b.angle); }
                }
                break;
            case BlockKind::HyperbolicPlus: ++d.h_plus; break;
            case BlockKind::HyperbolicMinus: ++d.h_minus; break;
        }
    }
    for (auto& a : rot_irr) d.rotation_angles.push_back(std::move(a));
    for (auto& a : nt_irr) d.nontrivial_n2_angles.push_back(std::move(a));
    for (auto& a : tr_irr) d.trivial_n2_angles.push_back(std::move(a));
    if (d.dimension_budget() != 3)
        throw DimensionBudgetViolation("dimension budget " + std::to_string(d.dimension_budget()) +
                                       " != 3 (Sp(6) requires half-dimension 3)");
    return d;
}

}  // namespace geoindex
