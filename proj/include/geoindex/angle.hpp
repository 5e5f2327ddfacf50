#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "geoindex/exact.hpp"

namespace geoindex {

// Refinement cutoff for interval enclosures: enclosures are never narrowed
// below 10^-digits, and any question still undecidable at that width raises
// PrecisionExhausted.
struct Precision {
    unsigned digits = 60;
    Rat max_width() const { return pow10_inv(digits); }
};

// An irrational value t in (0,1), known only through a shrinking enclosure.
// Irrationality is asserted by whoever constructs the witness; the library
// never treats an enclosure as a rational value.
class IrrationalWitness {
  public:
    using Refiner = std::function<RatInterval(const Rat& target_width)>;

    IrrationalWitness(RatInterval enclosure, Refiner refiner, std::string description)
        : enclosure_(std::move(enclosure)), refiner_(std::move(refiner)), description_(std::move(description)) {
        if (!(enclosure_.lo > 0 && enclosure_.hi < 1))
            throw InvalidAngle("irrational angle enclosure must lie strictly inside (0,1)");
    }

    const RatInterval& enclosure() const { return enclosure_; }
    const std::string& description() const { return description_; }

    // Narrows the enclosure to width <= target. New enclosures always nest
    // inside previously returned ones. Throws PrecisionExhausted if the
    // witness cannot be refined further.
    const RatInterval& refine(const Rat& target_width) {
        while (enclosure_.width() > target_width) {
            if (!refiner_)
                throw PrecisionExhausted("angle enclosure [" + rat_str(enclosure_.lo) + "," +
                                         rat_str(enclosure_.hi) + "] has no refinement rule");
            RatInterval next = refiner_(target_width);
            // Intersect to guarantee nesting regardless of the rule.
            Rat lo = std::max(next.lo, enclosure_.lo);
            Rat hi = std::min(next.hi, enclosure_.hi);
            if (lo > hi) throw Error("refinement left previous enclosure for " + description_);
            if (lo == enclosure_.lo && hi == enclosure_.hi && enclosure_.width() > target_width)
                throw PrecisionExhausted("refinement of " + description_ + " stalled");
            enclosure_ = RatInterval(lo, hi);
        }
        return enclosure_;
    }

    // Witness for sqrt(v) with v a non-square rational in (0,1).
    static std::shared_ptr<IrrationalWitness> sqrt_of(const Rat& v) {
        if (!(v > 0 && v < 1)) throw InvalidAngle("sqrt witness requires argument in (0,1)");
        {
            Int n = rat_num(v), d = rat_den(v);
            Int sn = boost::multiprecision::sqrt(n), sd = boost::multiprecision::sqrt(d);
            if (sn * sn == n && sd * sd == d)
                throw InvalidAngle("sqrt witness of a perfect square is rational");
        }
        auto refine = [v](const Rat& target) {
            Int scale = 1;
            Rat w(1);
            while (w > target) {
                scale *= 10;
                w /= 10;
            }
            scale *= 10;  // one digit of slack
            Int n = rat_num(v), d = rat_den(v);
            Int a = boost::multiprecision::sqrt(Int(n * d * scale * scale)) / d;
            return RatInterval(Rat(a, scale), Rat(a + 1, scale));
        };
        RatInterval start = refine(Rat(1, 1000));
        return std::make_shared<IrrationalWitness>(start, refine, "sqrt(" + rat_str(v) + ")");
    }

    // Fixed enclosure with no refinement rule; exhausts as soon as anything
    // narrower is required.
    static std::shared_ptr<IrrationalWitness> fixed(const Rat& lo, const Rat& hi) {
        return std::make_shared<IrrationalWitness>(RatInterval(lo, hi), Refiner{},
                                                   "[" + rat_str(lo) + "," + rat_str(hi) + "]");
    }

  private:
    RatInterval enclosure_;
    Refiner refiner_;
    std::string description_;
};

using WitnessPtr = std::shared_ptr<IrrationalWitness>;

// theta/(2*pi), either an exact rational in (0,1)\{1/2} or an irrational
// witness. Rotation-type blocks carry one of these.
class AngleFraction {
  public:
    static AngleFraction rational(const Rat& v) {
        if (!(v > 0 && v < 1)) throw InvalidAngle("rational angle fraction must lie in (0,1)");
        if (v == Rat(1, 2))
            throw InvalidAngle("angle pi is represented by eigenvalue -1 blocks, not rotations");
        AngleFraction a;
        a.value_ = v;
        return a;
    }

    static AngleFraction irrational(WitnessPtr w) {
        AngleFraction a;
        a.witness_ = std::move(w);
        return a;
    }

    bool is_rational() const { return !witness_; }
    const Rat& rational_value() const { return value_; }
    const WitnessPtr& witness() const { return witness_; }

    RatInterval enclosure() const {
        return witness_ ? witness_->enclosure() : RatInterval(value_);
    }

    // --- E, phi, {.} applied to m * fraction (Eq.-style ceiling arithmetic) ---

    Int e_ceil_times(const Int& m, const Precision& prec) const {
        if (is_rational()) return rat_ceil(Rat(m) * value_);
        RatInterval iv = scaled(m, prec);
        return rat_floor(iv.lo) + 1;  // interval excludes integers
    }

    // phi(m*a) = 0 iff m*a integral; irrational witnesses always give 1.
    int phi_times(const Int& m, const Precision&) const {
        if (is_rational()) return rat_is_int(Rat(m) * value_) ? 0 : 1;
        return 1;
    }

    // Enclosure (or point) of {m * a}.
    RatInterval frac_times(const Int& m, const Precision& prec) const {
        if (is_rational()) return RatInterval(rat_frac(Rat(m) * value_));
        RatInterval iv = scaled(m, prec);
        Int fl = rat_floor(iv.lo);
        return RatInterval(iv.lo - Rat(fl), iv.hi - Rat(fl));
    }

  private:
    // Enclosure of m * a refined until it excludes integers.
    RatInterval scaled(const Int& m, const Precision& prec) const {
        Rat width = Rat(1, 100) / m;
        const Rat max_w = prec.max_width();
        for (;;) {
            RatInterval iv = witness_->refine(width) * Rat(m);
            if (!iv.contains_integer()) return iv;
            if (width <= max_w)
                throw PrecisionExhausted("m*angle enclosure straddles an integer at maximum precision (m=" +
                                         m.str() + ", " + witness_->description() + ")");
            width = std::max(Rat(width / 1000), max_w);
        }
    }

    Rat value_;
    WitnessPtr witness_;
};

// Standalone Eq.-(1.2)-style functions on exact rationals.
inline Int e_ceil(const Rat& a) { return rat_ceil(a); }
inline int phi(const Rat& a) { return rat_is_int(a) ? 0 : 1; }

// E on an enclosure known to exclude integers; errors otherwise.
inline Int e_ceil(const RatInterval& iv) {
    if (iv.is_point()) return rat_ceil(iv.lo);
    if (iv.contains_integer())
        throw PrecisionExhausted("enclosure [" + rat_str(iv.lo) + "," + rat_str(iv.hi) +
                                 "] straddles an integer");
    return rat_floor(iv.lo) + 1;
}

}  // namespace geoindex
