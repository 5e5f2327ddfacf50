#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>

#include "geoindex/errors.hpp"

namespace geoindex {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& x) { return boost::multiprecision::numerator(x); }
inline Int rat_den(const Rat& x) { return boost::multiprecision::denominator(x); }

// floor toward -inf, exact.
inline Int rat_floor(const Rat& x) {
    Int n = rat_num(x), d = rat_den(x);
    Int q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

inline Int rat_ceil(const Rat& x) {
    Int n = rat_num(x), d = rat_den(x);
    Int q = n / d;
    if (n > 0 && q * d != n) ++q;
    return q;
}

inline bool rat_is_int(const Rat& x) { return rat_den(x) == 1; }

// {x} = x - [x]
inline Rat rat_frac(const Rat& x) { return x - Rat(rat_floor(x)); }

inline Int int_gcd(Int a, Int b) { return boost::multiprecision::gcd(a, b); }
inline Int int_lcm(Int a, Int b) { return boost::multiprecision::lcm(a, b); }

inline Rat pow10_inv(unsigned exponent) {
    Int d = 1;
    for (unsigned i = 0; i < exponent; ++i) d *= 10;
    return Rat(1, d);
}

// Parses "a/b", "a", or a decimal like "-0.125" into an exact rational.
inline Rat parse_rat(const std::string& s) {
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            Int n(s.substr(0, slash)), d(s.substr(slash + 1));
            if (d == 0) throw ParseError("zero denominator in '" + s + "'");
            return Rat(n, d);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) return Rat(Int(s));
        std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
        bool neg = !head.empty() && head[0] == '-';
        Int ip = head.empty() || head == "-" ? Int(0) : Int(head);
        Int scale = 1;
        for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
        Rat frac(Int(tail.empty() ? "0" : tail), scale);
        return neg ? Rat(ip) - frac : Rat(ip) + frac;
    } catch (const std::exception& e) {
        throw ParseError("cannot parse rational '" + s + "': " + e.what());
    }
}

inline std::string rat_str(const Rat& x) {
    if (rat_is_int(x)) return rat_num(x).str();
    return rat_num(x).str() + "/" + rat_den(x).str();
}

// Closed interval with exact rational endpoints.
struct RatInterval {
    Rat lo, hi;

    RatInterval() = default;
    RatInterval(Rat v) : lo(v), hi(std::move(v)) {}
    RatInterval(Rat l, Rat h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw Error("inverted interval");
    }

    Rat width() const { return hi - lo; }
    bool is_point() const { return lo == hi; }
    bool contains(const Rat& v) const { return lo <= v && v <= hi; }
    bool contains_integer() const { return rat_floor(hi) >= rat_ceil(lo); }

    RatInterval operator+(const RatInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    RatInterval operator-(const RatInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    RatInterval operator*(const Rat& c) const {
        return c >= 0 ? RatInterval{lo * c, hi * c} : RatInterval{hi * c, lo * c};
    }
    RatInterval operator+(const Rat& c) const { return {lo + c, hi + c}; }

    // Reciprocal; requires the interval to exclude zero.
    RatInterval inverse() const {
        if (lo <= 0 && hi >= 0) throw Error("interval reciprocal through zero");
        return {Rat(1) / hi, Rat(1) / lo};
    }

    bool strictly_below(const Rat& v) const { return hi < v; }
    bool strictly_above(const Rat& v) const { return lo > v; }
};

inline RatInterval operator*(const Rat& c, const RatInterval& iv) { return iv * c; }

}  // namespace geoindex
