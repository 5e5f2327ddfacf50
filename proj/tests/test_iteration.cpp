#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "geoindex/enumeration.hpp"
#include "geoindex/iteration.hpp"

using namespace geoindex;

namespace {

GeodesicDescriptor triple_rotation(const Rat& sqrt_arg, Int i0) {
    auto w = IrrationalWitness::sqrt_of(sqrt_arg);
    std::vector<NormalFormBlock> blocks;
    for (int i = 0; i < 3; ++i)
        blocks.push_back(NormalFormBlock::rotation(AngleFraction::irrational(w)));
    return make_descriptor("rot3", validate(std::move(blocks)), std::move(i0));
}

GeodesicDescriptor flat_descriptor(Int i0) {
    return make_descriptor(
        "flat", validate({NormalFormBlock::i2(), NormalFormBlock::i2(), NormalFormBlock::hyperbolic(2)}),
        std::move(i0));
}

}  // namespace

TEST_CASE("descriptor construction enforces the parity constraint") {
    auto d = validate({NormalFormBlock::i2(), NormalFormBlock::i2(), NormalFormBlock::hyperbolic(2)});
    CHECK(d.index_parity() == 0);
    CHECK_NOTHROW(make_descriptor("ok", d, 4));
    CHECK_THROWS_AS(make_descriptor("bad", d, 3), ValidationError);
    CHECK_THROWS_AS(make_descriptor("neg", d, -2), ValidationError);
}

TEST_CASE("index and nullity of a totally degenerate example follow the closed form") {
    auto g = flat_descriptor(4);
    // i(c^m) = 6m - 2, nu(c^m) = 4, eps(c^m) = +1 for all m.
    for (Int m = 1; m <= 20; ++m) {
        CHECK(iterate_i(g, m) == 6 * m - 2);
        CHECK(iterate_nu(g, m) == 4);
        CHECK(iterate_eps(g, m) == 1);
    }
    CHECK_THROWS_AS(iterate_i(g, 0), ValidationError);
    auto hat = mean_index(g);
    CHECK(hat.is_exact());
    CHECK(hat.rational_part == 6);
    CHECK(analytical_period(g) == 1);
}

TEST_CASE("index of an irrationally elliptic example tracks the ceiling term") {
    auto g = triple_rotation(Rat(7, 9), 3);
    // i(c^m) = 6 E(m t) - 3 with t = sqrt(7)/3 = 0.8819...
    CHECK(iterate_i(g, 1) == 3);           // E(t) = 1
    CHECK(iterate_i(g, 2) == 9);           // E(1.76) = 2
    CHECK(iterate_i(g, 3) == 15);          // E(2.64) = 3
    CHECK(iterate_i(g, 4) == 21);          // E(3.52) = 4
    CHECK(iterate_i(g, 8) == 45);          // E(7.05) = 8
    for (Int m = 1; m <= 10; ++m) CHECK(iterate_nu(g, m) == 0);
    auto hat = mean_index(g);
    CHECK(!hat.is_exact());
    CHECK(hat.rational_part == 0);
    CHECK(hat.irrational_terms.size() == 3);
    CHECK(compare_above(hat, Rat(5)) == Verdict::Pass);   // 6 t = 5.2915...
    CHECK(compare_above(hat, Rat(21, 4)) == Verdict::Pass);
    CHECK(compare_above(hat, Rat(16, 3)) == Verdict::Fail);
    CHECK(compare_above(hat, Rat(6)) == Verdict::Fail);
}

TEST_CASE("mean index matches the average growth of the index") {
    // |i(c^m) - m*ihat| is bounded; check the Cesaro quotient brackets ihat.
    auto g = triple_rotation(Rat(1, 2), 5);
    RatInterval hat = mean_index(g).evaluate(pow10_inv(20));
    Int m = 1000;
    Rat quotient = Rat(iterate_i(g, m)) / Rat(m);
    // Slack 12/m covers the bounded correction terms.
    CHECK(quotient >= hat.lo - Rat(12, m));
    CHECK(quotient <= hat.hi + Rat(12, m));
}

TEST_CASE("iterate data is invariant under block reordering") {
    AngleSupply s;
    std::vector<NormalFormBlock> blocks = {
        NormalFormBlock::n1(-1, -1),
        NormalFormBlock::rotation(s.next_rational()),
        NormalFormBlock::rotation(s.next_irrational()),
    };
    std::vector<NormalFormBlock> reversed(blocks.rbegin(), blocks.rend());
    auto a = make_descriptor("a", validate(blocks), 5);
    auto b = make_descriptor("b", validate(reversed), 5);
    for (Int m = 1; m <= 30; ++m) {
        CHECK(iterate_i(a, m) == iterate_i(b, m));
        CHECK(iterate_nu(a, m) == iterate_nu(b, m));
    }
}

TEST_CASE("even iterates pick up the negative-eigenvalue contributions") {
    auto d = validate({NormalFormBlock::neg_i2(), NormalFormBlock::n1(-1, -1),
                       NormalFormBlock::hyperbolic(-2)});
    auto g = make_descriptor("neg", d, 5);
    // q0 = q+ = 1: even iterates subtract q0 + q+ from i and add
    // q- + 2 q0 + q+ = 3 to nu.
    for (Int m = 1; m <= 12; ++m) {
        CHECK(iterate_i(g, m) == 5 * m - (m % 2 == 0 ? 2 : 0));
        CHECK(iterate_nu(g, m) == (m % 2 == 0 ? 3 : 0));
    }
    CHECK(analytical_period(g) == 2);
}

TEST_CASE("nullity period and analytical period on rational rotations") {
    auto d = validate({NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 3))),
                       NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 4))),
                       NormalFormBlock::hyperbolic(2)});
    CHECK(nullity_period(d) == 12);
    auto g = make_descriptor("rr", d, 6);
    CHECK(analytical_period(g) == 12);
    auto g2 = make_descriptor("rr2", validate({NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 3))),
                                               NormalFormBlock::i2(), NormalFormBlock::i2()}),
                              5);
    // nullity period 3 is odd and the linear index term 5+2-1 = 6 is even,
    // the even-iterate term vanishes: period stays 3.
    CHECK(analytical_period(g2) == 3);
}

TEST_CASE("analytical period agrees with a brute-force scan on random patterns") {
    std::mt19937 rng(20240817u);
    auto patterns = enumerate_patterns();
    std::shuffle(patterns.begin(), patterns.end(), rng);
    int tested = 0;
    for (const auto& b : patterns) {
        if (tested >= 40) break;
        if (b.r2 || b.r4 || b.r6) continue;  // rational-only: exact brute force
        AngleSupply supply;
        auto d = instantiate(b, supply);
        auto g = make_descriptor(b.label(), d, d.index_parity() ? 5 : 6);
        Int n = analytical_period(g);
        Int L = 4 * nullity_period(d) * 2;
        // max nullity over one full cycle
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
        CAPTURE(b.label());
        CHECK(n == brute);
        ++tested;
    }
    CHECK(tested == 40);
}

TEST_CASE("two-sided iteration bounds hold along sampled iterates") {
    std::mt19937 rng(911u);
    auto patterns = enumerate_patterns();
    std::shuffle(patterns.begin(), patterns.end(), rng);
    int tested = 0;
    for (const auto& b : patterns) {
        if (tested >= 60) break;
        AngleSupply supply;
        supply.shared_irrational = true;
        auto d = instantiate(b, supply);
        auto g = make_descriptor(b.label(), d, d.index_parity() ? 3 : 4);
        CAPTURE(b.label());
        for (Int m = 1; m <= 30; ++m) CHECK(bott_bound_check(g, m));
        ++tested;
    }
    CHECK(tested == 60);
}

TEST_CASE("pinching predicates separate fast and slow index growth") {
    auto fast = triple_rotation(Rat(7, 9), 3);
    auto repf = pinching_predicates(fast, 100);
    CHECK(repf.index_growth == Verdict::Pass);
    CHECK(repf.mean_above_5 == Verdict::Pass);

    auto slow = triple_rotation(Rat(1, 5), 3);  // 6 t = 2.68 < 5
    auto reps = pinching_predicates(slow, 100);
    CHECK(reps.mean_above_5 == Verdict::Fail);
    CHECK(reps.index_growth == Verdict::Fail);
    CHECK(reps.first_growth_failure > 0);
}

TEST_CASE("profile cache returns the same data as direct evaluation") {
    auto g = triple_rotation(Rat(1, 2), 5);
    IndexProfile prof(g);
    for (Int m : {Int(1), Int(2), Int(17), Int(2), Int(17)}) {
        auto direct = iterate_index(g, m);
        CHECK(prof.at(m).i == direct.i);
        CHECK(prof.at(m).nu == direct.nu);
        CHECK(prof.eps(m) == iterate_eps(g, m));
    }
    CHECK(prof.period() == analytical_period(g));
    CHECK(prof.elliptic_height() == 6);
}
