#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "geoindex/config.hpp"
#include "geoindex/index_jump.hpp"

using namespace geoindex;

#ifndef GEOINDEX_DATA_DIR
#define GEOINDEX_DATA_DIR "data"
#endif

namespace {

SystemConfig pinned_config() {
    return load_config_file(std::string(GEOINDEX_DATA_DIR) + "/tcg.json");
}

}  // namespace

TEST_CASE("the common-multiple of rotation denominators") {
    auto mk = [](std::vector<NormalFormBlock> blocks) {
        return validate(std::move(blocks));
    };
    System sys;
    sys.push_back(make_descriptor(
        "a",
        mk({NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 3))),
            NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 4))),
            NormalFormBlock::hyperbolic(2)}),
        6));
    // 1/3 needs M=3; 1/4 needs 4/gcd(2,4)=2.
    CHECK(compute_Mbar(sys) == 6);
    sys.push_back(make_descriptor(
        "b", mk({NormalFormBlock::two_four(AngleFraction::rational(Rat(2, 5)), true),
                 NormalFormBlock::hyperbolic(-2)}),
        5));
    // 2/5 needs 5/gcd(4,5)=5.
    CHECK(compute_Mbar(sys) == 30);
}

TEST_CASE("aligned splitting sum at jump iterates counts only exact hits") {
    auto d = validate({NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 3))),
                       NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 4))),
                       NormalFormBlock::hyperbolic(2)});
    auto g = make_descriptor("g", d, 6);
    // m_k = 6: 2 m_k t integral for both angles. S^- sits at the angles
    // themselves; m*t integral iff 3|m (first) or 4|m (second).
    CHECK(q_of_m(g, Int(6), Int(1)) == 0);
    CHECK(q_of_m(g, Int(6), Int(3)) == 1);
    CHECK(q_of_m(g, Int(6), Int(4)) == 1);
    CHECK(q_of_m(g, Int(6), Int(12)) == 2);
    // With m_k = 1 the 1/3 angle never aligns (2/3 not integral).
    CHECK(q_of_m(g, Int(1), Int(3)) == 0);
}

TEST_CASE("fraction resolution distinguishes chi = 0 and chi = 1") {
    Precision prec;
    MeanIndexValue hat;
    hat.rational_part = Rat(6);
    // N = 60: 60/(1*6) = 10 exactly -> chi = 0 within any eps.
    auto r = detail::resolve_frac(hat, 1, 60, Rat(1, 1000), prec);
    REQUIRE(r);
    CHECK(r->floor == 10);
    CHECK(r->chi == 0);
    CHECK(r->within_eps);
    // N = 59: 59/6 = 9.8333 -> chi = 1, not within eps.
    r = detail::resolve_frac(hat, 1, 59, Rat(1, 1000), prec);
    REQUIRE(r);
    CHECK(r->floor == 9);
    CHECK(r->chi == 1);
    CHECK(!r->within_eps);
    // Exact half fraction: no admissible chi.
    CHECK(!detail::resolve_frac(hat, 1, 3, Rat(1, 1000), prec));

    // Irrational mean index resolves through the enclosure.
    auto g = make_descriptor(
        "w",
        validate({NormalFormBlock::rotation(
                      AngleFraction::irrational(IrrationalWitness::sqrt_of(Rat(1, 2)))),
                  NormalFormBlock::i2(), NormalFormBlock::i2()}),
        5);
    auto hat2 = mean_index(g);  // 6 + 2 sqrt(1/2) = 7.4142...
    auto r2 = detail::resolve_frac(hat2, 1, 100, Rat(1, 100), prec);
    REQUIRE(r2);
    CHECK(r2->floor == 13);  // 100/7.4142 = 13.4875...
    CHECK(r2->chi == 0);
    CHECK(!r2->within_eps);
}

TEST_CASE("the pinned three-geodesic system verifies exactly") {
    auto cfg = pinned_config();
    REQUIRE(cfg.geodesics.size() == 3);
    REQUIRE(cfg.tuple.has_value());
    auto rep = verify_tuple(*cfg.tuple, cfg.geodesics);
    CHECK(rep.verified());
    CHECK(rep.N == 300642);
    REQUIRE(rep.geodesics.size() == 3);
    // Frozen values for the pinned tuple.
    CHECK(rep.geodesics[0].m_k == 56816);
    CHECK(rep.geodesics[1].m_k == 29352);
    CHECK(rep.geodesics[2].m_k == 50107);
    CHECK(rep.geodesics[0].delta == 3);
    CHECK(rep.geodesics[1].delta == 0);
    CHECK(rep.geodesics[2].delta == 0);
    for (const auto& gr : rep.geodesics) CHECK(gr.pinched);

    const Int twoN = 2 * rep.N;
    // Even-iterate index sums frozen against the closed form.
    auto s1 = iterate_index(cfg.geodesics[0], 2 * rep.geodesics[0].m_k);
    CHECK(s1.i + s1.nu == twoN + 3);
    auto s2 = iterate_index(cfg.geodesics[1], 2 * rep.geodesics[1].m_k);
    CHECK(s2.i + s2.nu == twoN - 3);
    auto s3 = iterate_index(cfg.geodesics[2], 2 * rep.geodesics[2].m_k);
    CHECK(s3.i + s3.nu == twoN + 2);

    // Forward and backward identities, spot-checked directly.
    for (size_t k = 0; k < 3; ++k) {
        const auto& g = cfg.geodesics[k];
        const Int M = rep.geodesics[k].m_k;
        for (Int m = 1; m <= 4; ++m) {
            CHECK(iterate_i(g, 2 * M + m) == twoN + iterate_i(g, m));
            CHECK(iterate_nu(g, 2 * M + m) == iterate_nu(g, m));
            CHECK(iterate_nu(g, 2 * M - m) == iterate_nu(g, m));
        }
    }
}

TEST_CASE("perturbing the tuple breaks verification") {
    auto cfg = pinned_config();
    JumpTuple t = *cfg.tuple;
    t.m[0] += 1;
    CHECK(!verify_tuple(t, cfg.geodesics).verified());
    JumpTuple t2 = *cfg.tuple;
    t2.N += 3;
    CHECK(!verify_tuple(t2, cfg.geodesics).verified());
    JumpTuple t3 = *cfg.tuple;
    t3.m.pop_back();
    CHECK_THROWS_AS(verify_tuple(t3, cfg.geodesics), ValidationError);
}

TEST_CASE("search finds the minimal verified tuple of a rational system") {
    System sys;
    sys.push_back(make_descriptor(
        "flat",
        validate({NormalFormBlock::i2(), NormalFormBlock::i2(), NormalFormBlock::hyperbolic(2)}),
        6));  // ihat = 8
    JumpSearchParams p;
    p.count = 2;
    auto tuples = find_jump_tuples(sys, p);
    REQUIRE(tuples.size() == 2);
    CHECK(tuples[0].N == 24);  // smallest multiple of 3 divisible by ihat = 8
    CHECK(tuples[0].m[0] == 3);
    CHECK(tuples[0].chi[0] == 0);
    CHECK(tuples[1].N == 48);
    CHECK(verify_tuple(tuples[0], sys).verified());
    CHECK(verify_tuple(tuples[1], sys).verified());
}

TEST_CASE("search reports exhaustion instead of fabricating a tuple") {
    System sys;
    sys.push_back(make_descriptor(
        "flat",
        validate({NormalFormBlock::i2(), NormalFormBlock::i2(), NormalFormBlock::hyperbolic(2)}),
        6));
    JumpSearchParams p;
    p.N_limit = 20;  // below the first hit at N = 24
    CHECK_THROWS_AS(find_jump_tuples(sys, p), SearchExhausted);
    p.N_limit = 24;
    CHECK_NOTHROW(find_jump_tuples(sys, p));
}

TEST_CASE("search parameter validation") {
    System sys;
    sys.push_back(make_descriptor(
        "flat",
        validate({NormalFormBlock::i2(), NormalFormBlock::i2(), NormalFormBlock::hyperbolic(2)}),
        6));
    JumpSearchParams p;
    p.eps = 0;
    CHECK_THROWS_AS(find_jump_tuples(sys, p), ValidationError);
    p = {};
    p.M0 = 0;
    CHECK_THROWS_AS(find_jump_tuples(sys, p), ValidationError);
    CHECK_THROWS_AS(find_jump_tuples({}, {}), ValidationError);
    // Mean index must be positive for the scan to make sense: three slow
    // rotations give ihat = 1 - 3 + 6/8 < 0.
    System neg;
    neg.push_back(make_descriptor(
        "neg",
        validate({NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 8))),
                  NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 8))),
                  NormalFormBlock::rotation(AngleFraction::rational(Rat(1, 8)))}),
        1));
    CHECK_THROWS_AS(find_jump_tuples(neg, {}), MeanIndexNotPositive);
}

TEST_CASE("gap-splitting count refines irrational fractional parts") {
    auto cfg = pinned_config();
    // First geodesic: three rotations at sqrt(7)/3, m_k = 56816, the
    // fractional part of 2 m_k t lies inside (0, 1/100): delta counts all
    // three S^- contributions.
    CHECK(delta_k(cfg.geodesics[0], cfg.tuple->m[0], cfg.tuple->delta) == 3);
    // Tiny delta excludes the gap.
    CHECK(delta_k(cfg.geodesics[0], cfg.tuple->m[0], pow10_inv(9)) == 0);
}
