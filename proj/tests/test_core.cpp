#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace padic;
using testutil::Rng;

TEST_CASE("prime context validates primality") {
    CHECK_NOTHROW(PrimeCtx(2));
    CHECK_NOTHROW(PrimeCtx(7));
    CHECK_NOTHROW(PrimeCtx(97));
    CHECK_THROWS_AS(PrimeCtx(1), std::invalid_argument);
    CHECK_THROWS_AS(PrimeCtx(4), std::invalid_argument);
    CHECK_THROWS_AS(PrimeCtx(91), std::invalid_argument);  // 7*13
}

TEST_CASE("valuation of rationals") {
    PrimeCtx p3(3), p2(2);
    CHECK(valuation({Rat(9), p3}) == 2);
    CHECK(val_is_inf(valuation({Rat(0), p2})));
    CHECK(valuation({Rat(7, 9), p3}) == -2);
    CHECK(valuation({Rat(-6), p2}) == 1);
}

TEST_CASE("absolute value as exact p-power") {
    PrimeCtx p3(3), p2(2), p5(5);
    CHECK(abs_p({Rat(7, 9), p3}).to_rational(3) == Rat(9));
    CHECK(abs_p({Rat(12), p2}).to_rational(2) == Rat(1, 4));
    CHECK(abs_p({Rat(0), p5}).is_zero());
    CHECK(abs_p({Rat(0), p5}).to_rational(5) == 0);
}

TEST_CASE("vector sup norm") {
    PrimeCtx p3(3), p5(5), p2(2);
    CHECK(vec_norm({{Rat(9), Rat(1, 3)}, p3}).to_rational(3) == Rat(3));
    CHECK(vec_norm({{Rat(0), Rat(0)}, p5}).is_zero());
    CHECK(vec_norm({{Rat(1), Rat(2)}, p2}).to_rational(2) == Rat(1));
}

TEST_CASE("fractional part lands in [0,1) with p-power denominator") {
    PrimeCtx p2(2), p3(3);
    CHECK(fractional_part({Rat(1, 2), p2}) == Rat(1, 2));
    CHECK(fractional_part({Rat(5), p3}) == Rat(0));

    // oracle: the unique r = k/3 with ord(1/6 - r) >= 0
    Rat expected(-1);
    for (long k = 0; k < 3; ++k) {
        if (ord_p(Rat(Rat(1, 6) - Rat(k, 3)), 3) >= 0) expected = Rat(k, 3);
    }
    CHECK(expected == Rat(2, 3));
    CHECK(fractional_part({Rat(1, 6), p3}) == expected);

    Rng rng(11);
    const std::vector<long> primes{2, 3, 5, 7};
    for (int i = 0; i < 300; ++i) {
        const long p = primes[rng.uniform(0, 3)];
        const Rat x = rng.rational(p, -5, 5);
        const Rat r = fractional_part({x, PrimeCtx(p)});
        CHECK(r >= 0);
        CHECK(r < 1);
        CHECK(ord_p(Rat(x - r), p) >= 0);
    }
}

TEST_CASE("additive character") {
    PrimeCtx p2(2), p3(3);
    CHECK(testutil::close(character({Rat(0), p2}).value(), {1.0, 0.0}, 1e-15));
    CHECK(testutil::close(character({Rat(1, 2), p2}).value(), {-1.0, 0.0}, 1e-15));
    CHECK(testutil::close(character({Rat(7), p3}).value(), {1.0, 0.0}, 1e-15));

    Rng rng(12);
    const std::vector<long> primes{2, 3, 5};
    for (int i = 0; i < 300; ++i) {
        PrimeCtx ctx(primes[rng.uniform(0, 2)]);
        const Rat x = rng.rational(ctx.p(), -4, 4), y = rng.rational(ctx.p(), -4, 4);
        const auto lhs = character({Rat(x + y), ctx}).value();
        const auto rhs = character({x, ctx}).value() * character({y, ctx}).value();
        CHECK(testutil::close(lhs, rhs, 1e-12));
    }
}

TEST_CASE("ultrametric and multiplicativity") {
    Rng rng(13);
    const std::vector<long> primes{2, 3, 5, 7};
    for (int i = 0; i < 500; ++i) {
        PrimeCtx ctx(primes[rng.uniform(0, 3)]);
        const Rat x = rng.rational(ctx.p(), -6, 6), y = rng.rational(ctx.p(), -6, 6);
        const AbsValue ax = abs_p(x, ctx), ay = abs_p(y, ctx);
        const AbsValue axy = abs_p(Rat(x + y), ctx);
        const AbsValue mx = std::max(ax, ay);
        CHECK(axy <= mx);
        if (!(ax == ay)) CHECK(axy == mx);
        CHECK(abs_p(Rat(x * y), ctx) == ax * ay);
    }
}

TEST_CASE("ball subdivision partitions the parent") {
    PrimeCtx p2(2), p3(3);
    const Ball z2({{Rat(0)}, p2}, 0);
    auto children = z2.subdivide();
    REQUIRE(children.size() == 2);
    CHECK(children[0].center().coords[0] == Rat(0));
    CHECK(children[1].center().coords[0] == Rat(1));

    CHECK(Ball({{Rat(0)}, p3}, 0).subdivide().size() == 3);
    CHECK(Ball({{Rat(0), Rat(0)}, p2}, 0).subdivide().size() == 4);

    Rng rng(14);
    const std::vector<long> primes{2, 3, 5};
    for (int trial = 0; trial < 50; ++trial) {
        PrimeCtx ctx(primes[rng.uniform(0, 2)]);
        const size_t n = static_cast<size_t>(rng.uniform(1, 2));
        const long level = rng.uniform(-2, 2);
        Ball parent({rng.vector(ctx.p(), n, -1, 2), ctx}, level);
        auto kids = parent.subdivide();
        CHECK(kids.size() == static_cast<size_t>(std::pow(ctx.p(), n)));
        for (int s = 0; s < 20; ++s) {
            PadicVector x{rng.vector(ctx.p(), n, level - 2, level + 4), ctx};
            size_t hits = 0;
            for (const Ball& ch : kids)
                if (ch.contains(x)) ++hits;
            CHECK(hits == (parent.contains(x) ? 1u : 0u));
        }
    }
}

TEST_CASE("coset representatives are canonical") {
    Rng rng(15);
    const std::vector<long> primes{2, 3, 5, 7};
    for (int i = 0; i < 300; ++i) {
        PrimeCtx ctx(primes[rng.uniform(0, 3)]);
        const long m = rng.uniform(-4, 4);
        const Rat x = rng.rational(ctx.p(), -5, 5);
        const Rat r = coset_rep(x, m, ctx);
        CHECK(r >= 0);
        CHECK(r < pow_p(ctx.p(), m));
        CHECK(ord_p(Rat(x - r), ctx.p()) >= m);
        CHECK(coset_rep(r, m, ctx) == r);
    }
}

TEST_CASE("rational reconstruction recovers small fractions") {
    const Int m = pow_int(Int(3), 40);
    const Int r1 = residue_mod(Rat(-1), m);
    auto c1 = rational_reconstruct(r1, m);
    REQUIRE(c1.has_value());
    CHECK(*c1 == Rat(-1));

    const Int r2 = residue_mod(Rat(22, 7), m);
    auto c2 = rational_reconstruct(r2, m);
    REQUIRE(c2.has_value());
    CHECK(*c2 == Rat(22, 7));
}

TEST_CASE("rational parsing round trip") {
    CHECK(rat_from_string("-5/10") == Rat(-1, 2));
    CHECK(rat_from_string("42") == Rat(42));
    CHECK(rat_to_string(Rat(-1, 2)) == "-1/2");
    CHECK(rat_to_string(Rat(7)) == "7");
    CHECK_THROWS_AS(rat_from_string("x"), std::invalid_argument);
    CHECK_THROWS_AS(rat_from_string(""), std::invalid_argument);
}
