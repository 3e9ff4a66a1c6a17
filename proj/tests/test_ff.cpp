// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "igusa/ff.hpp"
#include "igusa/poly.hpp"

using namespace igusa;
using namespace igusa::ff;

namespace {

template <class F>
void check_field_axioms(const F& f, Rng& rng, int rounds) {
    for (int i = 0; i < rounds; ++i) {
        auto a = f.random(rng), b = f.random(rng), c = f.random(rng);
        CHECK(f.equal(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c)));
        CHECK(f.equal(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c))));
        CHECK(f.equal(f.add(a, f.neg(a)), f.zero()));
        if (!f.is_zero(a)) CHECK(f.equal(f.mul(a, f.inv(a)), f.one()));
        CHECK(f.equal(f.mul(a, f.one()), a));
    }
}

} // namespace

TEST_CASE("prime field basics") {
    PrimeField f7(Int(7));
    CHECK(f7.add(Int(5), Int(4)) == 2);
    CHECK(f7.inv(Int(3)) == 5);
    CHECK_THROWS(PrimeField(Int(6)));
    Rng rng(11);
    check_field_axioms(f7, rng, 50);
    PrimeField f113(Int(113));
    check_field_axioms(f113, rng, 50);
}

TEST_CASE("prime field sqrt") {
    PrimeField f7(Int(7));
    Rng rng(3);
    auto r0 = f7.sqrt(Int(0), rng);
    REQUIRE(r0.has_value());
    CHECK(*r0 == 0);
    auto r4 = f7.sqrt(Int(4), rng);
    REQUIRE(r4.has_value());
    CHECK(f7.mul(*r4, *r4) == 4);
    CHECK((*r4 == 2 || *r4 == 5));
    // 3 is a non-residue mod 7: 1,2,4 are the nonzero squares
    CHECK(!f7.sqrt(Int(3), rng).has_value());
    // exhaustive: exactly (p-1)/2 nonzero squares
    for (Int p : {5, 7, 13, 113}) {
        PrimeField f(p);
        int squares = 0;
        for (Int a = 1; a < p; ++a)
            if (f.is_square(a)) ++squares;
        CHECK(Int(squares) == (p - 1) / 2);
        for (Int a = 0; a < p; ++a) {
            auto r = f.sqrt(a, rng);
            if (r) CHECK(f.mul(*r, *r) == a);
        }
    }
}

TEST_CASE("make_extension degrees and determinism") {
    PrimeField f7(Int(7));
    Rng rng1(99), rng2(99);
    auto e1 = make_extension(f7, 2, rng1);
    auto e2 = make_extension(f7, 2, rng2);
    CHECK(e1.modulus() == e2.modulus());
    CHECK(e1.order() == 49);

    // degree 1: F_7 with a shifted generator
    Rng rng3(5);
    auto l = make_extension(f7, 1, rng3);
    CHECK(l.order() == 7);

    // p=113, k=16: verify irreducibility independently by re-running the
    // factor screen on the produced modulus
    PrimeField f113(Int(113));
    Rng rng4(7);
    auto big = make_extension(f113, 16, rng4);
    CHECK(poly_is_irreducible(f113, big.modulus()));
    CHECK(big.order() == pow_int(Int(113), 16));
}

TEST_CASE("extension field axioms across sizes") {
    Rng rng(17);
    for (auto& [p, k] : std::vector<std::pair<int, int>>{{5, 2}, {7, 3}, {113, 16}, {5, 1}}) {
        PrimeField fp((Int(p)));
        auto fq = make_extension(fp, k, rng);
        check_field_axioms(fq, rng, 25);
    }
}

TEST_CASE("frobenius fixes prime field and has order k") {
    Rng rng(23);
    PrimeField f7(Int(7));
    auto f49 = make_extension(f7, 2, rng);
    auto a = f49.from_int(Int(4));
    CHECK(f49.equal(f49.frobenius(a), a));
    auto g = f49.gen();
    auto g7 = f49.frobenius(g);
    CHECK(f49.equal(f49.frobenius(g7), g)); // order-2 automorphism
    CHECK(f49.equal(g7, f49.pow(g, Int(7))));

    auto f74 = make_extension(f7, 4, rng);
    for (int i = 0; i < 10; ++i) {
        auto x = f74.random(rng);
        CHECK(f74.equal(f74.frobenius(x), f74.pow(x, Int(7)))); // naive oracle
        auto y = x;
        for (int j = 0; j < 4; ++j) y = f74.frobenius(y);
        CHECK(f74.equal(y, x));
    }
}

TEST_CASE("extension sqrt") {
    Rng rng(31);
    PrimeField f7(Int(7));
    auto f343 = make_extension(f7, 3, rng);
    int squares = 0;
    // exhaustive square count for q = 343
    std::vector<FqElem> all;
    for (int a = 0; a < 7; ++a)
        for (int b = 0; b < 7; ++b)
            for (int c = 0; c < 7; ++c) all.push_back(FqElem{Int(a), Int(b), Int(c)});
    for (auto& x : all) {
        if (f343.is_zero(x)) continue;
        if (f343.is_square(x)) ++squares;
    }
    CHECK(squares == 171); // (343-1)/2
    for (int i = 0; i < 40; ++i) {
        auto x = f343.random(rng);
        auto r = f343.sqrt(x, rng);
        if (r) CHECK(f343.equal(f343.mul(*r, *r), x));
        auto sq = f343.mul(x, x);
        auto r2 = f343.sqrt(sq, rng);
        REQUIRE(r2.has_value());
        CHECK(f343.equal(f343.mul(*r2, *r2), sq));
    }
}

TEST_CASE("kronecker path agrees with schoolbook") {
    // k = 30 triggers the packed multiplication; cross-check against plain
    // polynomial multiplication mod the modulus
    Rng rng(41);
    PrimeField f113(Int(113));
    auto fq = make_extension(f113, 30, rng);
    for (int i = 0; i < 20; ++i) {
        auto a = fq.random(rng), b = fq.random(rng);
        auto c = fq.mul(a, b);
        Poly<PrimeField> pa(a.begin(), a.end()), pb(b.begin(), b.end());
        poly_trim(f113, pa);
        poly_trim(f113, pb);
        auto pc = poly_mod(f113, poly_mul(f113, pa, pb), fq.modulus());
        pc.resize(30, Int(0));
        CHECK(c == pc);
        if (!fq.is_zero(a)) CHECK(fq.equal(fq.mul(c, fq.inv(a)), b));
    }
}

TEST_CASE("polynomial factorization over F_p") {
    PrimeField f7(Int(7));
    Rng rng(51);
    // (x^2+1)(x+3)^2 x over F_7; x^2+1 irreducible since -1 is a non-residue
    Poly<PrimeField> x2p1{Int(1), Int(0), Int(1)};
    Poly<PrimeField> xp3{Int(3), Int(1)};
    Poly<PrimeField> x{Int(0), Int(1)};
    auto prod = poly_mul(f7, x2p1, poly_mul(f7, poly_mul(f7, xp3, xp3), x));
    auto fac = poly_factor(f7, prod, rng);
    Int total_deg = 0;
    for (auto& [g, m] : fac) total_deg += poly_deg(g) * m;
    CHECK(total_deg == 5);
    bool saw_quadratic = false;
    for (auto& [g, m] : fac)
        if (poly_deg(g) == 2) {
            saw_quadratic = true;
            CHECK(m == 1);
            CHECK(g == x2p1);
        }
    CHECK(saw_quadratic);

    auto roots = poly_roots(f7, prod, rng);
    CHECK(roots == std::vector<Int>{Int(0), Int(4)});
}

TEST_CASE("factorization over F_2 and big p") {
    PrimeField f2(Int(2));
    Rng rng(61);
    // x^4+x+1 irreducible over F_2; (x^2+x+1)^2 = x^4+x^2+1
    Poly<PrimeField> quartic{Int(1), Int(1), Int(0), Int(0), Int(1)};
    CHECK(poly_is_irreducible(f2, quartic));
    Poly<PrimeField> sq{Int(1), Int(0), Int(1), Int(0), Int(1)};
    auto fac = poly_factor(f2, sq, rng);
    REQUIRE(fac.size() == 1);
    CHECK(fac[0].second == 2);
    CHECK(poly_deg(fac[0].first) == 2);

    PrimeField fbig(Int("9223372036854775837"));
    // split a product of two linears
    Poly<PrimeField> a{Int(5), Int(1)};
    Poly<PrimeField> b{Int("9223372036854775831"), Int(1)};
    auto roots = poly_roots(fbig, poly_mul(fbig, a, b), rng);
    CHECK(roots.size() == 2);
}
