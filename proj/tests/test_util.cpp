// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "igusa/linalg.hpp"
#include "igusa/util.hpp"

using namespace igusa;

TEST_CASE("integer helpers") {
    CHECK(isqrt(Int(24)) == 4);
    CHECK(isqrt_exact(Int(49)) == 7);
    CHECK_THROWS(isqrt_exact(Int(48)));
    CHECK(balanced_mod(Int(5), Int(7)) == -2);
    CHECK(balanced_mod(Int(3), Int(7)) == 3);
    CHECK(balanced_mod(Int(-10), Int(7)) == -3);
    CHECK(divexact(Int(84), Int(7)) == 12);
    CHECK_THROWS(divexact(Int(85), Int(7)));
    CHECK(sqrt_floor(Rat(17, 4)) == 2);
    CHECK(sqrt_ceil(Rat(17, 4)) == 3);
    CHECK(sqrt_ceil(Rat(9, 4)) == 2); // sqrt is 3/2, not an integer
    CHECK(sqrt_floor(Rat(9, 4)) == 1);
    CHECK(sqrt_ceil(Rat(16, 1)) == 4);
}

TEST_CASE("factor and divisors") {
    Rng rng(1);
    auto f = factor(Int("3603600"), rng); // 2^4 3^2 5^2 7 11 13
    Int back = 1;
    for (auto& [p, e] : f)
        for (int i = 0; i < e; ++i) back *= p;
    CHECK(back == 3603600);
    CHECK(f.front().first == 2);
    CHECK(f.front().second == 4);

    auto big = factor(Int("1000000007") * Int("998244353"), rng);
    CHECK(big.size() == 2);

    auto ds = divisors(Int(36), rng);
    CHECK(ds.size() == 9);
    CHECK(ds.front() == 1);
    CHECK(ds.back() == 36);
}

TEST_CASE("rng determinism and forking") {
    Rng a(42), b(42);
    for (int i = 0; i < 10; ++i) CHECK(a.below(Int(1000)) == b.below(Int(1000)));
    Rng c = Rng(42).fork(7, 9);
    Rng d = Rng(42).fork(7, 9);
    CHECK(c.u64() == d.u64());
    Rng e = Rng(42).fork(7, 10);
    CHECK(c.seed() != e.seed());
}

TEST_CASE("hnf basic") {
    ZMat m = {{2, 0, 0, 0}, {0, 2, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 2}, {1, 1, 1, 1}};
    auto h = hnf(m);
    REQUIRE(h.size() == 4);
    CHECK(hnf_det(h) == 8);
    CHECK(hnf_contains(h, {1, 1, 1, 1}));
    CHECK(hnf_contains(h, {2, 0, 0, 0}));
    CHECK(!hnf_contains(h, {1, 0, 0, 0}));
    // canonical: same lattice from a different generating set
    ZMat m2 = {{3, 1, 1, 1}, {2, 0, 0, 0}, {1, 3, 1, 1}, {0, 0, 2, 0}, {1, 1, 1, 3}};
    CHECK(hnf(m2) == h);
}

TEST_CASE("qmat solve and inverse") {
    QMat a = {{Rat(2), Rat(1)}, {Rat(1), Rat(3)}};
    auto x = qmat_solve(a, {Rat(3), Rat(5)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Rat(4, 5));
    CHECK((*x)[1] == Rat(7, 5));
    auto inv = qmat_inverse(a);
    auto prod = qmat_mul(a, inv);
    CHECK(prod == qmat_identity(2));
    CHECK(qmat_det(a) == Rat(5));
}

TEST_CASE("lll and short vector enumeration") {
    // lattice Z^2 with a skew basis
    ZMat basis = {{1, 0}, {1000, 1}};
    QMat gram(2, QVec(2));
    auto ip = [&](const std::vector<Int>& u, const std::vector<Int>& v) {
        Rat s = 0;
        for (size_t i = 0; i < u.size(); ++i) s += Rat(u[i]) * Rat(v[i]);
        return s;
    };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) gram[i][j] = ip(basis[i], basis[j]);
    lll_reduce(basis, gram);
    CHECK(gram[0][0] == 1);
    CHECK(gram[1][1] == 1);

    int count = 0;
    enumerate_short_vectors(gram, Rat(1),
                            [&](const std::vector<Int>&) { ++count; });
    CHECK(count == 4); // (+-1, 0), (0, +-1)
}
