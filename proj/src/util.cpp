// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "igusa/util.hpp"

#include <algorithm>
#include <map>

namespace igusa {

namespace {

Int pollard_rho(const Int& n, Rng& rng) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    while (true) {
        Int c = rng.below(n - 3) + 1;
        Int x = rng.below(n), y = x, d = 1;
        // Brent-style with batched gcds
        Int prod = 1;
        int cnt = 0;
        while (d == 1) {
            x = mod(x * x + c, n);
            y = mod(y * y + c, n);
            y = mod(y * y + c, n);
            Int diff = x - y;
            if (diff == 0) break;
            prod = mod(prod * diff, n);
            if (++cnt % 32 == 0) {
                d = gcd(prod, n);
                if (d == n) break;
            }
        }
        if (d == 1) d = gcd(prod, n);
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(const Int& n, Rng& rng, std::map<Int, int>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out[n] += 1;
        return;
    }
    Int d = pollard_rho(n, rng);
    factor_rec(d, rng, out);
    factor_rec(divexact(n, d), rng, out);
}

} // namespace

std::vector<std::pair<Int, int>> factor(const Int& n, Rng& rng) {
    if (n <= 0) throw std::runtime_error("factor: needs n > 0");
    std::map<Int, int> acc;
    Int m = n;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul}) {
        Int pp(p);
        int v = valuation(m, pp);
        if (v) acc[pp] = v;
    }
    factor_rec(m, rng, acc);
    return {acc.begin(), acc.end()};
}

std::vector<std::pair<Int, int>> factor(const Int& n) {
    Rng rng(0x9a2f3b41u);
    return factor(n, rng);
}

std::vector<Int> divisors(const Int& n, Rng& rng) {
    auto fac = factor(n, rng);
    std::vector<Int> ds{1};
    for (auto& [p, e] : fac) {
        size_t sz = ds.size();
        Int pe = 1;
        for (int i = 1; i <= e; ++i) {
            pe *= p;
            for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pe);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

} // namespace igusa
