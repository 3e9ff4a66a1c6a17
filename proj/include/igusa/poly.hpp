// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include "igusa/ff.hpp"

#include <algorithm>
#include <optional>
#include <tuple>
#include <vector>

namespace igusa::ff {

// Dense univariate polynomials over a field F (PrimeField or ExtField),
// lowest coefficient first. No trailing zeros; the zero polynomial is empty.
template <class F>
using Poly = std::vector<typename F::Elem>;

template <class T>
int poly_deg(const std::vector<T>& a) {
    return static_cast<int>(a.size()) - 1;
}

template <class T>
bool poly_is_zero(const std::vector<T>& a) {
    return a.empty();
}

inline Int char_of(const PrimeField& f) { return f.p(); }
inline Int char_of(const ExtField& f) { return f.p(); }
inline unsigned long char_ui(const PrimeField& f) { return mpz_get_ui(f.p().get_mpz_t()); }
inline unsigned long char_ui(const ExtField& f) { return mpz_get_ui(f.p().get_mpz_t()); }
inline Int pth_root(const PrimeField& f, const Int& a) {
    (void)f;
    return a;
}
inline FqElem pth_root(const ExtField& f, const FqElem& a) {
    return f.frobenius_iter(a, f.degree() - 1);
}

template <class F>
void poly_trim(const F& f, Poly<F>& a) {
    while (!a.empty() && f.is_zero(a.back())) a.pop_back();
}

template <class F>
Poly<F> poly_from_coeffs(const F& f, std::vector<typename F::Elem> c) {
    poly_trim(f, c);
    return c;
}

template <class F>
Poly<F> poly_one(const F& f) {
    return {f.one()};
}

template <class F>
Poly<F> poly_x(const F& f) {
    return {f.zero(), f.one()};
}

template <class F>
Poly<F> poly_add(const F& f, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r(std::max(a.size(), b.size()), f.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b[i]);
    poly_trim(f, r);
    return r;
}

template <class F>
Poly<F> poly_sub(const F& f, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r(std::max(a.size(), b.size()), f.zero());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b[i]);
    poly_trim(f, r);
    return r;
}

template <class F>
Poly<F> poly_neg(const F& f, const Poly<F>& a) {
    Poly<F> r = a;
    for (auto& c : r) c = f.neg(c);
    return r;
}

template <class F>
Poly<F> poly_scale(const F& f, const typename F::Elem& s, const Poly<F>& a) {
    if (f.is_zero(s)) return {};
    Poly<F> r = a;
    for (auto& c : r) c = f.mul(c, s);
    poly_trim(f, r);
    return r;
}

template <class F>
Poly<F> poly_mul(const F& f, const Poly<F>& a, const Poly<F>& b) {
    if (a.empty() || b.empty()) return {};
    Poly<F> r(a.size() + b.size() - 1, f.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (f.is_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
    poly_trim(f, r);
    return r;
}

template <class F>
std::pair<Poly<F>, Poly<F>> poly_divrem(const F& f, Poly<F> a, const Poly<F>& b) {
    if (b.empty()) throw std::runtime_error("poly_divrem: division by zero polynomial");
    if (a.size() < b.size()) return {{}, std::move(a)};
    auto lc_inv = f.inv(b.back());
    size_t qsize = a.size() - b.size() + 1;
    Poly<F> q(qsize, f.zero());
    for (size_t off = qsize; off-- > 0;) {
        size_t i = off + b.size() - 1;
        if (f.is_zero(a[i])) continue;
        auto c = f.mul(a[i], lc_inv);
        q[off] = c;
        for (size_t j = 0; j < b.size(); ++j)
            a[off + j] = f.sub(a[off + j], f.mul(c, b[j]));
    }
    poly_trim(f, a);
    poly_trim(f, q);
    return {std::move(q), std::move(a)};
}

template <class F>
Poly<F> poly_mod(const F& f, const Poly<F>& a, const Poly<F>& b) {
    return poly_divrem(f, a, b).second;
}

template <class F>
Poly<F> poly_mulmod(const F& f, const Poly<F>& a, const Poly<F>& b, const Poly<F>& m) {
    return poly_mod(f, poly_mul(f, a, b), m);
}

template <class F>
Poly<F> poly_monic(const F& f, const Poly<F>& a) {
    if (a.empty()) return a;
    return poly_scale(f, f.inv(a.back()), a);
}

template <class F>
Poly<F> poly_gcd(const F& f, Poly<F> a, Poly<F> b) {
    while (!b.empty()) {
        auto r = poly_mod(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? a : poly_monic(f, a);
}

// extended gcd: (g, s, t) with s*a + t*b = g, g monic (or zero)
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> poly_xgcd(const F& f, Poly<F> a, Poly<F> b) {
    Poly<F> s0 = poly_one(f), s1 = {}, t0 = {}, t1 = poly_one(f);
    while (!b.empty()) {
        auto [q, r] = poly_divrem(f, a, b);
        a = std::move(b);
        b = std::move(r);
        auto s2 = poly_sub(f, s0, poly_mul(f, q, s1));
        s0 = std::move(s1);
        s1 = std::move(s2);
        auto t2 = poly_sub(f, t0, poly_mul(f, q, t1));
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (!a.empty()) {
        auto d = f.inv(a.back());
        a = poly_scale(f, d, a);
        s0 = poly_scale(f, d, s0);
        t0 = poly_scale(f, d, t0);
    }
    return {a, s0, t0};
}

template <class F>
Poly<F> poly_invmod(const F& f, const Poly<F>& a, const Poly<F>& m) {
    auto [g, s, t] = poly_xgcd(f, a, m);
    (void)t;
    if (poly_deg(g) != 0) throw std::runtime_error("poly_invmod: not invertible");
    return poly_mod(f, s, m);
}

template <class F>
Poly<F> poly_powmod(const F& f, Poly<F> base, Int e, const Poly<F>& m) {
    Poly<F> r = poly_one(f);
    base = poly_mod(f, base, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = poly_mulmod(f, r, base, m);
        base = poly_mulmod(f, base, base, m);
        e >>= 1;
    }
    return r;
}

template <class F>
typename F::Elem poly_eval(const F& f, const Poly<F>& a, const typename F::Elem& x) {
    auto r = f.zero();
    for (size_t i = a.size(); i-- > 0;) r = f.add(f.mul(r, x), a[i]);
    return r;
}

template <class F>
Poly<F> poly_derivative(const F& f, const Poly<F>& a) {
    if (a.size() <= 1) return {};
    Poly<F> r(a.size() - 1, f.zero());
    for (size_t i = 1; i < a.size(); ++i) r[i - 1] = f.mul(a[i], f.from_int(Int(i)));
    poly_trim(f, r);
    return r;
}

template <class F>
Poly<F> poly_random_monic(const F& f, unsigned deg, Rng& rng) {
    Poly<F> r(deg + 1, f.zero());
    for (unsigned i = 0; i < deg; ++i) r[i] = f.random(rng);
    r[deg] = f.one();
    return r;
}

// Irreducibility of monic m: incremental factor screen. m of degree n is
// reducible iff it has an irreducible factor of degree <= n/2, which shows up
// as gcd(x^(q^i) - x, m) != 1 for some i <= n/2.
template <class F>
bool poly_is_irreducible(const F& f, const Poly<F>& m) {
    int n = poly_deg(m);
    if (n <= 0) return false;
    if (n == 1) return true;
    Poly<F> t = poly_powmod(f, poly_x(f), f.order(), m);
    for (int i = 1; i <= n / 2; ++i) {
        if (i > 1) t = poly_powmod(f, t, f.order(), m);
        auto g = poly_gcd(f, poly_sub(f, t, poly_x(f)), m);
        if (poly_deg(g) != 0) return false;
    }
    return true;
}

// squarefree decomposition of monic a: pairs (g_i, e_i), a = prod g_i^(e_i)
template <class F>
std::vector<std::pair<Poly<F>, int>> poly_squarefree(const F& f, Poly<F> a) {
    std::vector<std::pair<Poly<F>, int>> out;
    a = poly_monic(f, a);
    if (poly_deg(a) <= 0) return out;
    auto d = poly_derivative(f, a);
    if (d.empty()) {
        // a = b(x^p)
        unsigned long p = char_ui(f);
        Poly<F> b;
        for (size_t i = 0; i < a.size(); i += p) b.push_back(pth_root(f, a[i]));
        for (auto& [g, m] : poly_squarefree(f, b)) out.emplace_back(g, m * (int)p);
        return out;
    }
    auto g = poly_gcd(f, a, d);
    auto w = poly_divrem(f, a, g).first;
    int mult = 1;
    while (poly_deg(w) > 0) {
        auto y = poly_gcd(f, w, g);
        auto fac = poly_divrem(f, w, y).first;
        if (poly_deg(fac) > 0) out.emplace_back(fac, mult);
        w = std::move(y);
        g = poly_divrem(f, g, w).first;
        ++mult;
    }
    if (poly_deg(g) > 0)
        for (auto& [h, m] : poly_squarefree(f, g)) out.emplace_back(h, m * (int)char_ui(f));
    return out;
}

// equal-degree splitting (Cantor-Zassenhaus) of a monic squarefree product of
// degree-d irreducibles; works in odd and even characteristic
template <class F>
void poly_equal_degree(const F& f, const Poly<F>& a, int d, Rng& rng,
                       std::vector<Poly<F>>& out) {
    int n = poly_deg(a);
    if (n <= 0) return;
    if (n == d) {
        out.push_back(a);
        return;
    }
    Poly<F> split;
    while (true) {
        Poly<F> r(n, f.zero());
        for (int i = 0; i < n; ++i) r[i] = f.random(rng);
        poly_trim(f, r);
        if (poly_deg(r) < 1) continue;
        Poly<F> g = poly_gcd(f, r, a);
        if (poly_deg(g) > 0 && poly_deg(g) < n) {
            split = g;
            break;
        }
        if (mpz_odd_p(f.order().get_mpz_t())) {
            Int e = (pow_int(f.order(), d) - 1) / 2;
            auto h = poly_powmod(f, r, e, a);
            h = poly_sub(f, h, poly_one(f));
            g = poly_gcd(f, h, a);
        } else {
            unsigned terms = d * f.degree();
            Poly<F> t = poly_mod(f, r, a), acc = t;
            for (unsigned i = 1; i < terms; ++i) {
                t = poly_mulmod(f, t, t, a);
                acc = poly_add(f, acc, t);
            }
            g = poly_gcd(f, acc, a);
        }
        if (poly_deg(g) > 0 && poly_deg(g) < n) {
            split = g;
            break;
        }
    }
    poly_equal_degree(f, split, d, rng, out);
    poly_equal_degree(f, poly_divrem(f, a, split).first, d, rng, out);
}

// full factorization into monic irreducibles with multiplicity
template <class F>
std::vector<std::pair<Poly<F>, int>> poly_factor(const F& f, const Poly<F>& a, Rng& rng) {
    std::vector<std::pair<Poly<F>, int>> out;
    for (auto& [sq, mult] : poly_squarefree(f, a)) {
        Poly<F> rem = sq;
        Poly<F> frob = poly_mod(f, poly_x(f), rem);
        int d = 0;
        while (poly_deg(rem) > 0) {
            ++d;
            if (2 * d > poly_deg(rem)) {
                out.emplace_back(poly_monic(f, rem), mult);
                break;
            }
            frob = poly_powmod(f, frob, f.order(), rem);
            auto g = poly_gcd(f, poly_sub(f, frob, poly_x(f)), rem);
            if (poly_deg(g) > 0) {
                std::vector<Poly<F>> eq;
                poly_equal_degree(f, g, d, rng, eq);
                for (auto& irr : eq) out.emplace_back(irr, mult);
                rem = poly_divrem(f, rem, g).first;
                frob = poly_mod(f, frob, rem);
            }
        }
    }
    return out;
}

// distinct roots in F, sorted
template <class F>
std::vector<typename F::Elem> poly_roots(const F& f, const Poly<F>& a, Rng& rng) {
    std::vector<typename F::Elem> roots;
    if (poly_deg(a) <= 0) return roots;
    auto sq = poly_divrem(f, a, poly_gcd(f, a, poly_derivative(f, a))).first;
    if (poly_deg(sq) <= 0) sq = a; // derivative vanished; fall back to full factor
    auto xq = poly_powmod(f, poly_x(f), f.order(), sq);
    auto lin = poly_gcd(f, poly_sub(f, xq, poly_x(f)), sq);
    if (poly_deg(lin) <= 0) return roots;
    std::vector<Poly<F>> eq;
    poly_equal_degree(f, lin, 1, rng, eq);
    for (auto& l : eq) roots.push_back(f.neg(l[0]));
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace igusa::ff
