// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace igusa {

using Int = mpz_class;
using Rat = mpq_class;

// Deterministic RNG. Every probabilistic routine takes one of these; runs are
// reproducible given the seed. Child generators are derived by mixing tags
// into the seed, so work items can be processed in any order (or on any
// thread) without changing the stream each item sees.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(gmp_randinit_mt) {
        state_.seed(static_cast<unsigned long>(seed));
        seed_ = seed;
    }

    uint64_t seed() const { return seed_; }

    // uniform in [0, n)
    Int below(const Int& n) { return state_.get_z_range(n); }

    // uniform k-bit
    Int bits(unsigned long k) { return state_.get_z_bits(k); }

    uint64_t u64() {
        Int z = state_.get_z_bits(64);
        uint64_t r = 0;
        for (int i = 0; i < 64; i += 32)
            r |= static_cast<uint64_t>(mpz_get_ui(Int(z >> i).get_mpz_t()) & 0xffffffffu) << i;
        return r;
    }

    static uint64_t mix(uint64_t a, uint64_t b) {
        // splitmix64 finalizer over a simple combine
        uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    Rng fork(uint64_t tag) const { return Rng(mix(seed_, tag)); }
    Rng fork(uint64_t t1, uint64_t t2) const { return Rng(mix(mix(seed_, t1), t2)); }
    Rng fork(uint64_t t1, uint64_t t2, uint64_t t3) const {
        return Rng(mix(mix(mix(seed_, t1), t2), t3));
    }

private:
    gmp_randclass state_;
    uint64_t seed_;
};

// mpq_class(num, den) does not canonicalize; always build ratios through this
inline Rat ratio(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// exact integer square root; throws if n is not a perfect square
inline Int isqrt_exact(const Int& n) {
    if (mpz_perfect_square_p(n.get_mpz_t()) == 0)
        throw std::runtime_error("isqrt_exact: not a perfect square");
    return isqrt(n);
}

inline bool is_square(const Int& n) { return mpz_perfect_square_p(n.get_mpz_t()) != 0; }

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// floor(a / b), b > 0
inline Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int cdiv(const Int& a, const Int& b) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// exact division; throws on nonzero remainder
inline Int divexact(const Int& a, const Int& b) {
    Int q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (r != 0) throw std::runtime_error("divexact: not divisible");
    return q;
}

inline Int mod(const Int& a, const Int& n) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    return r;
}

// representative of a mod n in (-n/2, n/2]
inline Int balanced_mod(const Int& a, const Int& n) {
    Int r = mod(a, n);
    if (2 * r > n) r -= n;
    return r;
}

inline Int powmod(const Int& b, const Int& e, const Int& n) {
    Int r;
    mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Int invmod(const Int& a, const Int& n) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t()) == 0)
        throw std::runtime_error("invmod: not invertible");
    return r;
}

inline bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

inline Int next_prime(const Int& n) {
    Int r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

// floor(sqrt(q)) for a nonnegative rational q
inline Int sqrt_floor(const Rat& q) {
    if (q < 0) throw std::runtime_error("sqrt_floor: negative");
    // floor(sqrt(n/d)) = floor(sqrt(n*d)/d)
    Int nd = q.get_num() * q.get_den();
    return fdiv(isqrt(nd), q.get_den());
}

inline Int sqrt_ceil(const Rat& q) {
    Int f = sqrt_floor(q);
    return (Rat(f) * Rat(f) == q) ? f : f + 1;
}

// prime factorization of n > 0 (trial division + Pollard rho); returns
// (prime, exponent) pairs sorted by prime
std::vector<std::pair<Int, int>> factor(const Int& n, Rng& rng);
std::vector<std::pair<Int, int>> factor(const Int& n);

// p-adic valuation: largest e with p^e | n, plus cofactor
inline int valuation(Int& n, const Int& p) {
    int v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n = divexact(n, p);
        ++v;
    }
    return v;
}

// all positive divisors of n, sorted
std::vector<Int> divisors(const Int& n, Rng& rng);

inline Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

} // namespace igusa
