// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include "igusa/util.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace igusa::ff {

// F_p, p an odd prime (the driver requires p > 3; p = 2 and 3 are still
// usable for plain arithmetic, which prime decomposition code relies on).
// Elements are mpz residues in [0, p).
class PrimeField {
public:
    using Elem = Int;

    explicit PrimeField(Int p, bool check_prime = true);

    const Int& p() const { return p_; }
    const Int& order() const { return p_; }
    unsigned degree() const { return 1; }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem from_int(const Int& n) const { return mod(n, p_); }

    Elem add(const Elem& a, const Elem& b) const {
        Int r = a + b;
        if (r >= p_) r -= p_;
        return r;
    }
    Elem sub(const Elem& a, const Elem& b) const {
        Int r = a - b;
        if (r < 0) r += p_;
        return r;
    }
    Elem neg(const Elem& a) const { return a == 0 ? a : Int(p_ - a); }
    Elem mul(const Elem& a, const Elem& b) const { return mod(a * b, p_); }
    Elem inv(const Elem& a) const {
        if (a == 0) throw std::runtime_error("PrimeField::inv(0)");
        return invmod(a, p_);
    }
    Elem pow(const Elem& a, const Int& e) const;
    bool is_zero(const Elem& a) const { return a == 0; }
    bool equal(const Elem& a, const Elem& b) const { return a == b; }
    Elem random(Rng& rng) const { return rng.below(p_); }

    // Legendre symbol (0 on zero)
    int legendre(const Elem& a) const {
        return mpz_legendre(a.get_mpz_t(), p_.get_mpz_t());
    }
    bool is_square(const Elem& a) const { return a == 0 || legendre(a) == 1; }
    // Deterministic given rng; Tonelli-Shanks.
    std::optional<Elem> sqrt(const Elem& a, Rng& rng) const;

private:
    Int p_;
};

using FqElem = std::vector<Int>; // length k, entries reduced mod p

// F_{p^k} as F_p[x]/(m) for a monic irreducible m of degree k. A single
// extension of the prime field even for composite k; the p-power Frobenius is
// cached as a matrix on the polynomial basis once k exceeds a small cutoff.
// Immutable after construction.
class ExtField {
public:
    using Elem = FqElem;

    // modulus: monic, degree k, coefficients reduced mod p, length k+1
    ExtField(PrimeField base, std::vector<Int> modulus);

    const PrimeField& base() const { return base_; }
    const Int& p() const { return base_.p(); }
    unsigned degree() const { return k_; }
    const Int& order() const { return q_; }
    const std::vector<Int>& modulus() const { return modulus_; }

    Elem zero() const { return Elem(k_, Int(0)); }
    Elem one() const;
    Elem from_int(const Int& n) const;
    Elem from_base(const Int& a) const; // image of an F_p element
    Elem gen() const;                   // the class of x

    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem inv(const Elem& a) const;
    Elem pow(const Elem& a, const Int& e) const;
    bool is_zero(const Elem& a) const;
    bool equal(const Elem& a, const Elem& b) const { return a == b; }
    Elem random(Rng& rng) const;

    bool is_square(const Elem& a) const;
    std::optional<Elem> sqrt(const Elem& a, Rng& rng) const;

    // a^p, via the cached basis matrix when available
    Elem frobenius(const Elem& a) const;
    // a^(p^i)
    Elem frobenius_iter(const Elem& a, unsigned i) const;

    // true if the element lies in the prime subfield
    bool in_prime_field(const Elem& a) const;

private:
    friend class ExtFieldBuilder;
    PrimeField base_;
    unsigned k_;
    Int q_;
    std::vector<Int> modulus_;
    // schoolbook reduction data: rows[i] = x^(k+i) mod modulus, i < k-1
    std::vector<std::vector<Int>> red_rows_;
    // Frobenius matrix: frob_rows_[i] = x^(i*p) mod modulus (present iff cached)
    std::vector<std::vector<Int>> frob_rows_;
    // Kronecker substitution machinery for large k
    bool use_kron_ = false;
    unsigned slot_bits_ = 0;
    Int packed_modulus_;
    std::vector<Int> rev_inv_; // reciprocal of reversed modulus mod x^(k-1)

    std::vector<Int> mul_raw(const Elem& a, const Elem& b) const; // deg <= 2k-2 product
    Elem reduce_raw(std::vector<Int> prod) const;
    Int pack(const std::vector<Int>& v, size_t len) const;
    std::vector<Int> unpack(const Int& z, size_t len) const;
};

// Uniformly random monic irreducible modulus of degree k; deterministic given
// the seed inside rng. k = 1 yields x - c (so F_{p^1} ~ F_p with a transparent
// basis).
ExtField make_extension(const PrimeField& fp, unsigned k, Rng& rng);

} // namespace igusa::ff
