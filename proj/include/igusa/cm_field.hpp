// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
//
// Exact arithmetic in a primitive quartic CM field K = Q(i*sqrt(a + b*sqrt(d))).
// Elements live over the power basis (1, s, eta, s*eta) with s = sqrt(d) and
// eta = i*sqrt(a + b*s); the integral basis is computed by Pohst-Zassenhaus
// round-2 refinement. Prime decomposition follows Cohen (GTM 138): minimal
// polynomial factorization away from the index, Buchmann-Lenstra at index
// primes. Principal ideal generators come from exact short-vector enumeration
// under the T2 form (LLL + Fincke-Pohst), which is class-number free.

#pragma once

#include "igusa/linalg.hpp"
#include "igusa/util.hpp"

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace igusa::cm {

using Vec4 = std::array<Rat, 4>;
using IVec4 = std::array<Int, 4>;

class CMField;

// Element of K as a rational 4-vector over the integral basis of the parent.
class CMElement {
public:
    CMElement() : field_(nullptr), coords_{Rat(0), Rat(0), Rat(0), Rat(0)} {}
    CMElement(const CMField* f, Vec4 coords);

    const CMField& field() const { return *field_; }
    const Vec4& coords() const { return coords_; }

    bool is_integral() const;
    bool is_rational() const; // lies in Q
    bool is_real() const;     // lies in K0

    CMElement operator+(const CMElement& o) const;
    CMElement operator-(const CMElement& o) const;
    CMElement operator-() const;
    CMElement operator*(const CMElement& o) const;
    CMElement operator*(const Rat& c) const;
    bool operator==(const CMElement& o) const;
    bool operator!=(const CMElement& o) const { return !(*this == o); }

    CMElement inverse() const;
    CMElement conj() const; // complex conjugation, eta -> -eta
    CMElement pow(const Int& e) const;

    Rat norm() const;  // N_{K/Q}
    Rat trace() const; // Tr_{K/Q}
    // characteristic polynomial of multiplication, degree 4, monic;
    // returned as coefficients c[0..4] with c[4] = 1
    std::array<Rat, 5> char_poly() const;

    Vec4 power_coords() const; // coordinates over (1, s, eta, s*eta)

private:
    friend class CMField;
    const CMField* field_;
    Vec4 coords_;
};

struct PrimeIdeal {
    Int ell;
    int e = 1; // ramification degree
    int f = 1; // inertia degree
    CMElement second_gen; // two-element representation (ell, second_gen)
    ZMat lattice;         // HNF basis over the integral basis
};

struct PrimeSplitting {
    Int ell;
    std::vector<PrimeIdeal> factors;
    // conj_pair[i] = index j with conj(factors[i]) = factors[j]
    std::vector<int> conj_pair;
    bool splits_completely() const;
    bool unramified() const;
};

struct NotPrimitiveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotCMError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoWeilNumberError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotIntegralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAGeneratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ReflexVerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Result of expressing alpha = (a0 + a1 pi + a2 pi^2 + a3 pi^3) / n
struct LinearRelation {
    IVec4 num; // a0..a3, gcd(a0,..,a3,n) = 1
    Int den;   // n > 0, minimal with n*alpha in Z[pi]
};

class CMField {
public:
    // K = Q(i sqrt(a + b sqrt(d))), d squarefree > 1, a,b > 0,
    // a^2 - b^2 d > 0 and not a perfect square.
    CMField(Int d, Int a, Int b);

    // the cached unit element points back at its field; keep it valid on copy
    CMField(const CMField& o) { *this = o; }
    CMField& operator=(const CMField& o);
    CMField(CMField&& o) noexcept { *this = std::move(o); }
    CMField& operator=(CMField&& o) noexcept;

    static CMField parse(const std::string& descriptor); // "d,a,b"
    std::string descriptor() const;

    const Int& d() const { return d_; }
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }

    bool is_cyclic() const { return cyclic_; }
    // true when disc equals 125, i.e. K is the fifth cyclotomic field; the
    // driver refuses such K
    bool is_cyclotomic5() const { return disc_ == 125; }

    const Int& disc() const { return disc_; }
    const Int& disc_K0() const { return disc_k0_; }
    const Int& index_of_eta_order() const { return index_eta_; } // [O_K : Z[eta]]

    // elements
    CMElement zero() const;
    CMElement one() const;
    CMElement from_rational(const Rat& c) const;
    CMElement from_power_coords(const Vec4& pc) const; // over (1, s, eta, s*eta)
    CMElement from_integral_coords(const Vec4& c) const;
    CMElement sqrt_d() const;
    CMElement eta() const;
    CMElement integral_basis_element(int i) const; // i in 0..3; element 0 is 1

    // multiplication table over the integral basis: b_i * b_j = sum_k T[i][j][k] b_k
    const std::array<std::array<IVec4, 4>, 4>& structure_constants() const { return mult_table_; }

    // automorphisms as maps; index 0 is the identity, 1 is complex
    // conjugation; cyclic fields also carry sigma (order 4) and sigma^3
    size_t automorphism_count() const { return cyclic_ ? 4 : 2; }
    CMElement apply_automorphism(size_t idx, const CMElement& x) const;

    // fundamental unit of K_0, > 1 in the embedding sending s to +sqrt(d)
    const CMElement& fundamental_unit() const { return unit_; }
    // sign of x under that embedding; x must lie in K0
    int real_embedding_sign(const CMElement& x) const;
    // |embedding value| > 1 test for x in K0, exact
    bool real_embedding_abs_gt_one(const CMElement& x) const;

    // minimal polynomial of eta: x^4 + 2a x^2 + (a^2 - b^2 d)
    std::array<Int, 5> min_poly_eta() const;

    PrimeSplitting decompose_prime(const Int& ell, Rng& rng) const;

    // lattice of a product of prime ideals (HNF over the integral basis)
    ZMat ideal_product(const ZMat& i1, const ZMat& i2) const;
    ZMat principal_ideal(const CMElement& g) const; // (g), g integral
    ZMat full_ideal() const;                        // O_K itself
    ZMat ideal_conj(const ZMat& i) const;
    Int ideal_norm(const ZMat& i) const;

    std::optional<CMElement> principal_generator(const ZMat& ideal) const;

    // alpha * u^j with alpha*conj(alpha) = p exactly
    CMElement normalize_weil(const CMElement& alpha, const Int& p) const;

    LinearRelation linear_relation(const CMElement& alpha, const CMElement& pi) const;

    // [O_K : Z[pi, conj(pi)]] for a Weil number pi; asserts the discriminant
    // bound 16 p^2 / sqrt(disc)
    Int index_in_OK(const CMElement& pi, const Int& p) const;

    IVec4 coords_mod(const CMElement& alpha, const Int& n) const;

    CMField reflex_field(Rng& rng) const;
    // true if the field given by (d,a,b) parameters is isomorphic to this one
    bool isomorphic_to(const CMField& other) const;

private:
    Int d_, a_, b_;
    bool cyclic_ = false;
    Int disc_, disc_k0_, index_eta_;
    // integral basis rows: power-basis coordinates of b_0..b_3 (b_0 = 1)
    QMat basis_;     // 4x4: row i = power coords of b_i
    QMat basis_inv_; // power coords -> integral coords
    std::array<std::array<IVec4, 4>, 4> mult_table_;
    QMat t2_gram_; // Tr(b_i * conj(b_j)), integer entries, positive definite
    std::vector<QMat> autos_; // power-basis matrices (column-action: M * vec)
    CMElement unit_;
    Rat unit_abs_bound_; // rational upper bound for |embedding of unit|

    Vec4 basis_row(int i) const;
    void build_integral_basis();
    void build_mult_table();
    void build_automorphisms();
    void compute_fundamental_unit();
    Vec4 power_mul(const Vec4& x, const Vec4& y) const;
    QMat mult_matrix(const CMElement& x) const; // over integral basis
    std::optional<std::pair<Rat, Rat>> root_with_square(const Rat& A, const Rat& B) const;
    friend class CMElement;
};

// Z/n arithmetic on integral-basis coordinate vectors, for fast pi^k mod n
class ResidueRing {
public:
    ResidueRing(const CMField& K, Int n);
    IVec4 reduce(const CMElement& x) const;
    IVec4 one() const;
    IVec4 mul(const IVec4& x, const IVec4& y) const;
    IVec4 pow(const IVec4& x, const Int& e) const;
    bool is_one(const IVec4& x) const;
    const Int& modulus() const { return n_; }

private:
    const CMField* K_;
    Int n_;
};

} // namespace igusa::cm
