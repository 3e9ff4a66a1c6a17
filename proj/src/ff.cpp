// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "igusa/ff.hpp"
#include "igusa/poly.hpp"

#include <cassert>

namespace igusa::ff {

namespace {
// Kronecker substitution pays off once schoolbook k^2 becomes noticeable.
constexpr unsigned kKroneckerMinDegree = 24;
constexpr unsigned kFrobMatrixMinDegree = 9;
} // namespace

PrimeField::PrimeField(Int p, bool check_prime) : p_(std::move(p)) {
    if (p_ < 2) throw std::runtime_error("PrimeField: modulus too small");
    if (check_prime && !is_probable_prime(p_))
        throw std::runtime_error("PrimeField: modulus is not prime");
}

PrimeField::Elem PrimeField::pow(const Elem& a, const Int& e) const {
    if (e < 0) return powmod(inv(a), -e, p_);
    return powmod(a, e, p_);
}

std::optional<PrimeField::Elem> PrimeField::sqrt(const Elem& a, Rng& rng) const {
    if (a == 0) return Elem(0);
    if (p_ == 2) return a;
    if (legendre(a) != 1) return std::nullopt;
    if (mod(p_, 4) == 3) {
        Elem r = powmod(a, (p_ + 1) / 4, p_);
        return r;
    }
    // Tonelli-Shanks
    Int s = p_ - 1;
    unsigned e = 0;
    while (mpz_even_p(s.get_mpz_t())) {
        s >>= 1;
        ++e;
    }
    Int z;
    do {
        z = rng.below(p_ - 2) + 2;
    } while (legendre(z) != -1);
    Int c = powmod(z, s, p_);
    Int r = powmod(a, (s + 1) / 2, p_);
    Int t = powmod(a, s, p_);
    unsigned m = e;
    while (t != 1) {
        Int tt = t;
        unsigned i = 0;
        while (tt != 1) {
            tt = mod(tt * tt, p_);
            ++i;
        }
        Int b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = mod(b * b, p_);
        r = mod(r * b, p_);
        c = mod(b * b, p_);
        t = mod(t * c, p_);
        m = i;
    }
    return r;
}

ExtField::ExtField(PrimeField base, std::vector<Int> modulus)
    : base_(std::move(base)), modulus_(std::move(modulus)) {
    if (modulus_.size() < 2) throw std::runtime_error("ExtField: modulus degree must be >= 1");
    k_ = static_cast<unsigned>(modulus_.size() - 1);
    for (auto& c : modulus_) c = mod(c, p());
    if (modulus_.back() != 1) throw std::runtime_error("ExtField: modulus must be monic");
    q_ = pow_int(p(), k_);

    if (k_ > 1) {
        // x^(k+i) mod m rows
        red_rows_.resize(k_ - 1);
        std::vector<Int> row(k_);
        for (unsigned j = 0; j < k_; ++j) row[j] = base_.neg(modulus_[j]);
        red_rows_[0] = row;
        for (unsigned i = 1; i + 1 < k_; ++i) {
            std::vector<Int> nxt(k_, Int(0));
            const Int& top = row[k_ - 1];
            for (unsigned j = k_ - 1; j >= 1; --j) nxt[j] = row[j - 1];
            nxt[0] = 0;
            if (top != 0)
                for (unsigned j = 0; j < k_; ++j)
                    nxt[j] = mod(nxt[j] + top * red_rows_[0][j], p());
            red_rows_[i] = nxt;
            row = std::move(nxt);
        }

        if (k_ >= kKroneckerMinDegree) {
            use_kron_ = true;
            size_t pbits = mpz_sizeinbase(p().get_mpz_t(), 2);
            unsigned kb = 0;
            while ((1u << kb) < k_) ++kb;
            slot_bits_ = static_cast<unsigned>(2 * pbits + kb + 1);
            packed_modulus_ = pack(modulus_, k_ + 1);
            // reciprocal of reversed modulus mod x^(k-1), by Newton iteration
            std::vector<Int> revm(modulus_.rbegin(), modulus_.rend());
            while (revm.size() > k_ - 1) revm.resize(k_ - 1 > 0 ? k_ - 1 : 1);
            if (k_ >= 2) {
                std::vector<Int> g{Int(1)}; // revm[0] = 1 (monic)
                size_t prec = 1;
                while (prec < k_ - 1) {
                    prec = std::min<size_t>(2 * prec, k_ - 1);
                    // g <- g*(2 - revm*g) mod x^prec, via plain convolution
                    std::vector<Int> t(prec, Int(0));
                    for (size_t i = 0; i < revm.size() && i < prec; ++i) {
                        if (revm[i] == 0) continue;
                        for (size_t j = 0; j < g.size() && i + j < prec; ++j)
                            t[i + j] = mod(t[i + j] + revm[i] * g[j], p());
                    }
                    t[0] = mod(Int(2) - t[0], p());
                    for (size_t i = 1; i < prec; ++i) t[i] = base_.neg(t[i]);
                    std::vector<Int> ng(prec, Int(0));
                    for (size_t i = 0; i < g.size(); ++i) {
                        if (g[i] == 0) continue;
                        for (size_t j = 0; j < t.size() && i + j < prec; ++j)
                            ng[i + j] = mod(ng[i + j] + g[i] * t[j], p());
                    }
                    g = std::move(ng);
                }
                rev_inv_ = std::move(g);
            }
        }

        if (k_ >= kFrobMatrixMinDegree) {
            // frob_rows_[i] = x^(i*p) mod m = (x^p)^i
            frob_rows_.resize(k_);
            frob_rows_[0] = one();
            // x^p mod m by square-and-multiply on raw polynomials
            Elem xp = pow(gen(), p());
            if (k_ >= 1) frob_rows_[1] = xp;
            for (unsigned i = 2; i < k_; ++i) frob_rows_[i] = mul(frob_rows_[i - 1], xp);
        }
    }
}

ExtField::Elem ExtField::one() const {
    Elem r(k_, Int(0));
    r[0] = 1;
    return r;
}

ExtField::Elem ExtField::from_int(const Int& n) const {
    Elem r(k_, Int(0));
    r[0] = mod(n, p());
    return r;
}

ExtField::Elem ExtField::from_base(const Int& a) const { return from_int(a); }

ExtField::Elem ExtField::gen() const {
    Elem r(k_, Int(0));
    if (k_ == 1)
        r[0] = base_.neg(modulus_[0]); // x = -c mod (x + c)
    else
        r[1] = 1;
    return r;
}

ExtField::Elem ExtField::add(const Elem& a, const Elem& b) const {
    Elem r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = base_.add(a[i], b[i]);
    return r;
}

ExtField::Elem ExtField::sub(const Elem& a, const Elem& b) const {
    Elem r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = base_.sub(a[i], b[i]);
    return r;
}

ExtField::Elem ExtField::neg(const Elem& a) const {
    Elem r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = base_.neg(a[i]);
    return r;
}

Int ExtField::pack(const std::vector<Int>& v, size_t len) const {
    Int z = 0;
    for (size_t i = len; i-- > 0;) {
        z <<= slot_bits_;
        if (i < v.size()) z += v[i];
    }
    return z;
}

std::vector<Int> ExtField::unpack(const Int& z, size_t len) const {
    std::vector<Int> v(len);
    Int rest = z;
    Int mask = (Int(1) << slot_bits_) - 1;
    for (size_t i = 0; i < len; ++i) {
        v[i] = rest & mask;
        rest >>= slot_bits_;
    }
    return v;
}

std::vector<Int> ExtField::mul_raw(const Elem& a, const Elem& b) const {
    if (use_kron_) {
        Int za = pack(a, k_), zb = pack(b, k_);
        Int zc = za * zb;
        auto prod = unpack(zc, 2 * k_ - 1);
        for (auto& c : prod) c = mod(c, p());
        return prod;
    }
    std::vector<Int> prod(2 * k_ - 1, Int(0));
    for (unsigned i = 0; i < k_; ++i) {
        if (a[i] == 0) continue;
        for (unsigned j = 0; j < k_; ++j) {
            if (b[j] == 0) continue;
            prod[i + j] += a[i] * b[j];
        }
    }
    for (auto& c : prod) c = mod(c, p());
    return prod;
}

ExtField::Elem ExtField::reduce_raw(std::vector<Int> prod) const {
    if (use_kron_ && k_ >= 2 && prod.size() > k_) {
        // Barrett-style: q = floor(prod / m) via the precomputed reciprocal of
        // the reversed modulus, then r = prod - q*m.
        size_t qlen = prod.size() - k_; // deg q + 1 <= k-1
        std::vector<Int> revhi(qlen);
        for (size_t i = 0; i < qlen; ++i) revhi[i] = prod[prod.size() - 1 - i];
        // qrev = revhi * rev_inv mod x^qlen
        Int zq = pack(revhi, qlen) * pack(rev_inv_, rev_inv_.size());
        auto qrev = unpack(zq, qlen);
        for (auto& c : qrev) c = mod(c, p());
        std::vector<Int> q(qlen);
        for (size_t i = 0; i < qlen; ++i) q[i] = qrev[qlen - 1 - i];
        // r = prod - q*m (only low k coefficients needed)
        Int zr = pack(q, qlen) * packed_modulus_;
        auto qm = unpack(zr, prod.size());
        Elem r(k_);
        for (unsigned i = 0; i < k_; ++i) r[i] = mod(prod[i] - qm[i], p());
        return r;
    }
    Elem r(k_, Int(0));
    for (unsigned i = 0; i < k_ && i < prod.size(); ++i) r[i] = prod[i];
    for (size_t i = k_; i < prod.size(); ++i) {
        if (prod[i] == 0) continue;
        const auto& row = red_rows_[i - k_];
        for (unsigned j = 0; j < k_; ++j) r[j] += prod[i] * row[j];
    }
    for (auto& c : r) c = mod(c, p());
    return r;
}

ExtField::Elem ExtField::mul(const Elem& a, const Elem& b) const {
    if (k_ == 1) return {base_.mul(a[0], b[0])};
    return reduce_raw(mul_raw(a, b));
}

ExtField::Elem ExtField::inv(const Elem& a) const {
    if (is_zero(a)) throw std::runtime_error("ExtField::inv(0)");
    if (k_ == 1) return {base_.inv(a[0])};
    Poly<PrimeField> ap(a.begin(), a.end());
    poly_trim(base_, ap);
    auto r = poly_invmod(base_, ap, modulus_);
    r.resize(k_, Int(0));
    return r;
}

ExtField::Elem ExtField::pow(const Elem& a, const Int& e) const {
    if (e < 0) return pow(inv(a), -e);
    Elem r = one(), b = a;
    Int m = e;
    while (m > 0) {
        if (mpz_odd_p(m.get_mpz_t())) r = mul(r, b);
        b = mul(b, b);
        m >>= 1;
    }
    return r;
}

bool ExtField::is_zero(const Elem& a) const {
    for (auto& c : a)
        if (c != 0) return false;
    return true;
}

ExtField::Elem ExtField::random(Rng& rng) const {
    Elem r(k_);
    for (unsigned i = 0; i < k_; ++i) r[i] = rng.below(p());
    return r;
}

bool ExtField::is_square(const Elem& a) const {
    if (is_zero(a)) return true;
    if (mpz_even_p(q_.get_mpz_t())) return true;
    Elem t = pow(a, (q_ - 1) / 2);
    return equal(t, one());
}

std::optional<ExtField::Elem> ExtField::sqrt(const Elem& a, Rng& rng) const {
    if (is_zero(a)) return zero();
    if (!is_square(a)) return std::nullopt;
    if (mod(q_, 4) == 3) return pow(a, (q_ + 1) / 4);
    Int s = q_ - 1;
    unsigned e = 0;
    while (mpz_even_p(s.get_mpz_t())) {
        s >>= 1;
        ++e;
    }
    Elem z;
    do {
        z = random(rng);
    } while (is_zero(z) || is_square(z));
    Elem c = pow(z, s);
    Elem r = pow(a, (s + 1) / 2);
    Elem t = pow(a, s);
    unsigned m = e;
    while (!equal(t, one())) {
        Elem tt = t;
        unsigned i = 0;
        while (!equal(tt, one())) {
            tt = mul(tt, tt);
            ++i;
        }
        Elem b = c;
        for (unsigned j = 0; j + i + 1 < m; ++j) b = mul(b, b);
        r = mul(r, b);
        c = mul(b, b);
        t = mul(t, c);
        m = i;
    }
    return r;
}

ExtField::Elem ExtField::frobenius(const Elem& a) const {
    if (k_ == 1) return a;
    if (!frob_rows_.empty()) {
        Elem r(k_, Int(0));
        for (unsigned i = 0; i < k_; ++i) {
            if (a[i] == 0) continue;
            const auto& row = frob_rows_[i];
            for (unsigned j = 0; j < k_; ++j) r[j] += a[i] * row[j];
        }
        for (auto& c : r) c = mod(c, p());
        return r;
    }
    return pow(a, p());
}

ExtField::Elem ExtField::frobenius_iter(const Elem& a, unsigned i) const {
    Elem r = a;
    i %= k_;
    for (unsigned j = 0; j < i; ++j) r = frobenius(r);
    return r;
}

bool ExtField::in_prime_field(const Elem& a) const {
    for (unsigned i = 1; i < k_; ++i)
        if (a[i] != 0) return false;
    return true;
}

ExtField make_extension(const PrimeField& fp, unsigned k, Rng& rng) {
    if (k == 0) throw std::runtime_error("make_extension: k must be >= 1");
    if (k == 1) {
        std::vector<Int> m{fp.random(rng), Int(1)};
        return ExtField(fp, std::move(m));
    }
    while (true) {
        auto m = poly_random_monic(fp, k, rng);
        if (poly_is_irreducible(fp, m)) return ExtField(fp, std::move(m));
    }
}

} // namespace igusa::ff
