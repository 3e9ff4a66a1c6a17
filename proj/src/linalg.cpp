// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#include "igusa/linalg.hpp"

#include <algorithm>
#include <cassert>

namespace igusa {

QMat qmat_identity(size_t n) {
    QMat m(n, QVec(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMat qmat_mul(const QMat& a, const QMat& b) {
    size_t n = a.size(), k = b.size(), m = b[0].size();
    QMat c(n, QVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (a[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

QVec qmat_apply(const QMat& a, const QVec& v) {
    QVec r(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) r[i] += a[i][j] * v[j];
    return r;
}

Rat qmat_det(QMat a) {
    size_t n = a.size();
    Rat det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det *= a[c][c];
        Rat inv = 1 / a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            Rat f = a[r][c] * inv;
            for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return det;
}

std::optional<QVec> qmat_solve(QMat a, QVec b) {
    size_t n = a.size();
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && a[piv][c] == 0) ++piv;
        if (piv == n) return std::nullopt;
        std::swap(a[piv], a[c]);
        std::swap(b[piv], b[c]);
        Rat inv = 1 / a[c][c];
        for (size_t j = c; j < n; ++j) a[c][j] *= inv;
        b[c] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rat f = a[r][c];
            for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
            b[r] -= f * b[c];
        }
    }
    return b;
}

QMat qmat_inverse(const QMat& a) {
    size_t n = a.size();
    QMat aug = a, inv = qmat_identity(n);
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && aug[piv][c] == 0) ++piv;
        if (piv == n) throw std::runtime_error("qmat_inverse: singular");
        std::swap(aug[piv], aug[c]);
        std::swap(inv[piv], inv[c]);
        Rat d = 1 / aug[c][c];
        for (size_t j = 0; j < n; ++j) {
            aug[c][j] *= d;
            inv[c][j] *= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || aug[r][c] == 0) continue;
            Rat f = aug[r][c];
            for (size_t j = 0; j < n; ++j) {
                aug[r][j] -= f * aug[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

ZMat hnf(ZMat m) {
    if (m.empty()) return m;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        // eliminate below row r in column c by gcd steps
        while (true) {
            size_t piv = rows;
            for (size_t i = r; i < rows; ++i)
                if (m[i][c] != 0 && (piv == rows || abs(m[i][c]) < abs(m[piv][c]))) piv = i;
            if (piv == rows) break; // column all zero below
            std::swap(m[r], m[piv]);
            bool clean = true;
            for (size_t i = r + 1; i < rows; ++i) {
                if (m[i][c] == 0) continue;
                Int q = fdiv(m[i][c], m[r][c]);
                if (q != 0)
                    for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (m[r][c] == 0) continue;
        if (m[r][c] < 0)
            for (size_t j = 0; j < cols; ++j) m[r][j] = -m[r][j];
        // reduce entries above the pivot into [0, pivot)
        for (size_t i = 0; i < r; ++i) {
            Int q = fdiv(m[i][c], m[r][c]);
            if (q != 0)
                for (size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
        }
        ++r;
    }
    m.resize(r);
    return m;
}

Int hnf_det(const ZMat& h) {
    if (h.empty() || h.size() != h[0].size())
        throw std::runtime_error("hnf_det: not full rank square");
    Int d = 1;
    for (size_t i = 0; i < h.size(); ++i) d *= h[i][i];
    return d;
}

bool hnf_contains(const ZMat& h, const std::vector<Int>& v) {
    std::vector<Int> w = v;
    size_t cols = w.size();
    size_t row = 0;
    for (size_t c = 0; c < cols; ++c) {
        if (row < h.size() && h[row][c] != 0) {
            Int q, r;
            mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w[c].get_mpz_t(), h[row][c].get_mpz_t());
            if (r != 0) return false;
            for (size_t j = c; j < cols; ++j) w[j] -= q * h[row][j];
            ++row;
        } else if (w[c] != 0) {
            return false;
        }
    }
    return true;
}

namespace {

// Gram-Schmidt data for LLL over the Gram matrix only.
struct GS {
    QMat mu;        // mu[i][j], j < i
    QVec B;         // squared GS lengths
    const QMat* g;  // current Gram
    size_t n;

    void compute() {
        mu.assign(n, QVec(n, 0));
        B.assign(n, 0);
        QMat r(n, QVec(n, 0)); // r[i][j] = <b_i, b*_j>
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = 0; j <= i; ++j) {
                Rat s = (*g)[i][j];
                for (size_t k = 0; k < j; ++k) s -= mu[j][k] * r[i][k];
                r[i][j] = s;
                if (j < i) mu[i][j] = (B[j] == 0) ? Rat(0) : s / B[j];
            }
            B[i] = r[i][i];
        }
    }
};

} // namespace

void lll_reduce(ZMat& basis, QMat& gram) {
    size_t n = basis.size();
    if (n == 0) return;
    auto row_op_sub = [&](size_t i, const Int& q, size_t j) {
        // b_i -= q * b_j ; update basis and gram
        for (auto& x : basis[i]) (void)x;
        for (size_t t = 0; t < basis[i].size(); ++t) basis[i][t] -= q * basis[j][t];
        Rat qq(q);
        for (size_t t = 0; t < n; ++t) {
            if (t == i) continue;
            gram[i][t] -= qq * gram[j][t];
            gram[t][i] = gram[i][t];
        }
        gram[i][i] = gram[i][i] - 2 * qq * gram[i][j] - qq * qq * gram[j][j];
        // note: gram[i][j] above was already updated unless j == i; recompute safely
    };
    // To avoid the ordering pitfall in the diagonal update, recompute gram[i][i]
    // from scratch after each op instead: simpler and still cheap at n <= 8.
    auto sub_multiple = [&](size_t i, const Int& q, size_t j) {
        if (q == 0) return;
        Rat qq(q);
        Rat gii = gram[i][i] - 2 * qq * gram[i][j] + qq * qq * gram[j][j];
        for (size_t t = 0; t < basis[i].size(); ++t) basis[i][t] -= q * basis[j][t];
        for (size_t t = 0; t < n; ++t) {
            if (t == i) continue;
            gram[i][t] -= qq * gram[j][t];
            gram[t][i] = gram[i][t];
        }
        gram[i][i] = gii;
    };
    (void)row_op_sub;

    GS gs;
    gs.g = &gram;
    gs.n = n;
    gs.compute();
    const Rat delta(3, 4);
    size_t k = 1;
    while (k < n) {
        // size reduction of b_k against b_{k-1}..b_0
        for (size_t j = k; j-- > 0;) {
            Rat m = gs.mu[k][j];
            Int q = fdiv(m.get_num() * 2 + m.get_den(), 2 * m.get_den()); // round(m)
            sub_multiple(k, q, j);
        }
        gs.compute();
        if (gs.B[k] >= (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.B[k - 1]) {
            ++k;
        } else {
            std::swap(basis[k], basis[k - 1]);
            std::swap(gram[k], gram[k - 1]);
            for (size_t t = 0; t < n; ++t) std::swap(gram[t][k], gram[t][k - 1]);
            gs.compute();
            k = (k > 1) ? k - 1 : 1;
        }
    }
}

void enumerate_short_vectors(const QMat& gram, const Rat& bound,
                             const std::function<void(const std::vector<Int>&)>& emit) {
    size_t n = gram.size();
    // rational Cholesky: Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2
    QMat q = gram;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (size_t k = i + 1; k < n; ++k)
            for (size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    for (size_t i = 0; i < n; ++i)
        if (q[i][i] <= 0) throw std::runtime_error("enumerate_short_vectors: form not positive definite");

    std::vector<Int> x(n, 0);
    std::vector<Rat> center(n, 0), partial(n + 1, 0);
    bool nonzero_seen = false;

    // depth-first from the last coordinate
    std::function<void(size_t)> walk = [&](size_t i) {
        if (i == SIZE_MAX) {
            for (auto& xi : x)
                if (xi != 0) {
                    emit(x);
                    return;
                }
            (void)nonzero_seen;
            return;
        }
        // remaining budget at level i
        Rat budget = bound - partial[i + 1];
        if (budget < 0) return;
        // |x_i + center_i| <= sqrt(budget / q[i][i])
        Rat rad2 = budget / q[i][i];
        Int lo, hi;
        {
            Int s = sqrt_floor(rad2);
            // conservative by one on each side, filtered by the exact check below
            Rat c = center[i];
            lo = fdiv(Int(-c.get_num() - s * c.get_den() - c.get_den()), c.get_den());
            hi = cdiv(Int(-c.get_num() + s * c.get_den() + c.get_den()), c.get_den());
        }
        for (Int v = lo; v <= hi; ++v) {
            Rat t = Rat(v) + center[i];
            Rat term = q[i][i] * t * t;
            if (partial[i + 1] + term > bound) continue;
            x[i] = v;
            partial[i] = partial[i + 1] + term;
            if (i == 0) {
                walk(SIZE_MAX);
            } else {
                // update centers of the next level down
                size_t j = i - 1;
                Rat c = 0;
                for (size_t k = j + 1; k < n; ++k) c += q[j][k] * Rat(x[k]);
                center[j] = c;
                walk(j);
            }
        }
        x[i] = 0;
    };
    if (n == 0) return;
    partial[n] = 0;
    walk(n - 1);
}

} // namespace igusa
