// Copyright (c) 2026 the igusa-crt authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).

#pragma once

#include "igusa/util.hpp"

#include <array>
#include <functional>
#include <optional>
#include <vector>

namespace igusa {

using QVec = std::vector<Rat>;
using QMat = std::vector<std::vector<Rat>>;
using ZMat = std::vector<std::vector<Int>>;

QMat qmat_identity(size_t n);
QMat qmat_mul(const QMat& a, const QMat& b);
QVec qmat_apply(const QMat& a, const QVec& v);
Rat qmat_det(QMat a);
QMat qmat_inverse(const QMat& a); // throws if singular

// Solve a * x = b; empty optional if singular.
std::optional<QVec> qmat_solve(QMat a, QVec b);

// Row-style Hermite Normal Form of an integer matrix (rows span a lattice in
// Z^n). Returns the canonical basis: row echelon, positive pivots, entries
// above a pivot reduced into [0, pivot). Zero rows are dropped.
ZMat hnf(ZMat m);

// determinant of a full-rank square lattice basis (via HNF pivots)
Int hnf_det(const ZMat& h);

// Lattice membership: does v lie in the row span of the HNF basis h?
bool hnf_contains(const ZMat& h, const std::vector<Int>& v);

// Exact LLL reduction (delta = 3/4) of a lattice given by basis rows and a
// positive definite Gram matrix gram[i][j] = <b_i, b_j>. Both are updated in
// place; basis rows may live in any ambient Z^n.
void lll_reduce(ZMat& basis, QMat& gram);

// Enumerate all nonzero lattice vectors x (as coordinate rows w.r.t. the given
// basis) with quadratic form value <= bound, using Fincke-Pohst on the Gram
// matrix. Callback receives coordinates; one of +-x is reported.
void enumerate_short_vectors(const QMat& gram, const Rat& bound,
                             const std::function<void(const std::vector<Int>&)>& emit);

} // namespace igusa
