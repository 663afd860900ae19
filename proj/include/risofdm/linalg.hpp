#pragma once

#include <span>

#include "risofdm/common.hpp"

namespace risofdm {

/// Minimal dense complex matrix, row-major.
struct CMat {
    int rows = 0, cols = 0;
    cvec a;

    CMat() = default;
    CMat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, cplx{}) {}

    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    cplx operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

cvec matvec(const CMat& m, std::span<const cplx> x);

/// Hermitian deviation max |A - A^H| entry.
double hermitian_error(const CMat& m);

double frobenius_norm(const CMat& m);

/// Max column absolute sum (induced 1-norm); upper-bounds the spectral radius.
double norm1(const CMat& m);

struct EigenPair {
    double value = 0.0;  // Rayleigh quotient at vec
    cvec vec;            // unit 2-norm
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;  // ||A vec - value vec||_2
};

/// Principal (algebraically largest) eigenpair of a Hermitian matrix by
/// shifted power iteration: iterating on A + ||A||_1 I makes the target
/// eigenvalue the dominant one even for indefinite A. `warm` seeds the
/// iteration when non-null.
EigenPair principal_eigenpair(const CMat& m, const cvec* warm = nullptr, double rel_tol = 1e-10,
                              int max_iters = 5000);

}  // namespace risofdm
