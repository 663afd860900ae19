#include "risofdm/linalg.hpp"

#include <cassert>
#include <cmath>

#include "risofdm/rng.hpp"

namespace risofdm {

cvec matvec(const CMat& m, std::span<const cplx> x) {
    assert(static_cast<int>(x.size()) == m.cols);
    cvec y(static_cast<std::size_t>(m.rows), cplx{});
    for (int r = 0; r < m.rows; ++r) {
        cplx acc{};
        const cplx* row = m.a.data() + static_cast<std::size_t>(r) * m.cols;
        for (int c = 0; c < m.cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
    return y;
}

double hermitian_error(const CMat& m) {
    assert(m.rows == m.cols);
    double worst = 0.0;
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c)
            worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    return worst;
}

double frobenius_norm(const CMat& m) {
    double s = 0.0;
    for (const cplx& z : m.a) s += abs2(z);
    return std::sqrt(s);
}

double norm1(const CMat& m) {
    double best = 0.0;
    for (int c = 0; c < m.cols; ++c) {
        double s = 0.0;
        for (int r = 0; r < m.rows; ++r) s += std::abs(m(r, c));
        best = std::max(best, s);
    }
    return best;
}

namespace {

void normalize(cvec& x) {
    const double n = norm2(x);
    if (n > 0.0)
        for (auto& z : x) z /= n;
}

EigenPair iterate(const CMat& m, cvec x, double shift, double abs_tol, int max_iters) {
    EigenPair out;
    normalize(x);
    cvec y;
    for (int t = 1; t <= max_iters; ++t) {
        y = matvec(m, x);
        // Rayleigh quotient and residual on the unshifted matrix.
        cplx rq{};
        for (std::size_t j = 0; j < x.size(); ++j) rq += std::conj(x[j]) * y[j];
        const double mu = rq.real();
        double res = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) res += abs2(y[j] - mu * x[j]);
        res = std::sqrt(res);
        out.value = mu;
        out.vec = x;
        out.iterations = t;
        out.residual = res;
        if (res <= abs_tol) {
            out.converged = true;
            return out;
        }
        for (std::size_t j = 0; j < x.size(); ++j) y[j] += shift * x[j];
        normalize(y);
        x.swap(y);
    }
    return out;
}

}  // namespace

EigenPair principal_eigenpair(const CMat& m, const cvec* warm, double rel_tol, int max_iters) {
    assert(m.rows == m.cols);
    const int n = m.rows;
    const double scale = frobenius_norm(m);
    if (scale == 0.0) {
        EigenPair out;
        out.vec.assign(static_cast<std::size_t>(n), cplx{});
        out.vec[static_cast<std::size_t>(n) - 1] = 1.0;
        out.converged = true;
        return out;
    }
    const double shift = norm1(m);
    const double abs_tol = rel_tol * scale;

    cvec start;
    if (warm != nullptr && warm->size() == static_cast<std::size_t>(n) && norm2(*warm) > 0.0) {
        start = *warm;
    } else {
        start.assign(static_cast<std::size_t>(n), cplx{1.0, 0.0});
    }
    EigenPair out = iterate(m, std::move(start), shift, abs_tol, max_iters);
    if (out.converged) return out;

    // Restart from a deterministic non-symmetric vector; a start orthogonal
    // to the dominant eigenvector can stall the first attempt.
    cvec retry(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const auto s = splitmix64(static_cast<std::uint64_t>(j) + 0x51f0u);
        const double ang = kTwoPi * (static_cast<double>(s >> 11) * 0x1.0p-53);
        retry[static_cast<std::size_t>(j)] = {std::cos(ang), 0.5 + std::sin(ang)};
    }
    EigenPair second = iterate(m, std::move(retry), shift, abs_tol, max_iters);
    return second.residual < out.residual ? second : out;
}

}  // namespace risofdm
