#include "risofdm/phase.hpp"

#include <cassert>
#include <cmath>

namespace risofdm {

namespace {

cplx code_point(int b, int bits) {
    const double ang = kTwoPi * static_cast<double>(b) / static_cast<double>(1 << bits);
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace

PhaseVector PhaseVector::from_codes(std::vector<int> codes, const Codebook& cb) {
    assert(cb.is_discrete());
    PhaseVector pv;
    pv.codebook = cb;
    pv.psi.reserve(codes.size());
    for (int b : codes) {
        assert(b >= 0 && b < cb.size());
        pv.psi.push_back(code_point(b, cb.bits));
    }
    pv.codes = std::move(codes);
    return pv;
}

PhaseVector PhaseVector::continuous(cvec psi) {
    PhaseVector pv;
    pv.codebook = Codebook::continuous();
    pv.psi = std::move(psi);
    return pv;
}

PhaseVector PhaseVector::ones(int R, const Codebook& cb) {
    if (cb.is_discrete()) return from_codes(std::vector<int>(static_cast<std::size_t>(R), 0), cb);
    return continuous(cvec(static_cast<std::size_t>(R), cplx{1.0, 0.0}));
}

PhaseVector PhaseVector::random(int R, const Codebook& cb, Rng& rng) {
    if (cb.is_discrete()) {
        std::vector<int> codes(static_cast<std::size_t>(R));
        for (auto& b : codes) b = static_cast<int>(rng.index(static_cast<std::size_t>(cb.size())));
        return from_codes(std::move(codes), cb);
    }
    cvec psi(static_cast<std::size_t>(R));
    for (auto& z : psi) {
        const double ang = kTwoPi * rng.u01();
        z = {std::cos(ang), std::sin(ang)};
    }
    return continuous(std::move(psi));
}

PhaseVector project(const cvec& z, const Codebook& cb) {
    if (!cb.is_discrete()) {
        cvec out(z.size());
        for (std::size_t r = 0; r < z.size(); ++r) {
            const double m = std::abs(z[r]);
            out[r] = (m > 0.0) ? z[r] / m : cplx{1.0, 0.0};
        }
        return PhaseVector::continuous(std::move(out));
    }

    const int n = cb.size();
    const double step = kTwoPi / static_cast<double>(n);
    std::vector<int> codes(z.size());
    for (std::size_t r = 0; r < z.size(); ++r) {
        if (z[r] == cplx{0.0, 0.0}) {
            codes[r] = 0;
            continue;
        }
        double ang = std::arg(z[r]);
        if (ang < 0.0) ang += kTwoPi;
        const double x = ang / step;
        int lo = static_cast<int>(std::floor(x));
        double frac = x - std::floor(x);
        if (lo >= n) {  // ang == 2*pi after rounding
            lo = 0;
            frac = 0.0;
        }
        const int hi = (lo + 1) % n;
        // Nearest angle decides; a tie at the midpoint takes the lower code.
        int b;
        if (std::abs(frac - 0.5) <= 1e-12) {
            b = std::min(lo, hi);
        } else {
            b = (frac < 0.5) ? lo : hi;
        }
        codes[r] = b;
    }
    return PhaseVector::from_codes(std::move(codes), cb);
}

}  // namespace risofdm
