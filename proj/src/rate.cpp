#include "risofdm/rate.hpp"

#include <cassert>
#include <cmath>

namespace risofdm {

cplx effective_gain(cplx g, std::span<const cplx> h, const PhaseVector& psi) {
    assert(h.size() == psi.psi.size());
    cplx acc = g;
    for (std::size_t r = 0; r < h.size(); ++r) acc += std::conj(h[r]) * psi.psi[r];
    return acc;
}

RateResult rate(double p, cplx hbar, double sigma2, bool eta, int V) {
    assert(p >= 0.0 && sigma2 > 0.0);
    RateResult out;
    out.snr = p * abs2(hbar) / sigma2;
    out.rate = eta ? std::log2(1.0 + out.snr) / static_cast<double>(V) : 0.0;
    return out;
}

std::array<double, 2> direction_sumrates(const ChannelRealization& ch, const Allocation& alloc,
                                         const PhaseVector& psi, const SystemConfig& cfg) {
    std::array<double, 2> sums{0.0, 0.0};
    for (int k = 0; k < ch.K; ++k) {
        for (int v = 0; v < ch.V; ++v) {
            for (int i = 0; i < 2; ++i) {
                if (!alloc.owned(k, v, i)) continue;
                const cplx hbar = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                const RateResult rr =
                    rate(alloc.p[alloc.idx(k, v, i)], hbar, cfg.noise(k, v), true, ch.V);
                sums[i] += cfg.kappa[k] * rr.rate;
            }
        }
    }
    return sums;
}

double min_weighted_sumrate(const ChannelRealization& ch, const Allocation& alloc,
                            const PhaseVector& psi, const SystemConfig& cfg) {
    const auto s = direction_sumrates(ch, alloc, psi, cfg);
    return std::min(s[0], s[1]);
}

double mse(double p, cplx g, std::span<const cplx> h, const PhaseVector& psi, cplx u,
           double sigma2) {
    const double sp = std::sqrt(p);
    // pi psi = sqrt(p) g* |u|^2 h^H psi - u h^H psi;  Pi = |u|^2 h h^H.
    cplx hHpsi{0.0, 0.0};
    for (std::size_t r = 0; r < h.size(); ++r) hHpsi += std::conj(h[r]) * psi.psi[r];
    const double u2 = abs2(u);
    const cplx pi_psi = sp * std::conj(g) * u2 * hHpsi - u * hHpsi;
    const double quad = u2 * abs2(hHpsi);  // psi^H Pi psi
    return 1.0 + 2.0 * sp * (pi_psi - u * g).real() + p * (quad + u2 * abs2(g)) + sigma2 * u2;
}

double mse_compact(double p, cplx hbar, cplx u, double sigma2) {
    const cplx e = cplx{1.0, 0.0} - std::sqrt(p) * u * hbar;
    return abs2(e) + sigma2 * abs2(u);
}

SurrogateValues surrogate_objective(const ChannelRealization& ch, const Allocation& alloc,
                                    const PhaseVector& psi, const SurrogateState& state,
                                    const SystemConfig& cfg) {
    SurrogateValues out;
    const double Vd = static_cast<double>(ch.V);
    for (int k = 0; k < ch.K; ++k) {
        for (int v = 0; v < ch.V; ++v) {
            for (int i = 0; i < 2; ++i) {
                if (!alloc.owned(k, v, i)) continue;
                const cplx hbar = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                const cplx u = state.u[state.idx(k, v)];
                const double w = state.w[state.idx(k, v)];
                assert(w > 0.0);
                const double eps =
                    mse_compact(alloc.p[alloc.idx(k, v, i)], hbar, u, cfg.noise(k, v));
                const double zeta = (w * eps - std::log2(w) - 1.0) / Vd;
                (i == 0 ? out.f1 : out.f2) += cfg.kappa[k] * zeta;
            }
        }
    }
    out.f = std::max(out.f1, out.f2);
    return out;
}

}  // namespace risofdm
