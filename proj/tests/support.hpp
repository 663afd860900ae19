#pragma once

// Shared generators and reference oracles for the test suites. Everything
// here recomputes results through routes independent of the library code it
// checks (gather-form convolution, per-sample DFT, step-by-step greedy
// re-simulation, simplex grid search).

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "risofdm/harness.hpp"

namespace risofdm::testsupport {

inline cvec naive_dft(const cvec& x) {
    const std::size_t V = x.size();
    cvec out(V);
    for (std::size_t v = 0; v < V; ++v) {
        cplx acc{};
        for (std::size_t n = 0; n < V; ++n)
            acc += x[n] * std::polar(1.0, -kTwoPi * static_cast<double>(v) *
                                              static_cast<double>(n) / static_cast<double>(V));
        out[v] = acc;
    }
    return out;
}

inline cvec conv_gather(const cvec& a, const cvec& b) {
    cvec out(a.size() + b.size() - 1, cplx{});
    for (std::size_t n = 0; n < out.size(); ++n) {
        cplx acc{};
        for (std::size_t l = 0; l < a.size(); ++l) {
            if (n < l || n - l >= b.size()) continue;
            acc += a[l] * b[n - l];
        }
        out[n] = acc;
    }
    return out;
}

/// Composite time-domain channel g_taps + sum_r psi_r * (in_r conv out_r),
/// zero-padded to V, rebuilt from the realization's raw taps.
inline cvec composite_taps(const ChannelRealization& ch, const PhaseVector& psi, int k, int i) {
    cvec composite(static_cast<std::size_t>(ch.V), cplx{});
    const auto& direct = ch.direct_taps(k, i);
    std::copy(direct.begin(), direct.end(), composite.begin());
    for (int r = 0; r < ch.R; ++r) {
        const cvec cas = conv_gather(ch.ris_in_taps(k, i, r), ch.ris_out_taps(k, i, r));
        for (std::size_t l = 0; l < cas.size(); ++l)
            composite[l] += psi.psi[static_cast<std::size_t>(r)] * cas[l];
    }
    return composite;
}

/// Valid random ownership (every band owned once) with powers scaled to the
/// budget; `random_powers` draws uneven shares.
inline Allocation random_allocation(const SystemConfig& cfg, Rng& rng, bool random_powers) {
    Allocation alloc(cfg.K, cfg.V);
    for (int v = 0; v < cfg.V; ++v) {
        const int k = static_cast<int>(rng.index(static_cast<std::size_t>(cfg.K)));
        const int i = static_cast<int>(rng.index(2));
        alloc.eta[alloc.idx(k, v, i)] = 1;
    }
    for (int k = 0; k < cfg.K; ++k) {
        for (int i = 0; i < 2; ++i) {
            std::vector<int> owned;
            for (int v = 0; v < cfg.V; ++v)
                if (alloc.owned(k, v, i)) owned.push_back(v);
            if (owned.empty()) continue;
            std::vector<double> share(owned.size(), 1.0);
            if (random_powers)
                for (auto& s : share) s = 0.05 + rng.u01();
            double total = 0.0;
            for (double s : share) total += s;
            for (std::size_t j = 0; j < owned.size(); ++j)
                alloc.p[alloc.idx(k, owned[j], i)] = cfg.power(k, i) * share[j] / total;
        }
    }
    return alloc;
}

/// Step-by-step restatement of the two-phase greedy assignment, tracking the
/// available pool and accumulated scores with plain containers.
inline Allocation resimulate_assignment(const ChannelRealization& ch, const PhaseVector& psi,
                                        const SystemConfig& cfg) {
    const int K = ch.K, V = ch.V;
    std::vector<std::vector<std::array<double, 2>>> rates(K,
                                                          std::vector<std::array<double, 2>>(V));
    for (int k = 0; k < K; ++k)
        for (int v = 0; v < V; ++v)
            for (int i = 0; i < 2; ++i) {
                const cplx hbar = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                const double snr = (cfg.power(k, i) / V) * abs2(hbar) / cfg.noise(k, v);
                rates[k][v][i] = std::log2(1.0 + snr);
            }

    std::vector<int> pool;
    for (int v = 0; v < V; ++v) pool.push_back(v);
    auto claim_best = [&](int k, int i) {
        int arg = pool[0];
        for (int v : pool)
            if (rates[k][v][i] > rates[k][arg][i]) arg = v;
        pool.erase(std::find(pool.begin(), pool.end(), arg));
        return arg;
    };

    Allocation alloc(K, V);
    std::vector<std::array<double, 2>> acc(K, {0.0, 0.0});
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < 2; ++i) {
            const int v = claim_best(k, i);
            acc[k][i] = rates[k][v][i];
            alloc.eta[alloc.idx(k, v, i)] = 1;
        }
    while (!pool.empty()) {
        int bk = 0, bi = 0;
        for (int k = 0; k < K; ++k)
            for (int i = 0; i < 2; ++i)
                if (acc[k][i] < acc[bk][bi]) {
                    bk = k;
                    bi = i;
                }
        const int v = claim_best(bk, bi);
        acc[bk][bi] += rates[bk][v][bi];
        alloc.eta[alloc.idx(bk, v, bi)] = 1;
    }
    return alloc;
}

struct GridBest {
    double rate = 0.0;
    double step = 0.0;
};

inline void grid_recurse(const std::vector<double>& gains, double step, int band, int units_left,
                         std::vector<int>& units, double& best) {
    const int n = static_cast<int>(gains.size());
    if (band == n - 1) {
        units[static_cast<std::size_t>(band)] = units_left;
        double rate = 0.0;
        for (int v = 0; v < n; ++v)
            rate += std::log2(1.0 + gains[static_cast<std::size_t>(v)] * step *
                                        units[static_cast<std::size_t>(v)]);
        best = std::max(best, rate);
        return;
    }
    for (int u = 0; u <= units_left; ++u) {
        units[static_cast<std::size_t>(band)] = u;
        grid_recurse(gains, step, band + 1, units_left - u, units, best);
    }
}

/// Best sum-rate over a simplex grid of ~`target_points` power splits.
inline GridBest waterfill_grid_best(const std::vector<double>& gains, double P,
                                    int target_points) {
    const int n = static_cast<int>(gains.size());
    int M = 2;
    while (true) {
        double count = 1.0;
        for (int j = 1; j < n; ++j) count = count * (M + j) / j;  // C(M+n-1, n-1)
        if (count >= target_points || M > 20000) break;
        ++M;
    }
    std::vector<int> units(static_cast<std::size_t>(n), 0);
    GridBest out;
    out.step = P / M;
    grid_recurse(gains, out.step, 0, M, units, out.rate);
    return out;
}

/// Synthetic single-pair realization with R = 0 and |g|^2 chosen to produce
/// the requested per-band SNR gains at unit noise.
inline ChannelRealization channel_with_gains(const std::vector<double>& gains) {
    ChannelRealization ch;
    ch.K = 1;
    ch.V = static_cast<int>(gains.size());
    ch.R = 0;
    ch.g.assign(static_cast<std::size_t>(ch.V) * 2, cplx{});
    for (int v = 0; v < ch.V; ++v)
        for (int i = 0; i < 2; ++i)
            ch.g[ch.gi(0, v, i)] = std::sqrt(gains[static_cast<std::size_t>(v)]);
    return ch;
}

/// Matching config: unit noise, unit kappa, explicit budget.
inline SystemConfig config_for_gains(int V, double P) {
    SystemConfig cfg;
    cfg.K = 1;
    cfg.V = V;
    cfg.R = 1;  // validation floor; the synthetic channel itself has R = 0
    cfg.codebook = Codebook::continuous();
    cfg.power_w.assign(1, {P, P});
    cfg.noise_w.assign(1, std::vector<double>(static_cast<std::size_t>(V), 1.0));
    cfg.kappa.assign(1, 1.0);
    cfg.L_kk = 1;
    cfg.L_kr = 1;
    cfg.L_rk = 1;
    return cfg;
}

}  // namespace risofdm::testsupport
