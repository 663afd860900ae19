#include "risofdm/allocation.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "risofdm/rate.hpp"

namespace risofdm {

std::optional<Allocation::Owner> Allocation::owner(int v) const {
    for (int k = 0; k < K; ++k)
        for (int i = 0; i < 2; ++i)
            if (owned(k, v, i)) return Owner{k, i};
    return std::nullopt;
}

std::vector<double> band_gains(const ChannelRealization& ch, const PhaseVector& psi,
                               const SystemConfig& cfg, int k, int i) {
    std::vector<double> w(static_cast<std::size_t>(ch.V));
    for (int v = 0; v < ch.V; ++v) {
        const cplx hbar = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
        w[v] = abs2(hbar) / cfg.noise(k, v);
    }
    return w;
}

Allocation allocate_subbands(const ChannelRealization& ch, const PhaseVector& psi_bar,
                             const SystemConfig& cfg) {
    const int K = ch.K, V = ch.V;
    if (V < 2 * K) throw ConfigError("allocate_subbands requires V >= 2K");

    // Rate of (k,i) on band v at psi_bar, budget spread over all V bands.
    std::vector<std::vector<std::array<double, 2>>> gamma_rate(
        K, std::vector<std::array<double, 2>>(V));
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < 2; ++i) {
            const double p = cfg.power(k, i) / static_cast<double>(V);
            const auto gains = band_gains(ch, psi_bar, cfg, k, i);
            for (int v = 0; v < V; ++v) gamma_rate[k][v][i] = std::log2(1.0 + p * gains[v]);
        }
    }

    Allocation alloc(K, V);
    std::vector<bool> available(static_cast<std::size_t>(V), true);
    std::vector<std::array<double, 2>> score(K, {0.0, 0.0});

    auto best_band = [&](int k, int i) {
        int best = -1;
        double best_rate = -1.0;
        for (int v = 0; v < V; ++v) {
            if (!available[v]) continue;
            if (gamma_rate[k][v][i] > best_rate) {  // strict: lowest v wins ties
                best_rate = gamma_rate[k][v][i];
                best = v;
            }
        }
        return best;
    };

    // Phase 1: every node-direction claims its single best band.
    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < 2; ++i) {
            const int v = best_band(k, i);
            assert(v >= 0);
            score[k][i] = gamma_rate[k][v][i];
            alloc.eta[alloc.idx(k, v, i)] = 1;
            available[v] = false;
        }
    }

    // Phase 2: the currently worst node-direction claims its best band.
    int remaining = V - 2 * K;
    while (remaining > 0) {
        int wk = 0, wi = 0;
        double worst = std::numeric_limits<double>::infinity();
        for (int k = 0; k < K; ++k) {
            for (int i = 0; i < 2; ++i) {
                if (score[k][i] < worst) {  // strict: lowest (k, i) wins ties
                    worst = score[k][i];
                    wk = k;
                    wi = i;
                }
            }
        }
        const int v = best_band(wk, wi);
        assert(v >= 0);
        score[wk][wi] += gamma_rate[wk][v][wi];
        alloc.eta[alloc.idx(wk, v, wi)] = 1;
        available[v] = false;
        --remaining;
    }
    return alloc;
}

void uniform_power(Allocation& alloc, const SystemConfig& cfg) {
    for (int k = 0; k < alloc.K; ++k)
        for (int v = 0; v < alloc.V; ++v)
            for (int i = 0; i < 2; ++i)
                alloc.p[alloc.idx(k, v, i)] =
                    alloc.owned(k, v, i) ? cfg.power(k, i) / static_cast<double>(alloc.V) : 0.0;
}

void uniform_power_over_owned(Allocation& alloc, const SystemConfig& cfg) {
    for (int k = 0; k < alloc.K; ++k) {
        for (int i = 0; i < 2; ++i) {
            int owned = 0;
            for (int v = 0; v < alloc.V; ++v) owned += alloc.owned(k, v, i) ? 1 : 0;
            for (int v = 0; v < alloc.V; ++v)
                alloc.p[alloc.idx(k, v, i)] =
                    alloc.owned(k, v, i) ? cfg.power(k, i) / static_cast<double>(owned) : 0.0;
        }
    }
}

std::vector<double> waterfill(const std::vector<std::uint8_t>& owned_bands,
                              const std::vector<double>& gains, double P) {
    assert(owned_bands.size() == gains.size() && P > 0.0);
    int n = 0;
    double inv_sum = 0.0;
    for (std::size_t v = 0; v < owned_bands.size(); ++v) {
        if (!owned_bands[v]) continue;
        assert(gains[v] > 0.0);
        ++n;
        inv_sum += 1.0 / gains[v];
    }
    std::vector<double> p(owned_bands.size(), 0.0);
    if (n == 0) return p;
    const double level = (P + inv_sum) / static_cast<double>(n);
    for (std::size_t v = 0; v < owned_bands.size(); ++v)
        if (owned_bands[v]) p[v] = std::max(0.0, level - 1.0 / gains[v]);
    return p;
}

WaterfillResult iterative_waterfill(const ChannelRealization& ch,
                                    const std::vector<std::uint8_t>& active_eta,
                                    const PhaseVector& psi, const SystemConfig& cfg) {
    const int K = ch.K, V = ch.V;
    Allocation shape(K, V);  // index helper only
    WaterfillResult out;
    out.p.assign(active_eta.size(), 0.0);
    out.active = active_eta;

    for (int k = 0; k < K; ++k) {
        for (int i = 0; i < 2; ++i) {
            const auto gains = band_gains(ch, psi, cfg, k, i);
            std::vector<std::uint8_t> act(static_cast<std::size_t>(V), 0);
            int n_active = 0;
            int best_v = -1;
            for (int v = 0; v < V; ++v) {
                if (!active_eta[shape.idx(k, v, i)]) continue;
                if (best_v < 0 || gains[v] > gains[best_v]) best_v = v;
                if (gains[v] > 0.0) {
                    act[v] = 1;
                    ++n_active;
                }
            }
            if (best_v < 0) continue;  // owns nothing (cannot happen post-assignment)

            std::vector<double> p;
            while (n_active > 0) {
                p = waterfill(act, gains, cfg.power(k, i));
                int weakest = -1;
                bool any_zero = false;
                for (int v = 0; v < V; ++v) {
                    if (!act[v]) continue;
                    if (p[v] <= 0.0) any_zero = true;
                    if (weakest < 0 || gains[v] < gains[weakest]) weakest = v;
                }
                if (!any_zero) break;
                act[weakest] = 0;
                --n_active;
            }

            if (n_active == 0) {
                // Degenerate: nothing survived; keep the strongest band at
                // full power so the direction is never silently muted.
                act.assign(static_cast<std::size_t>(V), 0);
                act[best_v] = 1;
                p.assign(static_cast<std::size_t>(V), 0.0);
                p[best_v] = cfg.power(k, i);
            }

            for (int v = 0; v < V; ++v) {
                out.active[shape.idx(k, v, i)] = act[v];
                out.p[shape.idx(k, v, i)] = act[v] ? p[v] : 0.0;
            }
        }
    }
    return out;
}

}  // namespace risofdm
