#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "risofdm/channel.hpp"
#include "risofdm/phase.hpp"

namespace risofdm {

/// Sub-band ownership indicators and per-sub-band transmit powers (watts).
/// Ownership satisfies: every sub-band belongs to exactly one (pair,
/// direction); powers sum to at most the node budget and are zero off the
/// owned set.
struct Allocation {
    int K = 0, V = 0;
    std::vector<std::uint8_t> eta;  // [k][v][i]
    std::vector<double> p;          // [k][v][i]

    Allocation() = default;
    Allocation(int K_, int V_)
        : K(K_),
          V(V_),
          eta(static_cast<std::size_t>(K_) * V_ * 2, 0),
          p(static_cast<std::size_t>(K_) * V_ * 2, 0.0) {}

    std::size_t idx(int k, int v, int i) const {
        return (static_cast<std::size_t>(k) * V + v) * 2 + i;
    }
    bool owned(int k, int v, int i) const { return eta[idx(k, v, i)] != 0; }

    struct Owner {
        int k, i;
    };
    /// The unique owner of sub-band v, if any.
    std::optional<Owner> owner(int v) const;
};

/// Greedy two-phase assignment: each node-direction first claims its best
/// sub-band in index order, then the node-direction with the lowest
/// accumulated rate repeatedly claims its best remaining sub-band. Rates are
/// evaluated at psi_bar with the budget spread uniformly over all V bands.
/// Ties take the lowest sub-band, then pair, then direction index.
Allocation allocate_subbands(const ChannelRealization& ch, const PhaseVector& psi_bar,
                             const SystemConfig& cfg);

/// P_k^i / V on owned bands, zero elsewhere (the comparison scale used
/// during assignment).
void uniform_power(Allocation& alloc, const SystemConfig& cfg);

/// P_k^i split evenly over the bands the node actually owns (spends the
/// whole budget).
void uniform_power_over_owned(Allocation& alloc, const SystemConfig& cfg);

/// Closed-form waterfilling over one node-direction's owned bands:
/// p_v = [ (P + sum 1/w) / N - 1/w_v ]+ with w the per-band SNR gain.
/// Requires w > 0 on owned bands.
std::vector<double> waterfill(const std::vector<std::uint8_t>& owned_bands,
                              const std::vector<double>& gains, double P);

struct WaterfillResult {
    std::vector<double> p;            // [k][v][i], zero off the active set
    std::vector<std::uint8_t> active; // [k][v][i], owned bands that kept power
};

/// Waterfills every node-direction from `active_eta`, repeatedly dropping
/// the weakest owned band whenever the closed form assigns it zero power,
/// until all remaining bands carry positive power. Dropped bands are not
/// returned to the pool. If every band of a node-direction would be dropped,
/// its single best band is kept at full power.
WaterfillResult iterative_waterfill(const ChannelRealization& ch,
                                    const std::vector<std::uint8_t>& active_eta,
                                    const PhaseVector& psi, const SystemConfig& cfg);

/// Per-band SNR gain |g + h^H psi|^2 / sigma^2 for one (k, i) across v.
std::vector<double> band_gains(const ChannelRealization& ch, const PhaseVector& psi,
                               const SystemConfig& cfg, int k, int i);

}  // namespace risofdm
