#pragma once

#include <array>
#include <span>
#include <vector>

#include "risofdm/config.hpp"
#include "risofdm/rng.hpp"

namespace risofdm {

enum class LinkKind { Direct, NodeToRis, RisToNode };

/// Time-domain multipath taps of one link, drawn with the exponential
/// power-delay profile. The deterministic profile (1-alpha)/(1-alpha^L)*alpha^l
/// sums to 1, so the expected total tap power equals the link path loss.
struct TapVector {
    cvec taps;
    LinkKind kind = LinkKind::Direct;
};

struct Geometry {
    // node_pos[k][0] is Node_k^1, node_pos[k][1] is Node_k^2.
    std::vector<std::array<std::array<double, 3>, 2>> node_pos;
    std::vector<double> d_kk;                         // [k]
    std::vector<std::array<double, 2>> d_node_ris;    // [k][node]
};

/// Per-sub-band frequency responses of one channel draw.
///
/// DFT convention: X[v] = sum_n x[n] e^{-j 2 pi v n / V} (row v of the
/// standard DFT matrix). The stored reflected vector h is conjugated so that
/// the effective gain g + h^H psi equals that forward DFT of the composite
/// time-domain channel for any psi; the time-domain oracle test pins this.
struct ChannelRealization {
    int K = 0, V = 0, R = 0;
    Geometry geom;

    cvec g;  // [k][v][i]
    cvec h;  // [k][v][i][r]

    // Raw taps kept so tests can re-derive the frequency responses.
    std::vector<cvec> taps_kk;  // [k][i]
    std::vector<cvec> taps_kr;  // [k][i][r]
    std::vector<cvec> taps_rk;  // [k][i][r]

    std::size_t gi(int k, int v, int i) const {
        return (static_cast<std::size_t>(k) * V + v) * 2 + i;
    }
    cplx g_at(int k, int v, int i) const { return g[gi(k, v, i)]; }
    std::span<const cplx> h_at(int k, int v, int i) const {
        return {h.data() + gi(k, v, i) * R, static_cast<std::size_t>(R)};
    }

    const cvec& direct_taps(int k, int i) const { return taps_kk[2 * k + i]; }
    const cvec& ris_in_taps(int k, int i, int r) const {
        return taps_kr[(static_cast<std::size_t>(k) * 2 + i) * R + r];
    }
    const cvec& ris_out_taps(int k, int i, int r) const {
        return taps_rk[(static_cast<std::size_t>(k) * 2 + i) * R + r];
    }

    /// Copy with the reflected path removed (direct link only).
    ChannelRealization without_ris() const;
};

double distance(const std::array<double, 3>& a, const std::array<double, 3>& b);

/// Node placement inside the cluster spheres plus all link distances.
Geometry sample_geometry(const SystemConfig& cfg, Rng& rng);

/// rho0 * (d/d0)^-beta; d must be positive.
double path_loss(double d, double beta, double rho0, double d0);

/// Taps with per-tap variance rho*(1-alpha)/(1-alpha^L)*alpha^l.
TapVector sample_taps(LinkKind kind, int L, double alpha, double rho, Rng& rng);

/// Linear convolution of the two tap sequences, zero-padded to length V.
/// The reflection coefficient is applied later as a scalar, not here.
cvec cascade_reflected(const cvec& xi_kr, const cvec& xi_rk, int V);

/// Forward DFT of a length-V sequence (radix-2 FFT when V is a power of
/// two, direct evaluation otherwise).
cvec freq_response(const cvec& padded_taps);

/// Draws one full channel realization. Draw order is fixed (geometry, then
/// all direct links, then reflected links element-by-element) so streams
/// shared across different R values produce identical common elements.
ChannelRealization build_realization(const SystemConfig& cfg, Rng& rng);

}  // namespace risofdm
