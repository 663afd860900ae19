#include "risofdm/channel.hpp"

#include <cassert>
#include <cmath>

namespace risofdm {

double distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Geometry sample_geometry(const SystemConfig& cfg, Rng& rng) {
    Geometry g;
    g.node_pos.resize(cfg.K);
    g.d_kk.resize(cfg.K);
    g.d_node_ris.resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
        for (int n = 0; n < 2; ++n)
            g.node_pos[k][n] = rng.in_sphere(cfg.cluster_centers[n], cfg.cluster_radius);
        g.d_kk[k] = distance(g.node_pos[k][0], g.node_pos[k][1]);
        for (int n = 0; n < 2; ++n)
            g.d_node_ris[k][n] = distance(g.node_pos[k][n], cfg.ris_position);
    }
    return g;
}

double path_loss(double d, double beta, double rho0, double d0) {
    assert(d > 0.0);
    return rho0 * std::pow(d / d0, -beta);
}

TapVector sample_taps(LinkKind kind, int L, double alpha, double rho, Rng& rng) {
    assert(L >= 1 && alpha > 0.0 && alpha < 1.0 && rho > 0.0);
    TapVector tv;
    tv.kind = kind;
    tv.taps.resize(L);
    const double head = rho * (1.0 - alpha) / (1.0 - std::pow(alpha, L));
    for (int l = 0; l < L; ++l) {
        const double amp = std::sqrt(head * std::pow(alpha, l));
        tv.taps[l] = amp * rng.cnormal();
    }
    return tv;
}

cvec cascade_reflected(const cvec& xi_kr, const cvec& xi_rk, int V) {
    const std::size_t n = xi_kr.size() + xi_rk.size() - 1;
    if (n > static_cast<std::size_t>(V))
        throw ConfigError("cascaded channel longer than V; cannot zero-pad");
    cvec out(static_cast<std::size_t>(V), cplx{0.0, 0.0});
    for (std::size_t a = 0; a < xi_kr.size(); ++a)
        for (std::size_t b = 0; b < xi_rk.size(); ++b) out[a + b] += xi_kr[a] * xi_rk[b];
    return out;
}

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT, forward convention e^{-j2pi vn/V}.
void fft_pow2(cvec& a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const cplx wl{std::cos(ang), std::sin(ang)};
        for (std::size_t i = 0; i < n; i += len) {
            cplx w{1.0, 0.0};
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx t = w * a[i + j + len / 2];
                a[i + j] = u + t;
                a[i + j + len / 2] = u - t;
                w *= wl;
            }
        }
    }
}

}  // namespace

cvec freq_response(const cvec& padded_taps) {
    const std::size_t V = padded_taps.size();
    if (V == 0) throw ConfigError("freq_response needs a non-empty input");
    if (is_pow2(V)) {
        cvec out = padded_taps;
        fft_pow2(out);
        return out;
    }
    cvec out(V);
    for (std::size_t v = 0; v < V; ++v) {
        cplx acc{0.0, 0.0};
        for (std::size_t n = 0; n < V; ++n)
            acc += padded_taps[n] *
                   std::polar(1.0, -kTwoPi * static_cast<double>(v * n % V) / static_cast<double>(V));
        out[v] = acc;
    }
    return out;
}

ChannelRealization build_realization(const SystemConfig& cfg, Rng& rng) {
    ChannelRealization ch;
    ch.K = cfg.K;
    ch.V = cfg.V;
    ch.R = cfg.R;
    ch.geom = sample_geometry(cfg, rng);
    ch.g.assign(static_cast<std::size_t>(cfg.K) * cfg.V * 2, cplx{});
    ch.h.assign(static_cast<std::size_t>(cfg.K) * cfg.V * 2 * cfg.R, cplx{});
    ch.taps_kk.resize(static_cast<std::size_t>(cfg.K) * 2);
    ch.taps_kr.resize(static_cast<std::size_t>(cfg.K) * 2 * cfg.R);
    ch.taps_rk.resize(static_cast<std::size_t>(cfg.K) * 2 * cfg.R);

    // Direct links.
    for (int k = 0; k < cfg.K; ++k) {
        const double rho = path_loss(ch.geom.d_kk[k], cfg.beta_kk, cfg.rho0, cfg.d0);
        for (int i = 0; i < 2; ++i) {
            TapVector tv = sample_taps(LinkKind::Direct, cfg.L_kk, cfg.alpha, rho, rng);
            cvec padded(static_cast<std::size_t>(cfg.V), cplx{});
            std::copy(tv.taps.begin(), tv.taps.end(), padded.begin());
            const cvec G = freq_response(padded);
            for (int v = 0; v < cfg.V; ++v) ch.g[ch.gi(k, v, i)] = G[v];
            ch.taps_kk[2 * k + i] = std::move(tv.taps);
        }
    }

    // Reflected links, element-major so a shared stream keeps the common
    // element prefix identical across different R.
    for (int r = 0; r < cfg.R; ++r) {
        for (int k = 0; k < cfg.K; ++k) {
            for (int i = 0; i < 2; ++i) {
                const int tx_node = (i == 0) ? 0 : 1;
                const int rx_node = 1 - tx_node;
                const double rho_in =
                    path_loss(ch.geom.d_node_ris[k][tx_node], cfg.beta_kr, cfg.rho0, cfg.d0);
                const double rho_out =
                    path_loss(ch.geom.d_node_ris[k][rx_node], cfg.beta_rk, cfg.rho0, cfg.d0);
                TapVector in = sample_taps(LinkKind::NodeToRis, cfg.L_kr, cfg.alpha, rho_in, rng);
                TapVector out = sample_taps(LinkKind::RisToNode, cfg.L_rk, cfg.alpha, rho_out, rng);
                const cvec cascade = cascade_reflected(in.taps, out.taps, cfg.V);
                const cvec H = freq_response(cascade);
                for (int v = 0; v < cfg.V; ++v)
                    ch.h[ch.gi(k, v, i) * static_cast<std::size_t>(cfg.R) + r] = std::conj(H[v]);
                const std::size_t e = (static_cast<std::size_t>(k) * 2 + i) * cfg.R + r;
                ch.taps_kr[e] = std::move(in.taps);
                ch.taps_rk[e] = std::move(out.taps);
            }
        }
    }
    return ch;
}

ChannelRealization ChannelRealization::without_ris() const {
    ChannelRealization out = *this;
    for (auto& z : out.h) z = cplx{};
    for (auto& t : out.taps_kr)
        for (auto& z : t) z = cplx{};
    for (auto& t : out.taps_rk)
        for (auto& z : t) z = cplx{};
    return out;
}

}  // namespace risofdm
