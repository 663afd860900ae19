#include "risofdm/phase_design.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace risofdm {

StackedChannels stack_channels(const ChannelRealization& ch) {
    const int m = ch.K * ch.V;
    StackedChannels sc;
    sc.g1.resize(static_cast<std::size_t>(m));
    sc.g2.resize(static_cast<std::size_t>(m));
    sc.H1 = CMat(m, ch.R);
    sc.H2 = CMat(m, ch.R);
    for (int k = 0; k < ch.K; ++k) {
        for (int v = 0; v < ch.V; ++v) {
            const int row = k * ch.V + v;
            for (int i = 0; i < 2; ++i) {
                auto& g = (i == 0) ? sc.g1 : sc.g2;
                auto& H = (i == 0) ? sc.H1 : sc.H2;
                g[static_cast<std::size_t>(row)] = ch.g_at(k, v, i);
                const auto h = ch.h_at(k, v, i);
                for (int r = 0; r < ch.R; ++r) H(row, r) = std::conj(h[r]);
            }
        }
    }
    return sc;
}

CMat lift_gain_matrix(const CMat& H, const cvec& g) {
    const int R = H.cols;
    CMat out(R + 1, R + 1);
    for (int r1 = 0; r1 < R; ++r1) {
        for (int r2 = r1; r2 < R; ++r2) {
            cplx acc{};
            for (int m = 0; m < H.rows; ++m) acc += std::conj(H(m, r1)) * H(m, r2);
            out(r1, r2) = acc;
            out(r2, r1) = std::conj(acc);
        }
    }
    for (int r = 0; r < R; ++r) {
        cplx acc{};
        for (int m = 0; m < H.rows; ++m) acc += std::conj(H(m, r)) * g[static_cast<std::size_t>(m)];
        out(r, R) = acc;
        out(R, r) = std::conj(acc);
    }
    out(R, R) = cplx{0.0, 0.0};
    return out;
}

namespace {

double quad_form(const CMat& m, const cvec& x) {
    const cvec y = matvec(m, x);
    cplx acc{};
    for (std::size_t j = 0; j < x.size(); ++j) acc += std::conj(x[j]) * y[j];
    return acc.real();
}

}  // namespace

InitResult init_phase_stacked(const StackedChannels& sc, const Codebook& cb, int grid_points) {
    const int R = sc.H1.cols;
    InitResult out;
    if (R == 0) {
        out.psi = PhaseVector::ones(0, cb);
        return out;
    }

    const CMat Ht1 = lift_gain_matrix(sc.H1, sc.g1);
    const CMat Ht2 = lift_gain_matrix(sc.H2, sc.g2);
    if (frobenius_norm(Ht1) == 0.0 && frobenius_norm(Ht2) == 0.0) {
        out.psi = PhaseVector::ones(R, cb);
        return out;
    }

    assert(grid_points >= 2);
    CMat blend(R + 1, R + 1);
    cvec warm;
    bool have_best = false;
    cvec best_vec;
    for (int gidx = 0; gidx < grid_points; ++gidx) {
        const double lam = static_cast<double>(gidx) / static_cast<double>(grid_points - 1);
        for (std::size_t j = 0; j < blend.a.size(); ++j)
            blend.a[j] = Ht2.a[j] + lam * (Ht1.a[j] - Ht2.a[j]);

        EigenPair ep = principal_eigenpair(blend, warm.empty() ? nullptr : &warm);
        if (!ep.converged) {
            // Accept the looser residual bound before giving up.
            const double scale = std::max(frobenius_norm(blend), 1e-300);
            if (ep.residual > 1e-8 * scale)
                throw SolverError("phase initialization: power iteration did not converge");
        }
        warm = ep.vec;

        const double score = std::min(quad_form(Ht1, ep.vec), quad_form(Ht2, ep.vec));
        if (!have_best || score > out.score) {
            have_best = true;
            out.score = score;
            out.lambda1 = lam;
            best_vec = ep.vec;
        }
    }

    cvec top(best_vec.begin(), best_vec.begin() + R);
    const cplx pivot = best_vec[static_cast<std::size_t>(R)];
    if (std::abs(pivot) >= 1e-10) {
        for (auto& z : top) z /= pivot;
    }
    // else: overall phase is indeterminate; project the raw top block.
    out.psi = project(top, cb);
    return out;
}

PhaseVector init_phase(const ChannelRealization& ch, const SystemConfig& cfg) {
    return init_phase_stacked(stack_channels(ch), cfg.codebook, cfg.lambda_grid_points).psi;
}

void update_receive_filters(const ChannelRealization& ch, const Allocation& alloc,
                            const PhaseVector& psi, SurrogateState& state,
                            const SystemConfig& cfg) {
    for (int k = 0; k < ch.K; ++k) {
        for (int v = 0; v < ch.V; ++v) {
            for (int i = 0; i < 2; ++i) {
                if (!alloc.owned(k, v, i)) continue;
                const double p = alloc.p[alloc.idx(k, v, i)];
                const cplx hbar = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                // xi = psi^H h + g* = conj(hbar); the resulting u makes
                // eps = 1/(1+snr) hold exactly.
                const cplx xi = std::conj(hbar);
                state.u[state.idx(k, v)] =
                    std::sqrt(p) * xi / (p * abs2(xi) + cfg.noise(k, v));
            }
        }
    }
}

std::vector<double> compute_mses(const ChannelRealization& ch, const Allocation& alloc,
                                 const PhaseVector& psi, const SurrogateState& state,
                                 const SystemConfig& cfg) {
    std::vector<double> eps(static_cast<std::size_t>(ch.K) * ch.V, 1.0);
    for (int k = 0; k < ch.K; ++k) {
        for (int v = 0; v < ch.V; ++v) {
            for (int i = 0; i < 2; ++i) {
                if (!alloc.owned(k, v, i)) continue;
                const cplx hbar = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                eps[state.idx(k, v)] = mse_compact(alloc.p[alloc.idx(k, v, i)], hbar,
                                                   state.u[state.idx(k, v)], cfg.noise(k, v));
            }
        }
    }
    return eps;
}

void update_weights(const std::vector<double>& eps, const Allocation& alloc,
                    SurrogateState& state) {
    for (int k = 0; k < state.K; ++k) {
        for (int v = 0; v < state.V; ++v) {
            bool is_owned = false;
            for (int i = 0; i < 2; ++i) is_owned = is_owned || alloc.owned(k, v, i);
            if (!is_owned) continue;
            const double e = eps[state.idx(k, v)];
            assert(e > 0.0);
            state.w[state.idx(k, v)] = 1.0 / e;
        }
    }
}

SurrogateValues refresh_surrogate(const ChannelRealization& ch, const Allocation& alloc,
                                  const PhaseVector& psi, SurrogateState& state,
                                  const SystemConfig& cfg) {
    update_receive_filters(ch, alloc, psi, state, cfg);
    const auto eps = compute_mses(ch, alloc, psi, state, cfg);
    update_weights(eps, alloc, state);
    const SurrogateValues sv = surrogate_objective(ch, alloc, psi, state, cfg);
    state.f1 = sv.f1;
    state.f2 = sv.f2;
    return sv;
}

cvec gradient_fi(const ChannelRealization& ch, const Allocation& alloc, const PhaseVector& psi,
                 const SurrogateState& state, const SystemConfig& cfg, int i) {
    cvec grad(static_cast<std::size_t>(ch.R), cplx{});
    const double Vd = static_cast<double>(ch.V);
    for (int k = 0; k < ch.K; ++k) {
        for (int v = 0; v < ch.V; ++v) {
            if (!alloc.owned(k, v, i)) continue;
            const double p = alloc.p[alloc.idx(k, v, i)];
            const cplx u = state.u[state.idx(k, v)];
            const double w = state.w[state.idx(k, v)];
            const auto h = ch.h_at(k, v, i);
            const cplx hbar = effective_gain(ch.g_at(k, v, i), h, psi);
            const cplx scalar = p * abs2(u) * hbar - std::sqrt(p) * std::conj(u);
            const double c = cfg.kappa[k] * w / Vd;
            for (int r = 0; r < ch.R; ++r) grad[static_cast<std::size_t>(r)] += c * h[r] * scalar;
        }
    }
    return grad;
}

double surrogate_fi_at(const ChannelRealization& ch, const Allocation& alloc, const cvec& psi_raw,
                       const SurrogateState& state, const SystemConfig& cfg, int i) {
    double f = 0.0;
    const double Vd = static_cast<double>(ch.V);
    for (int k = 0; k < ch.K; ++k) {
        for (int v = 0; v < ch.V; ++v) {
            if (!alloc.owned(k, v, i)) continue;
            const auto h = ch.h_at(k, v, i);
            cplx hbar = ch.g_at(k, v, i);
            for (int r = 0; r < ch.R; ++r) hbar += std::conj(h[r]) * psi_raw[static_cast<std::size_t>(r)];
            const cplx u = state.u[state.idx(k, v)];
            const double w = state.w[state.idx(k, v)];
            const double eps =
                mse_compact(alloc.p[alloc.idx(k, v, i)], hbar, u, cfg.noise(k, v));
            f += cfg.kappa[k] * (w * eps - std::log2(w) - 1.0) / Vd;
        }
    }
    return f;
}

cvec subgradient(const ChannelRealization& ch, const Allocation& alloc, const PhaseVector& psi,
                 const SurrogateState& state, const SystemConfig& cfg) {
    if (std::abs(state.f1 - state.f2) <= 1e-12) {
        const cvec g1 = gradient_fi(ch, alloc, psi, state, cfg, 0);
        const cvec g2 = gradient_fi(ch, alloc, psi, state, cfg, 1);
        cvec out(g1.size());
        for (std::size_t r = 0; r < g1.size(); ++r)
            out[r] = cfg.tau * g1[r] + (1.0 - cfg.tau) * g2[r];
        return out;
    }
    return gradient_fi(ch, alloc, psi, state, cfg, state.f1 > state.f2 ? 0 : 1);
}

PsgResult psg_optimize(const ChannelRealization& ch, const Allocation& alloc,
                       const PhaseVector& psi_start, const SystemConfig& cfg) {
    PsgResult out;
    PhaseVector psi = psi_start;
    SurrogateState state(ch.K, ch.V);

    SurrogateValues sv = refresh_surrogate(ch, alloc, psi, state, cfg);
    out.best = psi;
    out.f_best = sv.f;
    out.f_trace.reserve(static_cast<std::size_t>(cfg.T_max) + 1);
    out.f_trace.push_back(sv.f);

    if (ch.R == 0) return out;

    for (int t = 1; t <= cfg.T_max; ++t) {
        const cvec delta = subgradient(ch, alloc, psi, state, cfg);
        const double dn = norm2(delta);
        if (dn >= 1e-14) {
            const double kappa_t = psg_step_size(t);
            cvec moved(psi.psi.size());
            for (std::size_t r = 0; r < moved.size(); ++r)
                moved[r] = psi.psi[r] - kappa_t * delta[r] / dn;
            psi = project(moved, cfg.codebook);
        }
        sv = refresh_surrogate(ch, alloc, psi, state, cfg);
        out.f_trace.push_back(sv.f);
        if (sv.f < out.f_best) {
            out.f_best = sv.f;
            out.best = psi;
        }
    }
    return out;
}

PhaseVector exhaustive_phase_oracle(const ChannelRealization& ch, const Allocation& alloc,
                                    const SystemConfig& cfg, std::size_t cap) {
    if (!cfg.codebook.is_discrete())
        throw ConfigError("exhaustive oracle requires a discrete codebook");
    const int R = ch.R;
    const int M = cfg.codebook.size();
    double total = std::pow(static_cast<double>(M), R);
    if (!(total <= static_cast<double>(cap)))
        throw ConfigError("exhaustive oracle: codebook too large to enumerate");

    std::vector<int> codes(static_cast<std::size_t>(R), 0);
    PhaseVector best = PhaseVector::from_codes(codes, cfg.codebook);
    double best_obj = min_weighted_sumrate(ch, alloc, best, cfg);
    while (true) {
        // increment the base-M counter
        int pos = 0;
        while (pos < R && ++codes[static_cast<std::size_t>(pos)] == M) {
            codes[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == R) break;
        const PhaseVector cand = PhaseVector::from_codes(codes, cfg.codebook);
        const double obj = min_weighted_sumrate(ch, alloc, cand, cfg);
        if (obj > best_obj) {
            best_obj = obj;
            best = cand;
        }
    }
    return best;
}

}  // namespace risofdm
