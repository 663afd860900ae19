#include "risofdm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "risofdm/harness.hpp"
#include "risofdm/stats.hpp"

namespace risofdm {

namespace {

// ---- independent reference routines (kept free of the library paths they
// ---- check) ----

cvec naive_dft(const cvec& x) {
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

cvec conv_gather(const cvec& a, const cvec& b) {
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

Allocation random_allocation(const SystemConfig& cfg, Rng& rng, bool random_powers) {
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
                alloc.p[alloc.idx(k, owned[j], i)] =
                    cfg.power(k, i) * share[j] / total;
        }
    }
    return alloc;
}

// Step-by-step restatement of the greedy assignment used as its oracle.
Allocation resimulate_assignment(const ChannelRealization& ch, const PhaseVector& psi,
                                 const SystemConfig& cfg) {
    const int K = ch.K, V = ch.V;
    std::vector<std::vector<std::array<double, 2>>> rates(K,
                                                          std::vector<std::array<double, 2>>(V));
    for (int k = 0; k < K; ++k)
        for (int v = 0; v < V; ++v)
            for (int i = 0; i < 2; ++i) {
                const cplx hbar = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                const double snr =
                    (cfg.power(k, i) / V) * abs2(hbar) / cfg.noise(k, v);
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

void grid_recurse(const std::vector<double>& gains, double step, int band, int units_left,
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

struct GridBest {
    double rate = 0.0;
    double step = 0.0;
};

GridBest waterfill_grid_best(const std::vector<double>& gains, double P, int target_points) {
    const int n = static_cast<int>(gains.size());
    int M = 2;
    while (true) {
        // compositions of M into n parts: C(M+n-1, n-1)
        double count = 1.0;
        for (int j = 1; j < n; ++j) count = count * (M + j) / j;
        if (count >= target_points || M > 20000) break;
        ++M;
    }
    std::vector<int> units(static_cast<std::size_t>(n), 0);
    GridBest out;
    out.step = P / M;
    grid_recurse(gains, out.step, 0, M, units, out.rate);
    return out;
}

struct Tally {
    std::vector<CheckResult> results;
    void add(const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    }
};

std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(3);
    ss << x;
    return ss.str();
}

}  // namespace

std::vector<CheckResult> run_verification(std::uint64_t seed) {
    Tally tally;

    // Power-delay profile normalization.
    {
        double worst = 0.0;
        for (int L : {1, 2, 4, 8, 16}) {
            for (double a : {0.1, 0.5, 0.9}) {
                double sum = 0.0;
                const double head = (1.0 - a) / (1.0 - std::pow(a, L));
                for (int l = 0; l < L; ++l) sum += head * std::pow(a, l);
                worst = std::max(worst, std::abs(sum - 1.0));
            }
        }
        tally.add("pdp-normalization", worst < 1e-12, "max |sum-1| = " + fmt(worst));
    }

    // Geometry: degenerate clusters give the textbook distances; samples stay
    // inside the spheres; same seed, same draw.
    {
        SystemConfig cfg = SystemConfig::profile("paper");
        cfg.cluster_radius = 0.0;
        Rng r1(seed), r2(seed);
        const Geometry g = sample_geometry(cfg, r1);
        bool ok = std::abs(g.d_kk[0] - 70.0) < 1e-12 &&
                  std::abs(g.d_node_ris[0][0] - std::sqrt(35.0 * 35.0 + 25.0)) < 1e-12;
        cfg.cluster_radius = 5.0;
        Rng r3 = Rng::stream(seed, 1), r4 = Rng::stream(seed, 1);
        const Geometry s1 = sample_geometry(cfg, r3);
        const Geometry s2 = sample_geometry(cfg, r4);
        for (int k = 0; k < cfg.K; ++k) {
            for (int n = 0; n < 2; ++n) {
                ok = ok && distance(s1.node_pos[k][n], cfg.cluster_centers[n]) <= cfg.cluster_radius;
                for (int d = 0; d < 3; ++d)
                    ok = ok && s1.node_pos[k][n][d] == s2.node_pos[k][n][d];
            }
        }
        tally.add("geometry-contract", ok, "distances, containment, determinism");
    }

    // Frequency response equals the independent DFT of the composite
    // time-domain channel for a random codebook point.
    {
        SystemConfig cfg = SystemConfig::profile("paper");
        cfg.R = 8;
        cfg.codebook = Codebook::discrete(3);
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            Rng rng = Rng::stream(seed, 2, static_cast<std::uint64_t>(trial));
            const ChannelRealization ch = build_realization(cfg, rng);
            const PhaseVector psi = PhaseVector::random(cfg.R, cfg.codebook, rng);
            for (int k = 0; k < cfg.K; ++k) {
                for (int i = 0; i < 2; ++i) {
                    cvec composite(static_cast<std::size_t>(cfg.V), cplx{});
                    const auto& direct = ch.direct_taps(k, i);
                    std::copy(direct.begin(), direct.end(), composite.begin());
                    for (int r = 0; r < cfg.R; ++r) {
                        const cvec cas = conv_gather(ch.ris_in_taps(k, i, r), ch.ris_out_taps(k, i, r));
                        for (std::size_t l = 0; l < cas.size(); ++l)
                            composite[l] += psi.psi[static_cast<std::size_t>(r)] * cas[l];
                    }
                    const cvec ref = naive_dft(composite);
                    for (int v = 0; v < cfg.V; ++v) {
                        const cplx found =
                            effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                        worst = std::max(worst, std::abs(found - ref[static_cast<std::size_t>(v)]));
                    }
                }
            }
        }
        tally.add("dft-time-domain-equivalence", worst < 1e-10, "max gap = " + fmt(worst));
    }

    // Surrogate equals the negated weighted sum-rate after the filter and
    // weight updates.
    {
        SystemConfig cfg = SystemConfig::profile("paper");
        cfg.R = 8;
        cfg.codebook = Codebook::discrete(2);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            Rng rng = Rng::stream(seed, 3, static_cast<std::uint64_t>(trial));
            const ChannelRealization ch = build_realization(cfg, rng);
            const PhaseVector psi = PhaseVector::random(cfg.R, cfg.codebook, rng);
            const Allocation alloc = random_allocation(cfg, rng, true);
            SurrogateState state(cfg.K, cfg.V);
            const SurrogateValues sv = refresh_surrogate(ch, alloc, psi, state, cfg);
            const auto sums = direction_sumrates(ch, alloc, psi, cfg);
            worst = std::max(worst, std::abs(sv.f1 + sums[0]));
            worst = std::max(worst, std::abs(sv.f2 + sums[1]));
        }
        tally.add("surrogate-rate-identity", worst < 1e-9, "max |f_i + rate_i| = " + fmt(worst));
    }

    // Central differences match the analytic subgradient components.
    {
        SystemConfig cfg = SystemConfig::profile("paper");
        cfg.R = 6;
        cfg.codebook = Codebook::continuous();
        double worst = 0.0;
        const double h = 1e-6;
        for (int trial = 0; trial < 5; ++trial) {
            Rng rng = Rng::stream(seed, 4, static_cast<std::uint64_t>(trial));
            const ChannelRealization ch = build_realization(cfg, rng);
            const PhaseVector psi = PhaseVector::random(cfg.R, cfg.codebook, rng);
            const Allocation alloc = random_allocation(cfg, rng, true);
            SurrogateState state(cfg.K, cfg.V);
            refresh_surrogate(ch, alloc, psi, state, cfg);
            for (int i = 0; i < 2; ++i) {
                const cvec grad = gradient_fi(ch, alloc, psi, state, cfg, i);
                for (int dir = 0; dir < 3; ++dir) {
                    cvec d(psi.psi.size());
                    for (auto& z : d) z = rng.cnormal();
                    const double dn = norm2(d);
                    for (auto& z : d) z /= dn;
                    cvec plus = psi.psi, minus = psi.psi;
                    for (std::size_t r = 0; r < d.size(); ++r) {
                        plus[r] += h * d[r];
                        minus[r] -= h * d[r];
                    }
                    const double fd = (surrogate_fi_at(ch, alloc, plus, state, cfg, i) -
                                       surrogate_fi_at(ch, alloc, minus, state, cfg, i)) /
                                      (2.0 * h);
                    cplx dot{};
                    for (std::size_t r = 0; r < d.size(); ++r) dot += std::conj(d[r]) * grad[r];
                    const double analytic = 2.0 * dot.real();
                    const double denom = std::max(std::abs(analytic), 1e-30);
                    worst = std::max(worst, std::abs(fd - analytic) / denom);
                }
            }
        }
        tally.add("gradient-finite-difference", worst < 1e-4, "max rel err = " + fmt(worst));
    }

    // Closed-form waterfilling: KKT water level and grid-search optimality.
    {
        double worst_kkt = 0.0;
        bool grid_ok = true;
        for (int trial = 0; trial < 10; ++trial) {
            Rng rng = Rng::stream(seed, 5, static_cast<std::uint64_t>(trial));
            const int n = 2 + static_cast<int>(rng.index(3));
            std::vector<double> gains(static_cast<std::size_t>(n));
            for (auto& g : gains) g = 0.2 + 5.0 * rng.u01();
            const double P = 0.5 + 2.0 * rng.u01();
            std::vector<std::uint8_t> owned(static_cast<std::size_t>(n), 1);

            // prune exactly as the full algorithm does
            std::vector<double> p;
            std::vector<std::uint8_t> act = owned;
            int active = n;
            while (active > 0) {
                p = waterfill(act, gains, P);
                int weakest = -1;
                bool any_zero = false;
                for (int v = 0; v < n; ++v) {
                    if (!act[static_cast<std::size_t>(v)]) continue;
                    if (p[static_cast<std::size_t>(v)] <= 0.0) any_zero = true;
                    if (weakest < 0 || gains[static_cast<std::size_t>(v)] <
                                           gains[static_cast<std::size_t>(weakest)])
                        weakest = v;
                }
                if (!any_zero) break;
                act[static_cast<std::size_t>(weakest)] = 0;
                --active;
            }
            double level = 0.0;
            int n_pos = 0;
            for (int v = 0; v < n; ++v)
                if (act[static_cast<std::size_t>(v)]) {
                    level += p[static_cast<std::size_t>(v)] +
                             1.0 / gains[static_cast<std::size_t>(v)];
                    ++n_pos;
                }
            level /= n_pos;
            for (int v = 0; v < n; ++v)
                if (act[static_cast<std::size_t>(v)])
                    worst_kkt = std::max(worst_kkt,
                                         std::abs(p[static_cast<std::size_t>(v)] +
                                                  1.0 / gains[static_cast<std::size_t>(v)] - level));

            double closed_rate = 0.0;
            for (int v = 0; v < n; ++v)
                closed_rate += std::log2(1.0 + gains[static_cast<std::size_t>(v)] *
                                                   p[static_cast<std::size_t>(v)]);
            const GridBest grid = waterfill_grid_best(gains, P, 10000);
            double gsum = 0.0;
            for (double g : gains) gsum += g;
            const double slack = static_cast<double>(n) * grid.step * gsum / std::log(2.0);
            grid_ok = grid_ok && grid.rate <= closed_rate + 1e-9 &&
                      closed_rate - grid.rate <= slack;
        }
        tally.add("waterfill-kkt", worst_kkt < 1e-9, "max level residual = " + fmt(worst_kkt));
        tally.add("waterfill-grid-optimal", grid_ok, "closed form vs simplex grid");
    }

    // Assignment equals its step-by-step re-simulation.
    {
        SystemConfig cfg = SystemConfig::profile("paper");
        cfg.K = 2;
        cfg.V = 8;
        cfg.R = 4;
        cfg.set_uniform_power_dbm(25.0);
        cfg.set_uniform_noise_dbm(-110.0);
        cfg.set_uniform_kappa(1.0);
        bool ok = true;
        for (int trial = 0; trial < 20; ++trial) {
            Rng rng = Rng::stream(seed, 6, static_cast<std::uint64_t>(trial));
            const ChannelRealization ch = build_realization(cfg, rng);
            const PhaseVector psi = init_phase(ch, cfg);
            const Allocation a = allocate_subbands(ch, psi, cfg);
            const Allocation b = resimulate_assignment(ch, psi, cfg);
            ok = ok && a.eta == b.eta;
        }
        tally.add("assignment-resimulation", ok, "20/20 identical");
    }

    // Exhaustive bound at tiny scale.
    {
        SystemConfig cfg = SystemConfig::profile("tiny");
        bool ok = true;
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            Rng ch_rng = Rng::stream(seed, 7, static_cast<std::uint64_t>(trial));
            const ChannelRealization ch = build_realization(cfg, ch_rng);
            Rng r1 = Rng::stream(seed, 8, static_cast<std::uint64_t>(trial));
            Rng r2 = Rng::stream(seed, 9, static_cast<std::uint64_t>(trial));
            const TrialResult heur = run_scheme_on(cfg, Scheme::OptPsg, ch, r1);
            const TrialResult oracle = run_scheme_on(cfg, Scheme::OracleTiny, ch, r2);
            ok = ok && heur.min_sumrate <= oracle.min_sumrate + 1e-12;
            worst = std::max(worst, heur.min_sumrate - oracle.min_sumrate);
        }
        tally.add("exhaustive-oracle-bound", ok, "max heuristic-oracle gap = " + fmt(worst));
    }

    // Projection rules.
    {
        bool ok = true;
        const PhaseVector a = project({cplx{0.6, 0.8}}, Codebook::discrete(1));
        ok = ok && a.codes[0] == 0;
        const PhaseVector b = project({cplx{-0.6, 0.8}}, Codebook::discrete(1));
        ok = ok && b.codes[0] == 1;
        const PhaseVector c = project({cplx{-1.0, 1.0}}, Codebook::discrete(2));
        ok = ok && c.codes[0] == 1;  // exact midpoint takes the lower code
        const PhaseVector d = project({cplx{0.0, 0.0}}, Codebook::discrete(3));
        ok = ok && d.codes[0] == 0;
        const PhaseVector e = project({2.0 * std::polar(1.0, kPi / 3.0)}, Codebook::continuous());
        ok = ok && std::abs(e.psi[0] - std::polar(1.0, kPi / 3.0)) < 1e-12;
        tally.add("projection-rules", ok, "nearest angle, ties low, zero to code 0");
    }

    // PSG never returns anything worse than its warm start and the tracked
    // best is the running minimum of the trace.
    {
        SystemConfig cfg = SystemConfig::profile("paper");
        cfg.R = 8;
        cfg.T_max = 40;
        cfg.codebook = Codebook::discrete(2);
        bool ok = true;
        for (int trial = 0; trial < 5; ++trial) {
            Rng rng = Rng::stream(seed, 10, static_cast<std::uint64_t>(trial));
            const ChannelRealization ch = build_realization(cfg, rng);
            const PhaseVector psi0 = PhaseVector::random(cfg.R, cfg.codebook, rng);
            Allocation alloc = allocate_subbands(ch, psi0, cfg);
            uniform_power_over_owned(alloc, cfg);
            const PsgResult res = psg_optimize(ch, alloc, psi0, cfg);
            ok = ok && res.f_best <= res.f_trace.front() + 1e-12;
            ok = ok && res.f_best <= *std::min_element(res.f_trace.begin(), res.f_trace.end()) + 1e-12;
            for (int r = 0; r < cfg.R; ++r) ok = ok && std::abs(std::abs(res.best.psi[r]) - 1.0) < 1e-12;
            ok = ok && static_cast<int>(res.best.codes.size()) == cfg.R;
        }
        tally.add("psg-best-tracking", ok, "non-degrading, unit modulus, codebook membership");
    }

    return tally.results;
}

}  // namespace risofdm
