#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "risofdm/phase_design.hpp"
#include "risofdm/stats.hpp"
#include "support.hpp"

using namespace risofdm;
namespace ts = risofdm::testsupport;

TEST_CASE("projection: nearest codebook point with deterministic ties") {
    SUBCASE("one bit keeps the closer half-circle") {
        CHECK(project({cplx{0.6, 0.8}}, Codebook::discrete(1)).codes[0] == 0);
        CHECK(project({cplx{-0.6, 0.8}}, Codebook::discrete(1)).codes[0] == 1);
    }
    SUBCASE("continuous keeps the phase and normalizes the modulus") {
        const PhaseVector pv = project({2.0 * std::polar(1.0, kPi / 3.0)}, Codebook::continuous());
        CHECK(std::abs(pv.psi[0] - std::polar(1.0, kPi / 3.0)) < 1e-12);
    }
    SUBCASE("exact midpoint takes the lower code") {
        // (-1, 1) sits at 135 degrees, equidistant from 90 and 180
        const PhaseVector pv = project({cplx{-1.0, 1.0}}, Codebook::discrete(2));
        CHECK(pv.codes[0] == 1);
        CHECK(std::abs(pv.psi[0] - cplx{0.0, 1.0}) < 1e-12);
    }
    SUBCASE("zero maps to code zero") {
        const PhaseVector pv = project({cplx{0.0, 0.0}}, Codebook::discrete(3));
        CHECK(pv.codes[0] == 0);
        CHECK(pv.psi[0] == cplx{1.0, 0.0});
    }
    SUBCASE("codebook membership is exact under round trips") {
        Rng rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            const int bits = 1 + static_cast<int>(rng.index(4));
            cvec z(3);
            for (auto& x : z) x = rng.cnormal();
            const PhaseVector pv = project(z, Codebook::discrete(bits));
            const PhaseVector rebuilt = PhaseVector::from_codes(pv.codes, pv.codebook);
            CHECK(pv.psi == rebuilt.psi);
            for (const cplx& x : pv.psi) CHECK(std::abs(std::abs(x) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("initialization: a single aligned element is kept at angle zero") {
    StackedChannels sc;
    sc.g1 = {cplx{1, 0}};
    sc.g2 = {cplx{1, 0}};
    sc.H1 = CMat(1, 1);
    sc.H2 = CMat(1, 1);
    sc.H1(0, 0) = cplx{1, 0};
    sc.H2(0, 0) = cplx{1, 0};
    for (const Codebook& cb : {Codebook::discrete(1), Codebook::continuous()}) {
        const InitResult res = init_phase_stacked(sc, cb, 11);
        REQUIRE(res.psi.size() == 1);
        CHECK(std::abs(res.psi.psi[0] - cplx{1, 0}) < 1e-9);
        // effective gain |1 + 1|^2
        const double gain = abs2(sc.g1[0] + sc.H1(0, 0) * res.psi.psi[0]);
        CHECK(gain == doctest::Approx(4.0).epsilon(1e-9));
    }
}

TEST_CASE("initialization: isometric channels make every vector equally good") {
    const int R = 3;
    StackedChannels sc;
    sc.g1.assign(R, cplx{});
    sc.g2.assign(R, cplx{});
    sc.H1 = CMat(R, R);
    sc.H2 = CMat(R, R);
    for (int r = 0; r < R; ++r) {
        sc.H1(r, r) = cplx{1, 0};
        sc.H2(r, r) = cplx{1, 0};
    }
    const InitResult res = init_phase_stacked(sc, Codebook::discrete(2), 21);
    auto score = [&](const PhaseVector& pv) {
        double s = 0.0;
        for (const cplx& x : pv.psi) s += abs2(x);  // ||H psi||^2 with H = I
        return s;
    };
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const PhaseVector other = PhaseVector::random(R, Codebook::discrete(2), rng);
        CHECK(std::abs(score(res.psi) - score(other)) < 1e-9);
    }
}

TEST_CASE("initialization: lifted matrices are Hermitian with a sound eigen solve") {
    SystemConfig cfg = SystemConfig::profile("paper");
    cfg.R = 8;
    Rng rng(17);
    const ChannelRealization ch = build_realization(cfg, rng);
    const StackedChannels sc = stack_channels(ch);
    for (const CMat& m : {lift_gain_matrix(sc.H1, sc.g1), lift_gain_matrix(sc.H2, sc.g2)}) {
        CHECK(hermitian_error(m) < 1e-12);
        const EigenPair ep = principal_eigenpair(m);
        CHECK(ep.converged);
        CHECK(ep.residual <= 1e-8 * norm2(ep.vec) + 1e-300);
        // Rayleigh quotient of the top block must not beat the eigenvalue
        CHECK(ep.value >= 0.0);
    }
}

TEST_CASE("initialization beats random codebook points (sign test over trials)") {
    SystemConfig cfg = SystemConfig::profile("paper");
    cfg.R = 6;
    cfg.codebook = Codebook::discrete(2);
    int wins = 0, losses = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng = Rng::stream(800, 0, static_cast<std::uint64_t>(trial));
        const ChannelRealization ch = build_realization(cfg, rng);
        const StackedChannels sc = stack_channels(ch);
        auto min_gain = [&](const PhaseVector& pv) {
            double g1 = 0.0, g2 = 0.0;
            for (int m = 0; m < sc.H1.rows; ++m) {
                cplx a1 = sc.g1[static_cast<std::size_t>(m)];
                cplx a2 = sc.g2[static_cast<std::size_t>(m)];
                for (int r = 0; r < cfg.R; ++r) {
                    a1 += sc.H1(m, r) * pv.psi[static_cast<std::size_t>(r)];
                    a2 += sc.H2(m, r) * pv.psi[static_cast<std::size_t>(r)];
                }
                g1 += abs2(a1);
                g2 += abs2(a2);
            }
            return std::min(g1, g2);
        };
        const PhaseVector init = init_phase(ch, cfg);
        double random_mean = 0.0;
        for (int j = 0; j < 100; ++j)
            random_mean += min_gain(PhaseVector::random(cfg.R, cfg.codebook, rng));
        random_mean /= 100.0;
        if (min_gain(init) > random_mean)
            ++wins;
        else
            ++losses;
    }
    CHECK(sign_test_pvalue(wins, losses) < 0.01);
}

TEST_CASE("initialization score stays near the exhaustive discrete optimum") {
    SystemConfig cfg = SystemConfig::profile("tiny");
    cfg.R = 3;
    cfg.L_kk = 2;
    double ratio_sum = 0.0;
    int trials = 100;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng = Rng::stream(900, 0, static_cast<std::uint64_t>(trial));
        const ChannelRealization ch = build_realization(cfg, rng);
        const StackedChannels sc = stack_channels(ch);
        auto min_gain = [&](const PhaseVector& pv) {
            double g1 = 0.0, g2 = 0.0;
            for (int m = 0; m < sc.H1.rows; ++m) {
                cplx a1 = sc.g1[static_cast<std::size_t>(m)];
                cplx a2 = sc.g2[static_cast<std::size_t>(m)];
                for (int r = 0; r < cfg.R; ++r) {
                    a1 += sc.H1(m, r) * pv.psi[static_cast<std::size_t>(r)];
                    a2 += sc.H2(m, r) * pv.psi[static_cast<std::size_t>(r)];
                }
                g1 += abs2(a1);
                g2 += abs2(a2);
            }
            return std::min(g1, g2);
        };
        double best = 0.0;
        for (int c = 0; c < 8; ++c) {
            const PhaseVector cand =
                PhaseVector::from_codes({c & 1, (c >> 1) & 1, (c >> 2) & 1}, cfg.codebook);
            best = std::max(best, min_gain(cand));
        }
        const PhaseVector init = init_phase(ch, cfg);
        ratio_sum += best > 0.0 ? min_gain(init) / best : 1.0;
    }
    CHECK(ratio_sum / trials >= 0.9);
}

TEST_CASE("receive filters: zero channel, unit example, MMSE identity") {
    SUBCASE("worked example p = 1, sigma2 = 1, xi = 1") {
        SystemConfig cfg = ts::config_for_gains(2, 1.0);
        const ChannelRealization ch = ts::channel_with_gains({1.0, 1.0});
        Allocation alloc(1, 2);
        alloc.eta[alloc.idx(0, 0, 0)] = 1;
        alloc.eta[alloc.idx(0, 1, 1)] = 1;
        alloc.p[alloc.idx(0, 0, 0)] = 1.0;
        alloc.p[alloc.idx(0, 1, 1)] = 1.0;
        SurrogateState state(1, 2);
        update_receive_filters(ch, alloc, PhaseVector::ones(0, Codebook::continuous()), state,
                               cfg);
        CHECK(std::abs(state.u[state.idx(0, 0)] - cplx{0.5, 0.0}) < 1e-15);
    }

    SUBCASE("zero effective channel gives a zero filter") {
        SystemConfig cfg = ts::config_for_gains(2, 1.0);
        const ChannelRealization ch = ts::channel_with_gains({0.0, 0.0});
        Allocation alloc(1, 2);
        alloc.eta[alloc.idx(0, 0, 0)] = 1;
        alloc.eta[alloc.idx(0, 1, 1)] = 1;
        alloc.p[alloc.idx(0, 0, 0)] = 1.0;
        alloc.p[alloc.idx(0, 1, 1)] = 1.0;
        SurrogateState state(1, 2);
        update_receive_filters(ch, alloc, PhaseVector::ones(0, Codebook::continuous()), state,
                               cfg);
        CHECK(state.u[state.idx(0, 0)] == cplx{0.0, 0.0});
    }

    SUBCASE("filters reach eps = 1/(1+snr) on random instances") {
        SystemConfig cfg = SystemConfig::profile("paper");
        cfg.R = 5;
        Rng rng(23);
        const ChannelRealization ch = build_realization(cfg, rng);
        const Allocation alloc = ts::random_allocation(cfg, rng, true);
        const PhaseVector psi = PhaseVector::random(cfg.R, Codebook::discrete(3), rng);
        SurrogateState state(cfg.K, cfg.V);
        update_receive_filters(ch, alloc, psi, state, cfg);
        const auto eps = compute_mses(ch, alloc, psi, state, cfg);
        for (int k = 0; k < cfg.K; ++k) {
            for (int v = 0; v < cfg.V; ++v) {
                for (int i = 0; i < 2; ++i) {
                    if (!alloc.owned(k, v, i)) continue;
                    const cplx hbar = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                    const double snr =
                        alloc.p[alloc.idx(k, v, i)] * abs2(hbar) / cfg.noise(k, v);
                    CHECK(eps[state.idx(k, v)] ==
                          doctest::Approx(1.0 / (1.0 + snr)).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("weights are exact reciprocals") {
    Allocation alloc(1, 2);
    alloc.eta[alloc.idx(0, 0, 0)] = 1;
    alloc.eta[alloc.idx(0, 1, 1)] = 1;
    SurrogateState state(1, 2);
    update_weights({1.0, 0.25}, alloc, state);
    CHECK(state.w[0] == doctest::Approx(1.0));
    CHECK(state.w[1] == doctest::Approx(4.0));
}

TEST_CASE("subgradient: strict selection and the tie blend") {
    SystemConfig cfg = SystemConfig::profile("paper");
    cfg.R = 4;
    cfg.tau = 0.5;
    Rng rng(29);
    const ChannelRealization ch = build_realization(cfg, rng);
    const Allocation alloc = ts::random_allocation(cfg, rng, true);
    const PhaseVector psi = PhaseVector::random(cfg.R, Codebook::discrete(3), rng);
    SurrogateState state(cfg.K, cfg.V);
    refresh_surrogate(ch, alloc, psi, state, cfg);

    const cvec g1 = gradient_fi(ch, alloc, psi, state, cfg, 0);
    const cvec g2 = gradient_fi(ch, alloc, psi, state, cfg, 1);

    SUBCASE("the larger branch is returned verbatim") {
        REQUIRE(std::abs(state.f1 - state.f2) > 1e-12);
        const cvec d = subgradient(ch, alloc, psi, state, cfg);
        const cvec& expect = state.f1 > state.f2 ? g1 : g2;
        CHECK(d == expect);
    }

    SUBCASE("a forced tie blends with tau") {
        state.f1 = -1.0;
        state.f2 = -1.0;
        const cvec d = subgradient(ch, alloc, psi, state, cfg);
        for (std::size_t r = 0; r < d.size(); ++r)
            CHECK(std::abs(d[r] - (0.5 * g1[r] + 0.5 * g2[r])) < 1e-18);
    }
}

TEST_CASE("gradient matches central differences in random directions") {
    SystemConfig cfg = SystemConfig::profile("paper");
    cfg.R = 6;
    const double h = 1e-6;
    for (int trial = 0; trial < 5; ++trial) {
        Rng rng = Rng::stream(950, 0, static_cast<std::uint64_t>(trial));
        const ChannelRealization ch = build_realization(cfg, rng);
        const Allocation alloc = ts::random_allocation(cfg, rng, true);
        const PhaseVector psi = PhaseVector::random(cfg.R, Codebook::continuous(), rng);
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
                CHECK(std::abs(fd - analytic) <=
                      1e-4 * std::max(std::abs(analytic), 1e-30));
            }
        }
    }
}

TEST_CASE("psg: step schedule, degenerate sizes, and the oracle sandwich") {
    SUBCASE("step sizes are 1/t, strictly decreasing, with a diverging sum") {
        double sum = 0.0, prev = 2.0;
        for (int t = 1; t <= 100; ++t) {
            const double s = psg_step_size(t);
            CHECK(s == doctest::Approx(1.0 / t));
            CHECK(s < prev);
            prev = s;
            sum += s;
        }
        CHECK(sum > 5.0);
    }

    SUBCASE("no reflecting elements: the input comes straight back") {
        SystemConfig cfg = ts::config_for_gains(2, 1.0);
        cfg.T_max = 10;
        const ChannelRealization ch = ts::channel_with_gains({1.0, 2.0});
        Allocation alloc(1, 2);
        alloc.eta[alloc.idx(0, 0, 0)] = 1;
        alloc.eta[alloc.idx(0, 1, 1)] = 1;
        alloc.p[alloc.idx(0, 0, 0)] = 1.0;
        alloc.p[alloc.idx(0, 1, 1)] = 1.0;
        const PhaseVector start = PhaseVector::ones(0, Codebook::continuous());
        const PsgResult res = psg_optimize(ch, alloc, start, cfg);
        CHECK(res.best.size() == 0);
        CHECK(res.f_best == doctest::Approx(res.f_trace.front()));
    }

    SUBCASE("tiny discrete instances: start <= refined <= exhaustive optimum") {
        SystemConfig cfg = SystemConfig::profile("tiny");
        for (int trial = 0; trial < 30; ++trial) {
            Rng rng = Rng::stream(1100, 0, static_cast<std::uint64_t>(trial));
            const ChannelRealization ch = build_realization(cfg, rng);
            const PhaseVector start = PhaseVector::random(cfg.R, cfg.codebook, rng);
            Allocation alloc = allocate_subbands(ch, start, cfg);
            uniform_power_over_owned(alloc, cfg);

            const PsgResult res = psg_optimize(ch, alloc, start, cfg);
            const PhaseVector oracle = exhaustive_phase_oracle(ch, alloc, cfg);

            const double r_start = min_weighted_sumrate(ch, alloc, start, cfg);
            const double r_best = min_weighted_sumrate(ch, alloc, res.best, cfg);
            const double r_oracle = min_weighted_sumrate(ch, alloc, oracle, cfg);
            CHECK(r_best >= r_start - 1e-12);
            CHECK(r_best <= r_oracle + 1e-12);

            // seeding with the optimum can never end below it
            const PsgResult seeded = psg_optimize(ch, alloc, oracle, cfg);
            CHECK(min_weighted_sumrate(ch, alloc, seeded.best, cfg) >= r_oracle - 1e-12);
        }
    }

    SUBCASE("tracked best is the minimum of the trace") {
        SystemConfig cfg = SystemConfig::profile("paper");
        cfg.R = 8;
        cfg.T_max = 30;
        cfg.codebook = Codebook::discrete(2);
        Rng rng(31);
        const ChannelRealization ch = build_realization(cfg, rng);
        const PhaseVector start = PhaseVector::random(cfg.R, cfg.codebook, rng);
        Allocation alloc = allocate_subbands(ch, start, cfg);
        uniform_power_over_owned(alloc, cfg);
        const PsgResult res = psg_optimize(ch, alloc, start, cfg);
        CHECK(res.f_trace.size() == static_cast<std::size_t>(cfg.T_max) + 1);
        CHECK(res.f_best ==
              doctest::Approx(*std::min_element(res.f_trace.begin(), res.f_trace.end())));
    }
}

TEST_CASE("exhaustive oracle: tiny enumerations and the soundness chain") {
    SystemConfig cfg = SystemConfig::profile("tiny");

    SUBCASE("R = 1: both candidates evaluated") {
        cfg.R = 1;
        cfg.L_kk = 2;
        Rng rng(41);
        const ChannelRealization ch = build_realization(cfg, rng);
        Allocation alloc = allocate_subbands(ch, PhaseVector::ones(1, cfg.codebook), cfg);
        uniform_power_over_owned(alloc, cfg);
        const PhaseVector best = exhaustive_phase_oracle(ch, alloc, cfg);
        double manual = -1.0;
        for (int c = 0; c < 2; ++c) {
            const PhaseVector cand = PhaseVector::from_codes({c}, cfg.codebook);
            manual = std::max(manual, min_weighted_sumrate(ch, alloc, cand, cfg));
        }
        CHECK(min_weighted_sumrate(ch, alloc, best, cfg) == doctest::Approx(manual));
    }

    SUBCASE("R = 2: matches manual enumeration of all four vectors") {
        Rng rng(43);
        const ChannelRealization ch = build_realization(cfg, rng);
        Allocation alloc = allocate_subbands(ch, PhaseVector::ones(2, cfg.codebook), cfg);
        uniform_power_over_owned(alloc, cfg);
        const PhaseVector best = exhaustive_phase_oracle(ch, alloc, cfg);
        double manual = -1.0;
        for (int c = 0; c < 4; ++c) {
            const PhaseVector cand = PhaseVector::from_codes({c & 1, (c >> 1) & 1}, cfg.codebook);
            manual = std::max(manual, min_weighted_sumrate(ch, alloc, cand, cfg));
        }
        CHECK(min_weighted_sumrate(ch, alloc, best, cfg) == doctest::Approx(manual));

        // soundness: oracle >= psg >= random
        Rng rng2(44);
        const PhaseVector rand_psi = PhaseVector::random(2, cfg.codebook, rng2);
        const PsgResult psg = psg_optimize(ch, alloc, rand_psi, cfg);
        CHECK(min_weighted_sumrate(ch, alloc, best, cfg) >=
              min_weighted_sumrate(ch, alloc, psg.best, cfg) - 1e-12);
        CHECK(min_weighted_sumrate(ch, alloc, psg.best, cfg) >=
              min_weighted_sumrate(ch, alloc, rand_psi, cfg) - 1e-12);
    }

    SUBCASE("the enumeration cap is enforced") {
        SystemConfig big = SystemConfig::profile("paper");
        big.R = 45;
        big.codebook = Codebook::discrete(2);
        Rng rng(47);
        big.L_kk = 8;
        const ChannelRealization ch = build_realization(big, rng);
        Allocation alloc = allocate_subbands(ch, PhaseVector::ones(big.R, big.codebook), big);
        uniform_power_over_owned(alloc, big);
        CHECK_THROWS_AS(exhaustive_phase_oracle(ch, alloc, big), ConfigError);
    }
}
