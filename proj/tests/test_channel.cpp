#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "risofdm/channel.hpp"
#include "support.hpp"

using namespace risofdm;
namespace ts = risofdm::testsupport;

TEST_CASE("geometry: degenerate clusters give the textbook distances") {
    SystemConfig cfg = SystemConfig::profile("paper");
    cfg.cluster_radius = 0.0;
    Rng rng(7);
    const Geometry g = sample_geometry(cfg, rng);
    for (int k = 0; k < cfg.K; ++k) {
        CHECK(g.d_kk[k] == doctest::Approx(70.0).epsilon(1e-14));
        CHECK(g.d_node_ris[k][0] == doctest::Approx(std::sqrt(1250.0)).epsilon(1e-14));
        CHECK(g.d_node_ris[k][1] == doctest::Approx(std::sqrt(1250.0)).epsilon(1e-14));
    }
}

TEST_CASE("geometry: samples stay inside their spheres and repeat under a seed") {
    const SystemConfig cfg = SystemConfig::profile("paper");
    Rng a = Rng::stream(42, 1), b = Rng::stream(42, 1);
    const Geometry g1 = sample_geometry(cfg, a);
    const Geometry g2 = sample_geometry(cfg, b);
    for (int k = 0; k < cfg.K; ++k) {
        for (int n = 0; n < 2; ++n) {
            CHECK(distance(g1.node_pos[k][n], cfg.cluster_centers[n]) <= cfg.cluster_radius);
            for (int d = 0; d < 3; ++d) CHECK(g1.node_pos[k][n][d] == g2.node_pos[k][n][d]);
        }
    }
}

TEST_CASE("path loss follows the reference power law") {
    const double rho0 = 1e-3;
    CHECK(path_loss(1.0, 3.5, rho0, 1.0) == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(path_loss(10.0, 2.0, rho0, 1.0) == doctest::Approx(1e-5).epsilon(1e-14));
    // frozen from an independent exp/log evaluation
    CHECK(path_loss(70.0, 3.5, rho0, 1.0) ==
          doctest::Approx(3.4846315140944357e-10).epsilon(1e-12));
}

TEST_CASE("tap profile is normalized and single-tap links carry the full loss") {
    for (int L : {1, 2, 4, 8, 16}) {
        for (double a : {0.1, 0.5, 0.9}) {
            const double head = (1.0 - a) / (1.0 - std::pow(a, L));
            double sum = 0.0;
            for (int l = 0; l < L; ++l) sum += head * std::pow(a, l);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }

    Rng rng(11);
    double acc = 0.0;
    const int n = 20000;
    for (int t = 0; t < n; ++t) {
        const TapVector tv = sample_taps(LinkKind::Direct, 1, 0.5, 0.25, rng);
        REQUIRE(tv.taps.size() == 1);
        acc += abs2(tv.taps[0]);
    }
    CHECK(acc / n == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("per-tap variances match the exponential profile (Monte Carlo)") {
    const int L = 8, n = 100000;
    const double alpha = 0.5, rho = 1.0;
    Rng rng(123);
    std::vector<double> acc(L, 0.0);
    for (int t = 0; t < n; ++t) {
        const TapVector tv = sample_taps(LinkKind::Direct, L, alpha, rho, rng);
        for (int l = 0; l < L; ++l) acc[l] += abs2(tv.taps[l]);
    }
    const double head = rho * (1.0 - alpha) / (1.0 - std::pow(alpha, L));
    for (int l = 0; l < L; ++l) {
        const double expected = head * std::pow(alpha, l);
        CHECK(acc[l] / n == doctest::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("cascade: identity and hand convolutions") {
    const cvec id = cascade_reflected({cplx{1, 0}}, {cplx{1, 0}}, 4);
    REQUIRE(id.size() == 4);
    CHECK(id[0] == cplx{1, 0});
    for (int l = 1; l < 4; ++l) CHECK(id[l] == cplx{0, 0});

    const cvec hand = cascade_reflected({cplx{1, 0}, cplx{1, 0}}, {cplx{1, 0}, cplx{-1, 0}}, 8);
    CHECK(hand[0] == cplx{1, 0});
    CHECK(std::abs(hand[1]) == 0.0);
    CHECK(hand[2] == cplx{-1, 0});
    for (int l = 3; l < 8; ++l) CHECK(hand[l] == cplx{0, 0});
}

TEST_CASE("cascade matches the gather-form convolution oracle") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        cvec a(4), b(4);
        for (auto& z : a) z = rng.cnormal();
        for (auto& z : b) z = rng.cnormal();
        const cvec got = cascade_reflected(a, b, 12);
        const cvec ref = ts::conv_gather(a, b);
        for (std::size_t l = 0; l < ref.size(); ++l) CHECK(std::abs(got[l] - ref[l]) < 1e-12);
        for (std::size_t l = ref.size(); l < got.size(); ++l) CHECK(got[l] == cplx{0, 0});
    }
}

TEST_CASE("cascade rejects sequences longer than the band count") {
    CHECK_THROWS_AS(cascade_reflected(cvec(4, cplx{1, 0}), cvec(4, cplx{1, 0}), 6), ConfigError);
}

TEST_CASE("frequency response: impulse, shift, and DFT oracle") {
    cvec impulse(8, cplx{});
    impulse[0] = 1.0;
    for (const cplx& z : freq_response(impulse)) CHECK(std::abs(z - cplx{1, 0}) < 1e-12);

    cvec shifted(4, cplx{});
    shifted[1] = 1.0;
    const cvec sh = freq_response(shifted);
    for (int v = 0; v < 4; ++v)
        CHECK(std::abs(sh[v] - std::polar(1.0, -kTwoPi * v / 4.0)) < 1e-12);

    Rng rng(9);
    for (int V : {16, 12}) {  // power of two and not
        cvec x(static_cast<std::size_t>(V));
        for (auto& z : x) z = rng.cnormal();
        const cvec got = freq_response(x);
        const cvec ref = ts::naive_dft(x);
        for (int v = 0; v < V; ++v) CHECK(std::abs(got[v] - ref[v]) < 1e-10);
    }
}

TEST_CASE("realization: effective gain equals the DFT of the composite channel") {
    SystemConfig cfg = SystemConfig::profile("paper");
    cfg.R = 5;
    cfg.codebook = Codebook::discrete(3);
    for (int trial = 0; trial < 5; ++trial) {
        Rng rng = Rng::stream(1000, 0, static_cast<std::uint64_t>(trial));
        const ChannelRealization ch = build_realization(cfg, rng);
        const PhaseVector psi = PhaseVector::random(cfg.R, cfg.codebook, rng);
        for (int k = 0; k < cfg.K; ++k) {
            for (int i = 0; i < 2; ++i) {
                const cvec ref = ts::naive_dft(ts::composite_taps(ch, psi, k, i));
                for (int v = 0; v < cfg.V; ++v) {
                    const cplx got = effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), psi);
                    CHECK(std::abs(got - ref[static_cast<std::size_t>(v)]) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("realization: single-element cascade adds linearly, dropping psi leaves g") {
    SystemConfig cfg = SystemConfig::profile("paper");
    cfg.R = 1;
    Rng rng(77);
    const ChannelRealization ch = build_realization(cfg, rng);
    const PhaseVector one = PhaseVector::ones(1, Codebook::continuous());
    for (int k = 0; k < cfg.K; ++k) {
        for (int i = 0; i < 2; ++i) {
            cvec padded(static_cast<std::size_t>(cfg.V), cplx{});
            const auto& direct = ch.direct_taps(k, i);
            std::copy(direct.begin(), direct.end(), padded.begin());
            const cvec cascade =
                cascade_reflected(ch.ris_in_taps(k, i, 0), ch.ris_out_taps(k, i, 0), cfg.V);
            for (int v = 0; v < cfg.V; ++v) padded[static_cast<std::size_t>(v)] += cascade[v];
            const cvec ref = ts::naive_dft(padded);
            for (int v = 0; v < cfg.V; ++v) {
                CHECK(std::abs(effective_gain(ch.g_at(k, v, i), ch.h_at(k, v, i), one) -
                               ref[static_cast<std::size_t>(v)]) < 1e-10);
            }
        }
    }

    // zero reflection coefficients: the h term vanishes
    const PhaseVector zero = PhaseVector::continuous(cvec(1, cplx{}));
    for (int v = 0; v < cfg.V; ++v)
        CHECK(effective_gain(ch.g_at(0, v, 0), ch.h_at(0, v, 0), zero) == ch.g_at(0, v, 0));
}

TEST_CASE("realization: seeded determinism and independent directions") {
    const SystemConfig cfg = SystemConfig::profile("paper");
    Rng a = Rng::stream(99, 3), b = Rng::stream(99, 3);
    const ChannelRealization c1 = build_realization(cfg, a);
    const ChannelRealization c2 = build_realization(cfg, b);
    CHECK(c1.g == c2.g);
    CHECK(c1.h == c2.h);

    // the two directions draw independent taps (no reciprocity)
    bool any_differ = false;
    for (std::size_t l = 0; l < c1.direct_taps(0, 0).size(); ++l)
        any_differ = any_differ || c1.direct_taps(0, 0)[l] != c1.direct_taps(0, 1)[l];
    CHECK(any_differ);
}

TEST_CASE("realization: channel stream prefix is shared across R") {
    SystemConfig small = SystemConfig::profile("paper");
    small.R = 3;
    SystemConfig large = small;
    large.R = 9;
    Rng ra = Rng::stream(5, 0), rb = Rng::stream(5, 0);
    const ChannelRealization cs = build_realization(small, ra);
    const ChannelRealization cl = build_realization(large, rb);
    for (int k = 0; k < small.K; ++k) {
        for (int i = 0; i < 2; ++i) {
            CHECK(cs.direct_taps(k, i) == cl.direct_taps(k, i));
            for (int r = 0; r < small.R; ++r) {
                CHECK(cs.ris_in_taps(k, i, r) == cl.ris_in_taps(k, i, r));
                CHECK(cs.ris_out_taps(k, i, r) == cl.ris_out_taps(k, i, r));
            }
        }
    }
}
