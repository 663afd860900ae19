#include "risofdm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "risofdm/stats.hpp"

namespace risofdm {

namespace {

struct SchemeTraits {
    enum class Phase { Psg, Oracle, Frozen } phase;
    enum class Power { Waterfill, Uniform } power;
    enum class Init { GainMax, Random, Ones } init;
    bool use_ris;
};

SchemeTraits traits(Scheme s) {
    using P = SchemeTraits::Phase;
    using W = SchemeTraits::Power;
    using I = SchemeTraits::Init;
    switch (s) {
        case Scheme::OptPsg: return {P::Psg, W::Waterfill, I::GainMax, true};
        case Scheme::UniPowPsg: return {P::Psg, W::Uniform, I::GainMax, true};
        case Scheme::InitialPss: return {P::Frozen, W::Waterfill, I::GainMax, true};
        case Scheme::RandInitialPsg: return {P::Psg, W::Waterfill, I::Random, true};
        case Scheme::RandPss: return {P::Frozen, W::Waterfill, I::Random, true};
        case Scheme::NoRis: return {P::Frozen, W::Waterfill, I::Ones, false};
        case Scheme::OracleTiny: return {P::Oracle, W::Waterfill, I::GainMax, true};
    }
    throw ConfigError("unhandled scheme");
}

}  // namespace

Scheme parse_scheme(const std::string& name) {
    if (name == "optPSG") return Scheme::OptPsg;
    if (name == "uniPowPSG") return Scheme::UniPowPsg;
    if (name == "initialPSs") return Scheme::InitialPss;
    if (name == "randInitialPSG") return Scheme::RandInitialPsg;
    if (name == "randPSs") return Scheme::RandPss;
    if (name == "noRIS") return Scheme::NoRis;
    if (name == "oracleTiny") return Scheme::OracleTiny;
    throw ConfigError("unknown scheme: " + name);
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::OptPsg: return "optPSG";
        case Scheme::UniPowPsg: return "uniPowPSG";
        case Scheme::InitialPss: return "initialPSs";
        case Scheme::RandInitialPsg: return "randInitialPSG";
        case Scheme::RandPss: return "randPSs";
        case Scheme::NoRis: return "noRIS";
        case Scheme::OracleTiny: return "oracleTiny";
    }
    return "?";
}

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> all{Scheme::OptPsg,         Scheme::UniPowPsg,
                                         Scheme::InitialPss,     Scheme::RandInitialPsg,
                                         Scheme::RandPss,        Scheme::NoRis,
                                         Scheme::OracleTiny};
    return all;
}

void check_allocation_constraints(const Allocation& alloc, const SystemConfig& cfg) {
    for (int v = 0; v < alloc.V; ++v) {
        int owners = 0;
        for (int k = 0; k < alloc.K; ++k)
            for (int i = 0; i < 2; ++i) owners += alloc.owned(k, v, i) ? 1 : 0;
        if (owners != 1) throw SolverError("allocation: sub-band not owned exactly once");
    }
    for (int k = 0; k < alloc.K; ++k) {
        for (int i = 0; i < 2; ++i) {
            double total = 0.0;
            for (int v = 0; v < alloc.V; ++v) {
                const double p = alloc.p[alloc.idx(k, v, i)];
                if (p < 0.0) throw SolverError("allocation: negative power");
                if (!alloc.owned(k, v, i) && p != 0.0)
                    throw SolverError("allocation: power on unowned band");
                total += alloc.owned(k, v, i) ? p : 0.0;
            }
            if (total > cfg.power(k, i) + 1e-9)
                throw SolverError("allocation: power budget exceeded");
        }
    }
}

TrialResult run_scheme_on(const SystemConfig& cfg, Scheme scheme, const ChannelRealization& ch,
                          Rng& scheme_rng) {
    const auto t0 = std::chrono::steady_clock::now();
    const SchemeTraits tr = traits(scheme);

    const ChannelRealization* eff = &ch;
    ChannelRealization direct_only;
    if (!tr.use_ris) {
        direct_only = ch.without_ris();
        eff = &direct_only;
    }

    PhaseVector psi;
    switch (tr.init) {
        case SchemeTraits::Init::GainMax: psi = init_phase(*eff, cfg); break;
        case SchemeTraits::Init::Random: psi = PhaseVector::random(ch.R, cfg.codebook, scheme_rng); break;
        case SchemeTraits::Init::Ones: psi = PhaseVector::ones(ch.R, cfg.codebook); break;
    }

    Allocation alloc = allocate_subbands(*eff, psi, cfg);
    uniform_power_over_owned(alloc, cfg);
    std::vector<std::uint8_t> active = alloc.eta;

    TrialResult res;
    res.scheme = scheme;
    res.R = ch.R;
    res.codebook = cfg.codebook;

    double obj = min_weighted_sumrate(*eff, alloc, psi, cfg);
    res.objective_trace.push_back(obj);
    res.converged = false;

    for (int iter = 1; iter <= cfg.outer_max_iters; ++iter) {
        switch (tr.phase) {
            case SchemeTraits::Phase::Psg: psi = psg_optimize(*eff, alloc, psi, cfg).best; break;
            case SchemeTraits::Phase::Oracle: psi = exhaustive_phase_oracle(*eff, alloc, cfg); break;
            case SchemeTraits::Phase::Frozen: break;
        }
        if (tr.power == SchemeTraits::Power::Waterfill) {
            WaterfillResult wf = iterative_waterfill(*eff, active, psi, cfg);
            alloc.p = wf.p;
            active = std::move(wf.active);
        }
        const double new_obj = min_weighted_sumrate(*eff, alloc, psi, cfg);
        res.outer_iters = iter;
        res.objective_trace.push_back(new_obj);
        const double scale = std::max({std::abs(new_obj), std::abs(obj), 1e-12});
        const bool settled = std::abs(new_obj - obj) <= cfg.outer_tol * scale;
        obj = new_obj;
        if (settled) {
            res.converged = true;
            break;
        }
    }

    check_allocation_constraints(alloc, cfg);

    const auto sums = direction_sumrates(*eff, alloc, psi, cfg);
    res.dir1_sumrate = sums[0];
    res.dir2_sumrate = sums[1];
    res.min_sumrate = std::min(sums[0], sums[1]);
    res.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
}

TrialResult run_scheme(const SystemConfig& cfg, Scheme scheme, Rng& rng) {
    const ChannelRealization ch = build_realization(cfg, rng);
    TrialResult res = run_scheme_on(cfg, scheme, ch, rng);
    res.seed = cfg.seed;
    return res;
}

std::vector<TrialResult> monte_carlo(const SystemConfig& base, const std::vector<Scheme>& schemes,
                                     const std::vector<SweepPoint>& sweep, int trials,
                                     int threads) {
    if (trials < 0) throw ConfigError("trials must be >= 0");
    const std::size_t n_points = sweep.size();
    const std::size_t n_schemes = schemes.size();
    std::vector<TrialResult> results(n_points * static_cast<std::size_t>(trials) * n_schemes);
    if (results.empty()) return results;

    std::vector<SystemConfig> cfgs;
    cfgs.reserve(n_points);
    for (const auto& pt : sweep) {
        SystemConfig c = base;
        c.R = pt.R;
        c.codebook = pt.codebook;
        c.validate();
        if (std::find(schemes.begin(), schemes.end(), Scheme::OracleTiny) != schemes.end() &&
            c.codebook.is_discrete()) {
            // fail fast instead of mid-sweep
            if (std::pow(static_cast<double>(c.codebook.size()), c.R) > (1u << 16))
                throw ConfigError("oracleTiny: 2^(B*R) exceeds the enumeration cap");
        }
        cfgs.push_back(std::move(c));
    }

    const std::size_t n_tasks = n_points * static_cast<std::size_t>(trials);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto worker = [&]() {
        while (!failed.load()) {
            const std::size_t task = next.fetch_add(1);
            if (task >= n_tasks) return;
            const std::size_t pi = task / static_cast<std::size_t>(trials);
            const int t = static_cast<int>(task % static_cast<std::size_t>(trials));
            const SystemConfig& cfg = cfgs[pi];
            try {
                // One channel stream per trial index: common random numbers
                // across schemes, R values, and codebooks.
                Rng ch_rng = Rng::stream(base.seed, 0x6368u /*"ch"*/, static_cast<std::uint64_t>(t));
                const ChannelRealization ch = build_realization(cfg, ch_rng);
                for (std::size_t si = 0; si < n_schemes; ++si) {
                    Rng s_rng = Rng::stream(base.seed,
                                            0x5C00u + static_cast<std::uint64_t>(schemes[si]),
                                            static_cast<std::uint64_t>(t));
                    TrialResult r = run_scheme_on(cfg, schemes[si], ch, s_rng);
                    r.seed = base.seed;
                    r.trial = t;
                    results[(pi * static_cast<std::size_t>(trials) + t) * n_schemes + si] =
                        std::move(r);
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lg(error_mutex);
                error_message = e.what();
                failed.store(true);
            }
        }
    };

    std::size_t n_threads = threads > 0 ? static_cast<std::size_t>(threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min(n_threads, n_tasks);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t j = 0; j < n_threads; ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw SolverError("monte_carlo trial failed: " + error_message);
    return results;
}

namespace {

void append_g12(std::string& out, double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    out += buf;
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<TrialResult>& results, bool with_timing) {
    std::string out;
    out += "scheme,R,B,trial,seed,min_sumrate_bpshz,dir1_sumrate,dir2_sumrate,outer_iters,wall_ms\n";
    for (const auto& r : results) {
        out += scheme_name(r.scheme);
        out += ',';
        out += std::to_string(r.R);
        out += ',';
        out += r.codebook.label();
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        append_g12(out, r.min_sumrate);
        out += ',';
        append_g12(out, r.dir1_sumrate);
        out += ',';
        append_g12(out, r.dir2_sumrate);
        out += ',';
        out += std::to_string(r.outer_iters);
        out += ',';
        append_g12(out, with_timing ? r.wall_ms : 0.0);
        out += '\n';
    }
    os << out;
}

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results) {
    std::vector<SummaryRow> rows;
    auto key_of = [](const TrialResult& r) {
        return std::tuple<int, int, int, int>(static_cast<int>(r.scheme), r.R,
                                              static_cast<int>(r.codebook.kind), r.codebook.bits);
    };
    std::vector<std::tuple<int, int, int, int>> keys;
    for (const auto& r : results) {
        const auto key = key_of(r);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    for (const auto& key : keys) {
        std::vector<double> vals;
        SummaryRow row;
        for (const auto& r : results) {
            if (key_of(r) != key) continue;
            vals.push_back(r.min_sumrate);
            row.scheme = r.scheme;
            row.R = r.R;
            row.codebook = r.codebook;
        }
        row.trials = static_cast<int>(vals.size());
        row.mean_min_sumrate = mean(vals);
        row.stderr_min_sumrate = standard_error(vals);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace risofdm
