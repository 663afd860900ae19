#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "risofdm/harness.hpp"
#include "risofdm/verify.hpp"

namespace {

using namespace risofdm;

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

struct ProfileDefaults {
    std::vector<std::string> schemes;
    std::vector<int> r_values;
    std::vector<std::string> b_values;
};

ProfileDefaults profile_defaults(const std::string& name) {
    if (name == "paper-fig2a")
        return {{"optPSG", "uniPowPSG", "initialPSs", "randInitialPSG", "randPSs", "noRIS"},
                {15, 25, 35, 45},
                {"inf"}};
    if (name == "paper-fig2b")
        return {{"optPSG", "noRIS"}, {45}, {"1", "2", "3", "4", "5", "inf"}};
    if (name == "tiny") return {{"optPSG", "oracleTiny"}, {2}, {"1"}};
    return {{"optPSG"}, {45}, {"inf"}};
}

int run_simulate(const std::string& profile, const std::string& config_path,
                 std::string schemes_arg, std::string r_arg, std::string b_arg, int trials,
                 std::uint64_t seed, bool seed_given, const std::string& out_path, bool timing,
                 int threads, bool quiet) {
    SystemConfig cfg = SystemConfig::profile(profile);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ConfigError("cannot open config file: " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg.apply_json(ss.str());
    }
    if (seed_given) cfg.seed = seed;

    const ProfileDefaults defs = profile_defaults(profile);

    std::vector<Scheme> schemes;
    for (const auto& name : schemes_arg.empty() ? defs.schemes : split_csv(schemes_arg))
        schemes.push_back(parse_scheme(name));
    if (schemes.empty()) throw ConfigError("no schemes selected");

    std::vector<int> r_values;
    if (r_arg.empty()) {
        r_values = defs.r_values;
    } else {
        for (const auto& tok : split_csv(r_arg)) r_values.push_back(std::stoi(tok));
    }
    std::vector<std::string> b_tokens = b_arg.empty() ? defs.b_values : split_csv(b_arg);

    std::vector<SweepPoint> sweep;
    for (int r : r_values) {
        for (const auto& tok : b_tokens) {
            SweepPoint pt;
            pt.R = r;
            pt.codebook = (tok == "inf" || tok == "continuous")
                              ? Codebook::continuous()
                              : Codebook::discrete(std::stoi(tok));
            sweep.push_back(pt);
        }
    }
    if (sweep.empty()) throw ConfigError("empty sweep");
    if (trials < 1) throw ConfigError("trials must be >= 1");

    const auto results = monte_carlo(cfg, schemes, sweep, trials, threads);

    if (out_path.empty() || out_path == "-") {
        write_csv(std::cout, results, timing);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file: " + out_path);
        write_csv(out, results, timing);
    }

    if (!quiet) {
        std::fprintf(stderr, "%-16s %4s %5s %8s %12s %12s\n", "scheme", "R", "B", "trials",
                     "mean", "stderr");
        for (const auto& row : summarize(results))
            std::fprintf(stderr, "%-16s %4d %5s %8d %12.6f %12.6f\n",
                         scheme_name(row.scheme).c_str(), row.R, row.codebook.label().c_str(),
                         row.trials, row.mean_min_sumrate, row.stderr_min_sumrate);
    }
    return 0;
}

int run_verify(std::uint64_t seed) {
    const auto checks = run_verification(seed);
    bool all_ok = true;
    for (const auto& c : checks) {
        std::printf("[%s] %-32s %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.detail.c_str());
        all_ok = all_ok && c.pass;
    }
    std::printf("%zu checks, %s\n", checks.size(), all_ok ? "all passed" : "FAILURES present");
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-assisted two-way OFDM max-min rate simulator"};
    app.require_subcommand(1);

    auto* sim = app.add_subcommand("simulate", "run a Monte-Carlo sweep and write per-trial CSV");
    std::string profile = "paper";
    std::string config_path, schemes_arg, r_arg, b_arg, out_path;
    int trials = 1;
    std::uint64_t seed = 1;
    bool timing = false, quiet = false;
    int threads = 0;
    sim->add_option("--profile", profile, "built-in profile: paper, paper-fig2a, paper-fig2b, tiny");
    sim->add_option("--config", config_path, "JSON file overriding profile fields");
    sim->add_option("--schemes", schemes_arg, "comma list, e.g. optPSG,initialPSs,noRIS");
    sim->add_option("--R", r_arg, "comma list of element counts, e.g. 15,25,35,45");
    sim->add_option("--B", b_arg, "comma list of codebook bits; 'inf' for continuous");
    sim->add_option("--trials", trials, "Monte-Carlo trials per sweep point");
    auto* seed_opt = sim->add_option("--seed", seed, "master RNG seed");
    sim->add_option("--out", out_path, "CSV path ('-' for stdout)");
    sim->add_flag("--timing", timing, "write measured wall_ms (output no longer reproducible)");
    sim->add_option("--threads", threads, "worker threads (0 = hardware)");
    sim->add_flag("--quiet", quiet, "suppress the summary table on stderr");

    auto* ver = app.add_subcommand("verify", "run the invariant and oracle self-checks");
    std::uint64_t verify_seed = 20240901;
    ver->add_option("--seed", verify_seed, "seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return run_simulate(profile, config_path, schemes_arg, r_arg, b_arg, trials, seed,
                                seed_opt->count() > 0, out_path, timing, threads, quiet);
        if (ver->parsed()) return run_verify(verify_seed);
    } catch (const risofdm::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
