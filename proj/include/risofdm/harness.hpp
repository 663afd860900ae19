#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "risofdm/phase_design.hpp"

namespace risofdm {

/// The scheme variants: every entry is the same outer alternating loop with
/// a different choice of phase initialization, phase update, and power rule.
enum class Scheme {
    OptPsg,         // init from the gain maximizer, PSG phases, waterfilled power
    UniPowPsg,      // PSG phases, power fixed uniform over owned bands
    InitialPss,     // phases frozen at the initializer, waterfilled power
    RandInitialPsg, // PSG warm-started from a random codebook vector
    RandPss,        // random phases, frozen
    NoRis,          // reflected path removed entirely
    OracleTiny,     // exhaustive discrete phase search (tiny scale only)
};

Scheme parse_scheme(const std::string& name);  // throws ConfigError on unknown names
std::string scheme_name(Scheme s);
const std::vector<Scheme>& all_schemes();

struct TrialResult {
    Scheme scheme = Scheme::OptPsg;
    std::uint64_t seed = 0;  // master seed of the invocation
    int trial = 0;
    int R = 0;
    Codebook codebook;
    double min_sumrate = 0.0;  // bps/Hz, min of the two directions
    double dir1_sumrate = 0.0;
    double dir2_sumrate = 0.0;
    int outer_iters = 0;
    double wall_ms = 0.0;
    bool converged = true;
    std::vector<double> objective_trace;  // start value plus one per outer iteration
};

/// Runs one scheme on an already-drawn channel (the Monte-Carlo harness
/// shares one realization across schemes within a trial). `scheme_rng`
/// feeds only scheme-private randomness (random phase draws).
TrialResult run_scheme_on(const SystemConfig& cfg, Scheme scheme, const ChannelRealization& ch,
                          Rng& scheme_rng);

/// Draws a fresh realization from `rng` and runs the scheme on it.
TrialResult run_scheme(const SystemConfig& cfg, Scheme scheme, Rng& rng);

struct SweepPoint {
    int R = 0;
    Codebook codebook;
};

/// Paired Monte-Carlo sweep: for each trial one channel stream is derived
/// from (seed, trial) alone, so schemes, R values, and codebooks all see
/// common random numbers. Results are ordered (point, trial, scheme)
/// regardless of thread count.
std::vector<TrialResult> monte_carlo(const SystemConfig& base, const std::vector<Scheme>& schemes,
                                     const std::vector<SweepPoint>& sweep, int trials,
                                     int threads = 0);

/// CSV with the fixed column set; floats carry 12 significant digits.
/// wall_ms is written as 0 unless `with_timing` is set, keeping the default
/// output byte-reproducible.
void write_csv(std::ostream& os, const std::vector<TrialResult>& results,
               bool with_timing = false);

struct SummaryRow {
    Scheme scheme;
    int R = 0;
    Codebook codebook;
    int trials = 0;
    double mean_min_sumrate = 0.0;
    double stderr_min_sumrate = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<TrialResult>& results);

/// Constraint audit of a finished trial: ownership partitions the bands,
/// powers are nonnegative, within budget, and zero off the owned set, and
/// the reported minimum matches the per-direction sums.
void check_allocation_constraints(const Allocation& alloc, const SystemConfig& cfg);

}  // namespace risofdm
