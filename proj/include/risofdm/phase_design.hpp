#pragma once

#include "risofdm/linalg.hpp"
#include "risofdm/rate.hpp"

namespace risofdm {

/// Per-direction stacking of all (pair, sub-band) channels: g_i holds the
/// direct gains, H_i has one row per (k, v) equal to h^H, so that
/// ||g_i + H_i psi||^2 is the direction's total effective channel gain.
struct StackedChannels {
    cvec g1, g2;  // [K*V]
    CMat H1, H2;  // [K*V x R]
};

StackedChannels stack_channels(const ChannelRealization& ch);

/// (R+1)x(R+1) Hermitian lift [[H^H H, H^H g], [g^H H, 0]] whose quadratic
/// form at [psi; 1] is ||g + H psi||^2 - ||g||^2.
CMat lift_gain_matrix(const CMat& H, const cvec& g);

struct InitResult {
    PhaseVector psi;
    double lambda1 = 0.0;  // multiplier picked by the line search
    double score = 0.0;    // min_i u^H Htilde_i u at the winning grid point
};

/// Phase initialization maximizing the minimum bidirectional effective
/// channel gain: line search over the multiplier blend of the two lifted
/// gain matrices, principal eigenvector at each grid point (power iteration
/// warm-started along the grid), then elementwise codebook projection of the
/// de-homogenized top block.
InitResult init_phase_stacked(const StackedChannels& sc, const Codebook& cb, int grid_points);

PhaseVector init_phase(const ChannelRealization& ch, const SystemConfig& cfg);

/// MMSE receive filters at psi for every owned sub-band (unowned entries are
/// left untouched).
void update_receive_filters(const ChannelRealization& ch, const Allocation& alloc,
                            const PhaseVector& psi, SurrogateState& state,
                            const SystemConfig& cfg);

/// Per-(k,v) MSE at the state's filters; entries of unowned bands are 1.
std::vector<double> compute_mses(const ChannelRealization& ch, const Allocation& alloc,
                                 const PhaseVector& psi, const SurrogateState& state,
                                 const SystemConfig& cfg);

/// w = 1/eps on owned bands.
void update_weights(const std::vector<double>& eps, const Allocation& alloc,
                    SurrogateState& state);

/// Filter update, weight update, and surrogate evaluation in one pass;
/// stores f1/f2 in the state and returns them.
SurrogateValues refresh_surrogate(const ChannelRealization& ch, const Allocation& alloc,
                                  const PhaseVector& psi, SurrogateState& state,
                                  const SystemConfig& cfg);

/// Gradient of f_i with respect to conj(psi) at fixed filters and weights.
cvec gradient_fi(const ChannelRealization& ch, const Allocation& alloc, const PhaseVector& psi,
                 const SurrogateState& state, const SystemConfig& cfg, int i);

/// f_i at fixed filters and weights for an arbitrary (not necessarily
/// unit-modulus) psi; the probe used by finite-difference checks.
double surrogate_fi_at(const ChannelRealization& ch, const Allocation& alloc, const cvec& psi_raw,
                       const SurrogateState& state, const SystemConfig& cfg, int i);

/// The subgradient choice: gradient of the strictly larger f_i, or the
/// tau-blend of both when |f1 - f2| <= 1e-12.
cvec subgradient(const ChannelRealization& ch, const Allocation& alloc, const PhaseVector& psi,
                 const SurrogateState& state, const SystemConfig& cfg);

/// Diminishing step size of iteration t (t >= 1).
inline double psg_step_size(int t) { return 1.0 / static_cast<double>(t); }

struct PsgResult {
    PhaseVector best;
    double f_best = 0.0;          // tracked surrogate at `best`
    std::vector<double> f_trace;  // f at iterates 0..T_max
};

/// Projected-subgradient refinement of psi: T_max iterations of filter
/// update, weight update, projected step; the surrogate is re-evaluated at
/// refreshed filters after every move (making it the negated weighted
/// sum-rate) and the best iterate, including the warm start, is returned.
PsgResult psg_optimize(const ChannelRealization& ch, const Allocation& alloc,
                       const PhaseVector& psi_start, const SystemConfig& cfg);

/// True discrete optimum of the max-min rate over the whole codebook for
/// fixed allocation and powers. Refuses runs beyond `cap` candidates.
PhaseVector exhaustive_phase_oracle(const ChannelRealization& ch, const Allocation& alloc,
                                    const SystemConfig& cfg, std::size_t cap = (1u << 16));

}  // namespace risofdm
