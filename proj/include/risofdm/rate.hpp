#pragma once

#include <array>
#include <span>

#include "risofdm/allocation.hpp"

namespace risofdm {

/// g + h^H psi: direct link plus reflected cascade on one sub-band.
cplx effective_gain(cplx g, std::span<const cplx> h, const PhaseVector& psi);

struct RateResult {
    double snr = 0.0;   // p |hbar|^2 / sigma^2
    double rate = 0.0;  // (eta/V) log2(1 + snr), bps/Hz
};

RateResult rate(double p, cplx hbar, double sigma2, bool eta, int V);

/// kappa-weighted sum-rate of each direction.
std::array<double, 2> direction_sumrates(const ChannelRealization& ch, const Allocation& alloc,
                                         const PhaseVector& psi, const SystemConfig& cfg);

/// The max-min objective: the smaller of the two directions' weighted sums.
double min_weighted_sumrate(const ChannelRealization& ch, const Allocation& alloc,
                            const PhaseVector& psi, const SystemConfig& cfg);

/// Receive filters and MSE weights for each owned sub-band, plus the two
/// surrogate objective values they induce.
struct SurrogateState {
    int K = 0, V = 0;
    cvec u;                 // [k][v], filter at the receiving node
    std::vector<double> w;  // [k][v]
    double f1 = 0.0, f2 = 0.0;

    SurrogateState() = default;
    SurrogateState(int K_, int V_)
        : K(K_),
          V(V_),
          u(static_cast<std::size_t>(K_) * V_, cplx{}),
          w(static_cast<std::size_t>(K_) * V_, 1.0) {}

    std::size_t idx(int k, int v) const { return static_cast<std::size_t>(k) * V + v; }
};

/// Estimation mean-squared error of one sub-band, in the expanded
/// pi/Pi quadratic form.
double mse(double p, cplx g, std::span<const cplx> h, const PhaseVector& psi, cplx u,
           double sigma2);

/// Same quantity as |1 - sqrt(p) u hbar|^2 + sigma^2 |u|^2; numerically
/// better conditioned near the MMSE point, and an algebraic cross-check of
/// the expanded form.
double mse_compact(double p, cplx hbar, cplx u, double sigma2);

struct SurrogateValues {
    double f1 = 0.0, f2 = 0.0;
    double f = 0.0;  // max of the two
};

/// f_i = sum_k sum_v kappa_k (eta/V) (w eps - log2 w - 1), evaluated at the
/// state's filters and weights.
SurrogateValues surrogate_objective(const ChannelRealization& ch, const Allocation& alloc,
                                    const PhaseVector& psi, const SurrogateState& state,
                                    const SystemConfig& cfg);

}  // namespace risofdm
