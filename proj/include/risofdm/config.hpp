#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "risofdm/common.hpp"

namespace risofdm {

/// Reflection-coefficient alphabet of the surface: either the 2^bits
/// uniformly spaced unit-circle points, or the whole unit circle.
struct Codebook {
    enum class Kind { Discrete, Continuous };

    Kind kind = Kind::Continuous;
    int bits = 0;  // valid when Discrete

    static Codebook discrete(int bits) { return {Kind::Discrete, bits}; }
    static Codebook continuous() { return {Kind::Continuous, 0}; }

    bool is_discrete() const { return kind == Kind::Discrete; }
    int size() const { return 1 << bits; }  // Discrete only
    std::string label() const;              // "3" or "inf"
};

/// Every scenario constant in one place. Powers and noise are accepted in
/// dBm and stored in watts; path-loss reference in dB, stored linear. All
/// internal math is in linear units.
struct SystemConfig {
    int K = 3;   // node pairs
    int V = 16;  // sub-bands
    int R = 45;  // reflecting elements
    Codebook codebook = Codebook::continuous();

    std::vector<std::array<double, 2>> power_w;   // [K][direction], watts
    std::vector<std::vector<double>> noise_w;     // [K][V], watts
    std::vector<double> kappa;                    // [K] sum-rate weights

    double rho0 = 1e-3;  // reference path loss (linear) at d0
    double d0 = 1.0;     // reference distance, m
    double beta_kk = 3.5, beta_kr = 2.2, beta_rk = 2.2;
    int L_kk = 8, L_kr = 4, L_rk = 4;
    double alpha = 0.5;  // power-delay decay

    std::array<double, 3> ris_position{0.0, 0.0, 10.0};
    std::array<std::array<double, 3>, 2> cluster_centers{{{-35.0, 0.0, 5.0}, {35.0, 0.0, 5.0}}};
    double cluster_radius = 5.0;

    double tau = 0.5;  // subgradient tie blend
    int T_max = 100;   // inner PSG iterations
    double outer_tol = 1e-4;
    int outer_max_iters = 20;
    int lambda_grid_points = 101;
    std::uint64_t seed = 1;

    double power(int k, int i) const { return power_w[k][i]; }
    double noise(int k, int v) const { return noise_w[k][v]; }

    /// Broadcast helpers used by profiles and config files.
    void set_uniform_power_dbm(double dbm);
    void set_uniform_noise_dbm(double dbm);
    void set_uniform_kappa(double kappa_value);

    /// Throws ConfigError on any violated invariant.
    void validate() const;

    /// Built-in named profiles: "paper", "paper-fig2a", "paper-fig2b", "tiny".
    static SystemConfig profile(const std::string& name);

    /// Applies key/value overrides from a JSON object (text form).
    void apply_json(const std::string& json_text);
    static SystemConfig from_json_file(const std::string& path);
};

}  // namespace risofdm
