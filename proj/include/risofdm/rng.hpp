#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "risofdm/common.hpp"

namespace risofdm {

/// Deterministic random stream. All draws go through explicit helpers so a
/// given seed reproduces the identical sequence on every run; substreams are
/// derived by mixing (seed, key...) with splitmix64 so per-trial and
/// per-scheme streams are independent of each other.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Substream for (seed, a, b): stable across runs and platforms.
    static Rng stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; draws exactly two u01 values.
    double normal();

    /// Circularly-symmetric complex normal CN(0,1): Re and Im are
    /// independent N(0, 1/2). Draws exactly two u01 values.
    cplx cnormal();

    /// Uniform index in [0, n).
    std::size_t index(std::size_t n);

    /// Uniform point inside the sphere of given center/radius
    /// (rejection sampling in the bounding cube).
    std::array<double, 3> in_sphere(const std::array<double, 3>& center, double radius);

  private:
    std::mt19937_64 gen_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace risofdm
