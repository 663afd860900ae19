#pragma once

#include <vector>

#include "risofdm/config.hpp"
#include "risofdm/rng.hpp"

namespace risofdm {

/// Unit-modulus reflection coefficients. For a discrete codebook the integer
/// codes are the source of truth: psi[r] is always rebuilt as
/// e^{j 2 pi codes[r] / 2^B}, never from a rounded float, so codebook
/// membership is exact.
struct PhaseVector {
    cvec psi;
    Codebook codebook;
    std::vector<int> codes;  // empty for Continuous

    int size() const { return static_cast<int>(psi.size()); }

    static PhaseVector from_codes(std::vector<int> codes, const Codebook& cb);
    static PhaseVector continuous(cvec psi);

    /// All-zero-angle vector (every coefficient 1).
    static PhaseVector ones(int R, const Codebook& cb);

    /// Uniform draw from the codebook (uniform angle when Continuous).
    static PhaseVector random(int R, const Codebook& cb, Rng& rng);
};

/// Elementwise nearest codebook point (Continuous: phase kept, modulus
/// normalized). Zero entries map to angle 0; exact angular ties take the
/// lower code index.
PhaseVector project(const cvec& z, const Codebook& cb);

}  // namespace risofdm
