#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace risofdm {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Thrown when a scenario description is inconsistent (bad counts, units,
/// geometry). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Thrown when an iterative solver fails to reach its tolerance.
class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double abs2(cplx z) { return z.real() * z.real() + z.imag() * z.imag(); }

inline double norm2(std::span<const cplx> v) {
    double s = 0.0;
    for (cplx z : v) s += abs2(z);
    return std::sqrt(s);
}

}  // namespace risofdm
