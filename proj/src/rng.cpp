#include "risofdm/rng.hpp"

#include <cmath>

namespace risofdm {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = splitmix64(seed);
    s = splitmix64(s ^ a);
    s = splitmix64(s ^ b);
    return Rng(s);
}

double Rng::normal() {
    const double u1 = u01();
    const double u2 = u01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));  // u1 in [0,1) => 1-u1 in (0,1]
    return r * std::cos(kTwoPi * u2);
}

cplx Rng::cnormal() {
    const double u1 = u01();
    const double u2 = u01();
    const double r = std::sqrt(-std::log1p(-u1));  // sqrt(-2 ln u)/sqrt(2)
    return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

std::size_t Rng::index(std::size_t n) {
    const double x = u01() * static_cast<double>(n);
    auto i = static_cast<std::size_t>(x);
    return i < n ? i : n - 1;
}

std::array<double, 3> Rng::in_sphere(const std::array<double, 3>& center, double radius) {
    if (radius <= 0.0) return center;
    while (true) {
        const double x = 2.0 * u01() - 1.0;
        const double y = 2.0 * u01() - 1.0;
        const double z = 2.0 * u01() - 1.0;
        if (x * x + y * y + z * z <= 1.0) {
            return {center[0] + radius * x, center[1] + radius * y, center[2] + radius * z};
        }
    }
}

}  // namespace risofdm
