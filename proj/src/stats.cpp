#include "risofdm/stats.hpp"

#include <cmath>

namespace risofdm {

double mean(const std::vector<double>& x) {
    if (x.empty()) return 0.0;
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

double standard_error(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n < 2) return 0.0;
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    const double var = ss / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
}

double sign_test_pvalue(int wins, int losses) {
    const int n = wins + losses;
    if (n == 0) return 1.0;
    // Upper binomial tail at p = 1/2 via log pmf to stay finite for n ~ 10^3.
    double tail = 0.0;
    for (int k = wins; k <= n; ++k) {
        const double logpmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                              std::lgamma(n - k + 1.0) - n * std::log(2.0);
        tail += std::exp(logpmf);
    }
    return tail < 1.0 ? tail : 1.0;
}

}  // namespace risofdm
