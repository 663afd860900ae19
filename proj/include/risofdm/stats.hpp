#pragma once

#include <vector>

namespace risofdm {

double mean(const std::vector<double>& x);

/// Standard error of the mean (0 for n < 2).
double standard_error(const std::vector<double>& x);

/// One-sided paired sign test: probability of observing at least `wins`
/// positive differences out of `wins + losses` fair coin flips. Ties are
/// dropped by the caller.
double sign_test_pvalue(int wins, int losses);

}  // namespace risofdm
