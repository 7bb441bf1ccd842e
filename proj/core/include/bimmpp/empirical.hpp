#pragma once

#include "bimmpp/moments.hpp"
#include "bimmpp/simulate.hpp"

namespace bimmpp {

// Cumulative failure epochs: cum_t[i] / cum_k[i] are the total days and
// kilometers up to and including failure i.
struct CountingPath {
    Vector cum_t;
    Vector cum_k;

    // Number of failures with epoch <= t (or odometer <= k).
    std::size_t count_t(double t) const;
    std::size_t count_k(double k) const;
    // Failures inside the box [0,t] x [0,k]: both coordinates within bound.
    std::size_t count_joint(double t, double k) const;
};

// Sample autocorrelation at the given lag with the global mean:
// sum_{i<=n-l} (x_i - xbar)(x_{i+l} - xbar) / sum_i (x_i - xbar)^2.
double lag_autocorr(const Vector& values, int lag);

// Sample analogue of theoretical_moment_set; requires at least 3 pairs.
// A constant component sets the matching degeneracy flag with rho = 0.
MomentSet empirical_moment_set(const BivariateTrace& trace);

CountingPath counting_path(const BivariateTrace& trace);

} // namespace bimmpp
