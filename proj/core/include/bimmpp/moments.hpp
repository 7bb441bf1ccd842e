#pragma once

#include <array>

#include "bimmpp/model.hpp"

namespace bimmpp {

// The twelve summary statistics used throughout: three raw moments and the
// lag-1 autocorrelation per marginal, the joint moments E(TK), E(T^2 K),
// E(T K^2), and the correlation between paired times and distances.
struct MomentSet {
    std::array<double, 3> mu_t{};
    double rho_t1 = 0.0;
    std::array<double, 3> mu_k{};
    double rho_k1 = 0.0;
    double eta11 = 0.0;
    double eta21 = 0.0;
    double eta12 = 0.0;
    double corr_tk = 0.0;
    // Set when a marginal has i.i.d. exponential inter-failures, which makes
    // the autocorrelation trivially zero; the rho field is then reported 0.
    bool rho_t_degenerate = false;
    bool rho_k_degenerate = false;
};

enum class Coordinate { T, K };

// r-th raw moment of the stationary inter-failure law, r! phi (-d0)^-r e.
double marginal_moment(const MarginalRep& rep, int r);

// Lag-l autocorrelation of consecutive inter-failure values. Throws
// ZeroVariance for Poisson-degenerate marginals (unit coefficient of
// variation), where the sequence is i.i.d.
double marginal_autocorr(const MarginalRep& rep, int lag);

// P(inter-failure value <= t) = 1 - phi exp(d0 t) e.
double interfailure_cdf(const MarginalRep& rep, double t);

// Joint raw moment eta_nm = E(T^n K^m) of one stationary pair, evaluated as
// the permutation sum over reward columns; supported for 1 <= n+m <= 4.
double joint_moment(const MatrixRep& rep, int n, int m);

// Moment generating function E(exp(theta1 T + theta2 K)) of one pair.
// Throws Divergent outside the convergence region.
double mgf(const MatrixRep& rep, const std::array<double, 2>& theta);

// Transform of the first n consecutive pairs; one theta reduces to mgf.
double sequence_transform(const MatrixRep& rep,
                          const std::vector<std::array<double, 2>>& thetas);

// E(X_1 Y_{1+lag}) for X, Y in {T, K}: the product of one coordinate of a
// pair with a coordinate of the pair `lag` failures later.
double cross_moment(const MatrixRep& rep, Coordinate first, Coordinate second,
                    int lag);

// All twelve statistics from the closed forms; Poisson-degenerate marginals
// report rho = 0 with the matching degeneracy flag set.
MomentSet theoretical_moment_set(const ModelParams& params);

} // namespace bimmpp
