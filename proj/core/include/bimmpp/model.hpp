#pragma once

#include <array>

#include "bimmpp/numerics.hpp"

namespace bimmpp {

// The eight parameters of the bivariate MMPP2. State 1 emits correlated
// (time, distance) increments with rate triple lambda, state 2 with omega;
// after each increment the hidden chain flips with probability a (state 1)
// or b (state 2) instead of recording a failure.
struct ModelParams {
    double a = 0.0;
    double b = 0.0;
    std::array<double, 3> lambda{}; // (lambda1, lambda2, lambda3)
    std::array<double, 3> omega{};  // (omega1, omega2, omega3)

    double gamma_t1() const { return lambda[0] + lambda[2]; }
    double gamma_k1() const { return lambda[1] + lambda[2]; }
    double gamma_t2() const { return omega[0] + omega[2]; }
    double gamma_k2() const { return omega[1] + omega[2]; }
};

// One marginal seen as a two-state MMPP2: phi is the stationary phase vector
// at failure instants, pi the stationary vector of the generator d0 + d1.
struct MarginalRep {
    Vector phi;
    Matrix d0;
    Matrix d1;
    Vector pi;
};

// Six-phase representation of the bivariate process: initial vector, hidden
// (d0) and failure (d1) rate matrices, and a 6x2 0/1 reward matrix whose
// columns mark the phases accruing time (column 0) and distance (column 1).
struct MatrixRep {
    Vector phi6;
    Matrix d0;
    Matrix d1;
    Matrix r;
};

// Returns params unchanged when every domain invariant holds, otherwise
// throws InvalidParameter naming the violated bound.
const ModelParams& validate(const ModelParams& params);

// Stationary phase vector at failure instants,
// (b(1-a), a(1-b)) / (b(1-a) + a(1-b)).
Vector stationary_phi(double a, double b);

// Time marginal first (rates gamma_t1, gamma_t2), distance marginal second
// (gamma_k1, gamma_k2); both share (a, b).
std::pair<MarginalRep, MarginalRep> marginal_reps(const ModelParams& params);

// Six-phase representation in blocked form: phase 0 (and 3) carries both
// rewards, phases 1/4 the time residual, phases 2/5 the distance residual.
MatrixRep full_matrix_rep(const ModelParams& params);

// Equivalent six-phase representation that splits each state by which shock
// fires first: phases 0/1 (and 3/4) are the single-coordinate residuals,
// phases 2/5 the common full-rate segment. Every moment computed from it
// equals the full_matrix_rep value.
MatrixRep alt_matrix_rep(const ModelParams& params);

// Hidden-state relabeling {a<->b, lambda<->omega} leaves the process law
// unchanged; swap() applies it, canonicalize() picks the representative with
// gamma_t1 >= gamma_t2 (ties: gamma_k1 >= gamma_k2, then a <= b).
ModelParams swap_states(const ModelParams& params);
ModelParams canonicalize(const ModelParams& params);

} // namespace bimmpp
