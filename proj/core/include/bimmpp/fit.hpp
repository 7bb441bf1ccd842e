#pragma once

#include <cstdint>
#include <vector>

#include "bimmpp/moments.hpp"
#include "bimmpp/simulate.hpp"

namespace bimmpp {

// Marginal-level estimate: the shared switch probabilities and the four
// per-state total rates. Also serves as the candidate type for the stage-one
// objective.
struct Step1Result {
    double a = 0.0;
    double b = 0.0;
    double gamma_t1 = 0.0;
    double gamma_t2 = 0.0;
    double gamma_k1 = 0.0;
    double gamma_k2 = 0.0;
    double objective = 0.0;
    int restarts_used = 0;
};

struct AbcConfig {
    int iterations = 10000;
    double acceptance_fraction = 0.01;
    std::uint64_t seed = 0;
    // Adds the fourth joint moment E(T^2 K^2) to the acceptance distance.
    // Off by default; the default distance uses E(TK), E(T^2 K), E(T K^2).
    bool include_eta22 = false;
};

struct AcceptedDraw {
    double lambda3 = 0.0;
    double omega3 = 0.0;
    double distance = 0.0;
};

struct FitResult {
    ModelParams params;
    Step1Result step1;
    std::vector<AcceptedDraw> accepted_draws; // ascending by distance
    MomentSet target_moments;                 // empirical set of the input trace
};

// Squared mismatch between a candidate's theoretical marginal statistics and
// the target: both lag-1 autocorrelations enter absolutely, the three raw
// moments per marginal enter relatively.
double objective_delta0(const Step1Result& candidate, const MomentSet& target);

// Multi-start derivative-free minimization of objective_delta0. Each restart
// owns one random stream, so the result is independent of thread count.
Step1Result fit_step1(const MomentSet& target, int restarts, std::uint64_t seed);

// Accept-reject refinement of the dependence parameters lambda3, omega3 with
// uniform priors bounded by the fitted rates; candidates are scored by
// simulating a same-length trace and comparing joint moments.
FitResult fit_step2_abc(const BivariateTrace& trace, const Step1Result& step1,
                        const AbcConfig& cfg);

// empirical moments -> fit_step1 -> fit_step2_abc, canonicalized parameters.
FitResult fit_pipeline(const BivariateTrace& trace, int restarts, const AbcConfig& cfg);

} // namespace bimmpp
