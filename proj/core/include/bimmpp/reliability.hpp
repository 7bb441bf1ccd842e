#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bimmpp/model.hpp"

namespace bimmpp {

enum class QueryKind {
    CondProbTGivenK,       // P(T < t | K < k) over pooled stationary pairs
    ExpectedNT,            // E(N_T(t))
    ExpectedJointIncrement, // E(N_(T,K)(t+dt, k+dk) - N_(T,K)(t, k))
    PmfNT,                 // P(N_T(t) = n)
    PmfNK,                 // P(N_K(k) = n)
    JointNoFailure,        // P(N_(T,K)(t, k) = 0), plus windowed variant
};

struct ReliabilityQuery {
    QueryKind kind = QueryKind::ExpectedNT;
    Vector t;            // time thresholds (days)
    Vector k;            // distance thresholds (km)
    std::vector<long> n; // counts for pmf kinds; empty = full observed support
    double dt = 0.0;     // forward window sizes, required > 0 for increment
    double dk = 0.0;     // queries and the windowed no-failure variant
};

// One estimated cell. Only the labels that apply to the query kind are set;
// future_window marks the windowed variant of JointNoFailure.
struct ReliabilityEstimate {
    std::optional<double> t;
    std::optional<double> k;
    std::optional<long> n;
    bool future_window = false;
    double estimate = 0.0;
    double standard_error = 0.0;
};

struct QueryResult {
    ReliabilityQuery query;
    std::vector<ReliabilityEstimate> cells;
};

struct ReliabilityReport {
    std::vector<QueryResult> results;
    int replications = 0;
    std::size_t n_per_rep = 0;
};

// Simulates `replications` traces of n_per_rep failures and answers every
// query from the same path set (so curves over thresholds are exactly
// monotone where they should be). Throws HorizonTooShort when fewer than 99%
// of the simulated paths span the largest queried threshold, and
// EmptyCondition when a conditional has an empty conditioning set.
ReliabilityReport estimate(const ModelParams& params,
                           const std::vector<ReliabilityQuery>& queries,
                           int replications, std::size_t n_per_rep,
                           std::uint64_t seed);

} // namespace bimmpp
