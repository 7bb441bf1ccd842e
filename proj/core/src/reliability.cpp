#include "bimmpp/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "bimmpp/empirical.hpp"
#include "bimmpp/rng.hpp"
#include "bimmpp/simulate.hpp"
#include "parallel.hpp"

namespace bimmpp {

namespace {

constexpr std::uint64_t kReplicationStreams = 4ULL << 32;

void check_thresholds(const Vector& v, const char* what) {
    for (double x : v)
        if (!(x >= 0.0) || !std::isfinite(x))
            throw InvalidParameter(std::string("reliability: ") + what +
                                   " thresholds must be finite and >= 0");
}

void validate_query(const ReliabilityQuery& q) {
    check_thresholds(q.t, "t");
    check_thresholds(q.k, "k");
    for (long n : q.n)
        if (n < 0) throw InvalidParameter("reliability: counts must be >= 0");
    const bool needs_window = q.kind == QueryKind::ExpectedJointIncrement;
    const bool has_window = q.dt > 0.0 && q.dk > 0.0;
    if (needs_window && !has_window)
        throw InvalidParameter("reliability: window deltas dt, dk must be > 0");
    if ((q.dt != 0.0 || q.dk != 0.0) &&
        (!(q.dt > 0.0) || !(q.dk > 0.0) || !std::isfinite(q.dt) || !std::isfinite(q.dk)))
        throw InvalidParameter("reliability: window deltas must both be > 0");
    switch (q.kind) {
        case QueryKind::CondProbTGivenK:
        case QueryKind::ExpectedJointIncrement:
        case QueryKind::JointNoFailure:
            if (q.t.empty() || q.k.empty())
                throw InvalidParameter("reliability: query needs t and k thresholds");
            break;
        case QueryKind::ExpectedNT:
        case QueryKind::PmfNT:
            if (q.t.empty())
                throw InvalidParameter("reliability: query needs t thresholds");
            break;
        case QueryKind::PmfNK:
            if (q.k.empty())
                throw InvalidParameter("reliability: query needs k thresholds");
            break;
    }
}

double mean_of(const Vector& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard deviation over replications divided by sqrt(replications).
double std_error(const Vector& v) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(n - 1)) /
           std::sqrt(static_cast<double>(n));
}

ReliabilityEstimate mean_cell(const Vector& per_rep) {
    ReliabilityEstimate cell;
    cell.estimate = mean_of(per_rep);
    cell.standard_error = std_error(per_rep);
    return cell;
}

} // namespace

ReliabilityReport estimate(const ModelParams& params,
                           const std::vector<ReliabilityQuery>& queries,
                           int replications, std::size_t n_per_rep,
                           std::uint64_t seed) {
    validate(params);
    if (replications < 1)
        throw InvalidParameter("reliability: replications must be >= 1");
    if (n_per_rep < 1)
        throw InvalidParameter("reliability: n_per_rep must be >= 1");
    for (const auto& q : queries) validate_query(q);

    const std::size_t reps = static_cast<std::size_t>(replications);
    std::vector<BivariateTrace> traces(reps);
    std::vector<CountingPath> paths(reps);
    detail::parallel_for(reps, [&](std::size_t r) {
        traces[r] =
            simulate_trace(params, n_per_rep, RngStream(seed, kReplicationStreams + r));
        paths[r] = counting_path(traces[r]);
    });

    // Counting-path queries are only meaningful where the simulated horizon
    // reaches the threshold; pooled-pair conditionals are not horizon-bound.
    double t_max = 0.0, k_max = 0.0;
    bool any_counting = false;
    for (const auto& q : queries) {
        if (q.kind == QueryKind::CondProbTGivenK) continue;
        any_counting = true;
        const double shift_t = q.kind == QueryKind::JointNoFailure ||
                                       q.kind == QueryKind::ExpectedJointIncrement
                                   ? q.dt
                                   : 0.0;
        const double shift_k = shift_t > 0.0 ? q.dk : 0.0;
        for (double t : q.t) t_max = std::max(t_max, t + shift_t);
        for (double k : q.k) k_max = std::max(k_max, k + shift_k);
    }
    if (any_counting) {
        std::size_t covered = 0;
        for (const auto& p : paths)
            if (p.cum_t.back() >= t_max && p.cum_k.back() >= k_max) ++covered;
        if (static_cast<double>(covered) <
            0.99 * static_cast<double>(reps)) {
            std::ostringstream os;
            os << "reliability: only " << covered << " of " << reps
               << " replications span t=" << t_max << ", k=" << k_max
               << "; increase n_per_rep";
            throw HorizonTooShort(os.str());
        }
    }

    ReliabilityReport report;
    report.replications = replications;
    report.n_per_rep = n_per_rep;

    for (const auto& q : queries) {
        QueryResult res;
        res.query = q;
        switch (q.kind) {
            case QueryKind::CondProbTGivenK: {
                for (double t : q.t) {
                    for (double k : q.k) {
                        std::size_t cond = 0, both = 0;
                        for (const auto& tr : traces) {
                            for (std::size_t i = 0; i < tr.size(); ++i) {
                                if (tr.k[i] < k) {
                                    ++cond;
                                    if (tr.t[i] < t) ++both;
                                }
                            }
                        }
                        if (cond == 0) {
                            std::ostringstream os;
                            os << "reliability: no pair has K < " << k
                               << " (cell t=" << t << ", k=" << k << ")";
                            throw EmptyCondition(os.str());
                        }
                        ReliabilityEstimate cell;
                        cell.t = t;
                        cell.k = k;
                        const double p = static_cast<double>(both) /
                                         static_cast<double>(cond);
                        cell.estimate = p;
                        cell.standard_error =
                            std::sqrt(p * (1.0 - p) / static_cast<double>(cond));
                        res.cells.push_back(cell);
                    }
                }
                break;
            }
            case QueryKind::ExpectedNT: {
                for (double t : q.t) {
                    Vector counts(reps);
                    for (std::size_t r = 0; r < reps; ++r)
                        counts[r] = static_cast<double>(paths[r].count_t(t));
                    auto cell = mean_cell(counts);
                    cell.t = t;
                    res.cells.push_back(cell);
                }
                break;
            }
            case QueryKind::ExpectedJointIncrement: {
                for (double t : q.t) {
                    for (double k : q.k) {
                        Vector incr(reps);
                        for (std::size_t r = 0; r < reps; ++r)
                            incr[r] = static_cast<double>(
                                          paths[r].count_joint(t + q.dt, k + q.dk)) -
                                      static_cast<double>(paths[r].count_joint(t, k));
                        auto cell = mean_cell(incr);
                        cell.t = t;
                        cell.k = k;
                        res.cells.push_back(cell);
                    }
                }
                break;
            }
            case QueryKind::PmfNT:
            case QueryKind::PmfNK: {
                const bool on_t = q.kind == QueryKind::PmfNT;
                for (double x : on_t ? q.t : q.k) {
                    std::vector<long> counts(reps);
                    for (std::size_t r = 0; r < reps; ++r)
                        counts[r] = static_cast<long>(on_t ? paths[r].count_t(x)
                                                           : paths[r].count_k(x));
                    std::vector<long> support = q.n;
                    if (support.empty()) {
                        std::set<long> seen(counts.begin(), counts.end());
                        support.assign(seen.begin(), seen.end());
                    }
                    for (long n : support) {
                        Vector ind(reps);
                        for (std::size_t r = 0; r < reps; ++r)
                            ind[r] = counts[r] == n ? 1.0 : 0.0;
                        auto cell = mean_cell(ind);
                        if (on_t)
                            cell.t = x;
                        else
                            cell.k = x;
                        cell.n = n;
                        res.cells.push_back(cell);
                    }
                }
                break;
            }
            case QueryKind::JointNoFailure: {
                const bool windowed = q.dt > 0.0 && q.dk > 0.0;
                for (double t : q.t) {
                    for (double k : q.k) {
                        Vector ind(reps);
                        for (std::size_t r = 0; r < reps; ++r)
                            ind[r] = paths[r].count_joint(t, k) == 0 ? 1.0 : 0.0;
                        auto cell = mean_cell(ind);
                        cell.t = t;
                        cell.k = k;
                        res.cells.push_back(cell);
                        if (windowed) {
                            for (std::size_t r = 0; r < reps; ++r)
                                ind[r] = paths[r].count_joint(t + q.dt, k + q.dk) ==
                                                 paths[r].count_joint(t, k)
                                             ? 1.0
                                             : 0.0;
                            auto wcell = mean_cell(ind);
                            wcell.t = t;
                            wcell.k = k;
                            wcell.future_window = true;
                            res.cells.push_back(wcell);
                        }
                    }
                }
                break;
            }
        }
        report.results.push_back(std::move(res));
    }
    return report;
}

} // namespace bimmpp
