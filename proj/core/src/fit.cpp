#include "bimmpp/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "bimmpp/empirical.hpp"
#include "bimmpp/rng.hpp"
#include "parallel.hpp"

namespace bimmpp {

namespace {

// Stream id namespaces; one 2^32 block per pipeline stage keeps every
// consumer of a (seed, index) pair unique process-wide.
constexpr std::uint64_t kStep1Streams = 1ULL << 32;
constexpr std::uint64_t kAbcPriorStreams = 2ULL << 32;
constexpr std::uint64_t kAbcSimStreams = 3ULL << 32;

constexpr double kPenalty = 1e12;
constexpr double kEdge = 1e-6;

double clamp_prob(double p) { return std::min(1.0 - kEdge, std::max(kEdge, p)); }

struct Candidate {
    double a, b, gt1, gt2, gk1, gk2;
};

Candidate decode(const std::array<double, 6>& x) {
    Candidate c;
    c.a = clamp_prob(1.0 / (1.0 + std::exp(-x[0])));
    c.b = clamp_prob(1.0 / (1.0 + std::exp(-x[1])));
    c.gt1 = std::exp(x[2]);
    c.gt2 = std::exp(x[3]);
    c.gk1 = std::exp(x[4]);
    c.gk2 = std::exp(x[5]);
    return c;
}

Step1Result as_step1(const Candidate& c) {
    Step1Result s;
    s.a = c.a;
    s.b = c.b;
    s.gamma_t1 = c.gt1;
    s.gamma_t2 = c.gt2;
    s.gamma_k1 = c.gk1;
    s.gamma_k2 = c.gk2;
    return s;
}

double penalized_objective(const std::array<double, 6>& x, const MomentSet& target) {
    double v;
    try {
        v = objective_delta0(as_step1(decode(x)), target);
    } catch (const Error&) {
        return kPenalty;
    }
    return std::isfinite(v) ? v : kPenalty;
}

// Downhill simplex with the classic coefficients (reflect 1, expand 2,
// contract 0.5, shrink 0.5). A degenerate simplex can close the value
// spread below ftol while still away from the minimum, so on convergence
// the search re-seeds a tighter simplex around the incumbent best and keeps
// going, stopping once a re-seed no longer improves or the shared iteration
// budget runs out.
template <typename F>
std::pair<std::array<double, 6>, double> nelder_mead(F&& f, std::array<double, 6> x0,
                                                     int max_iter, double ftol) {
    constexpr int n = 6;
    std::array<std::array<double, 6>, n + 1> xs;
    std::array<double, n + 1> fs;
    std::array<int, n + 1> idx{};

    auto seed = [&](const std::array<double, 6> center, double step) {
        xs[0] = center;
        fs[0] = f(center);
        for (int i = 0; i < n; ++i) {
            xs[i + 1] = center;
            xs[i + 1][i] += step;
            fs[i + 1] = f(xs[i + 1]);
        }
    };
    auto argmin = [&] {
        int best = 0;
        for (int i = 1; i <= n; ++i)
            if (fs[i] < fs[best]) best = i;
        return best;
    };

    double step = 0.25;
    seed(x0, step);
    int iters_left = max_iter;
    double prev_pass_best = std::numeric_limits<double>::infinity();
    while (true) {
        bool converged = false;
        while (iters_left > 0) {
            --iters_left;
            std::iota(idx.begin(), idx.end(), 0);
            std::stable_sort(idx.begin(), idx.end(),
                             [&](int l, int r) { return fs[l] < fs[r]; });
            const int best = idx[0], second_worst = idx[n - 1], worst = idx[n];
            if (fs[worst] - fs[best] <= ftol) {
                converged = true;
                break;
            }

            std::array<double, 6> centroid{};
            for (int i = 0; i < n; ++i)
                for (int d = 0; d < 6; ++d) centroid[d] += xs[idx[i]][d] / n;

            auto blend = [&](double coef) {
                std::array<double, 6> x;
                for (int d = 0; d < 6; ++d)
                    x[d] = centroid[d] + coef * (centroid[d] - xs[worst][d]);
                return x;
            };

            const auto xr = blend(1.0);
            const double fr = f(xr);
            if (fr < fs[best]) {
                const auto xe = blend(2.0);
                const double fe = f(xe);
                if (fe < fr) {
                    xs[worst] = xe;
                    fs[worst] = fe;
                } else {
                    xs[worst] = xr;
                    fs[worst] = fr;
                }
                continue;
            }
            if (fr < fs[second_worst]) {
                xs[worst] = xr;
                fs[worst] = fr;
                continue;
            }
            const auto xc = blend(fr < fs[worst] ? 0.5 : -0.5);
            const double fc = f(xc);
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = xc;
                fs[worst] = fc;
                continue;
            }
            for (int i = 1; i <= n; ++i) {
                for (int d = 0; d < 6; ++d)
                    xs[idx[i]][d] =
                        xs[best][d] + 0.5 * (xs[idx[i]][d] - xs[best][d]);
                fs[idx[i]] = f(xs[idx[i]]);
            }
        }

        const int best = argmin();
        step *= 0.25;
        if (!converged || iters_left <= 0 || step < 1e-8 ||
            prev_pass_best - fs[best] <= ftol)
            return {xs[best], fs[best]};
        prev_pass_best = fs[best];
        seed(xs[best], step);
    }
}

void canonical_order(Step1Result& s) {
    const bool swap = s.gamma_t1 < s.gamma_t2 ||
                      (s.gamma_t1 == s.gamma_t2 &&
                       (s.gamma_k1 < s.gamma_k2 ||
                        (s.gamma_k1 == s.gamma_k2 && s.a > s.b)));
    if (swap) {
        std::swap(s.a, s.b);
        std::swap(s.gamma_t1, s.gamma_t2);
        std::swap(s.gamma_k1, s.gamma_k2);
    }
}

struct JointMeans {
    double e11 = 0.0, e21 = 0.0, e12 = 0.0, e22 = 0.0;
};

JointMeans joint_means(const BivariateTrace& trace) {
    JointMeans jm;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double t = trace.t[i], k = trace.k[i];
        jm.e11 += t * k;
        jm.e21 += t * t * k;
        jm.e12 += t * k * k;
        jm.e22 += t * t * k * k;
    }
    const double n = static_cast<double>(trace.size());
    jm.e11 /= n;
    jm.e21 /= n;
    jm.e12 /= n;
    jm.e22 /= n;
    return jm;
}

} // namespace

double objective_delta0(const Step1Result& candidate, const MomentSet& target) {
    ModelParams p;
    p.a = candidate.a;
    p.b = candidate.b;
    p.lambda = {candidate.gamma_t1, candidate.gamma_k1, 0.0};
    p.omega = {candidate.gamma_t2, candidate.gamma_k2, 0.0};
    const auto reps = marginal_reps(p);

    auto stats = [](const MarginalRep& rep, std::array<double, 3>& mu) {
        for (int r = 1; r <= 3; ++r) mu[r - 1] = marginal_moment(rep, r);
        try {
            return marginal_autocorr(rep, 1);
        } catch (const ZeroVariance&) {
            return 0.0;
        }
    };

    std::array<double, 3> mu_t{}, mu_k{};
    const double rho_t = stats(reps.first, mu_t);
    const double rho_k = stats(reps.second, mu_k);

    double v = (rho_t - target.rho_t1) * (rho_t - target.rho_t1) +
               (rho_k - target.rho_k1) * (rho_k - target.rho_k1);
    for (int j = 0; j < 3; ++j) {
        const double dt = (mu_t[j] - target.mu_t[j]) / target.mu_t[j];
        const double dk = (mu_k[j] - target.mu_k[j]) / target.mu_k[j];
        v += dt * dt + dk * dk;
    }
    return v;
}

Step1Result fit_step1(const MomentSet& target, int restarts, std::uint64_t seed) {
    if (restarts < 1) throw InvalidParameter("fit_step1: restarts must be >= 1");
    if (!(target.mu_t[0] > 0.0) || !(target.mu_k[0] > 0.0))
        throw InvalidParameter("fit_step1: target first moments must be positive");

    const double scale_t = 1.0 / target.mu_t[0];
    const double scale_k = 1.0 / target.mu_k[0];

    std::vector<double> best_f(static_cast<std::size_t>(restarts));
    std::vector<std::array<double, 6>> best_x(static_cast<std::size_t>(restarts));

    auto objective = [&](const std::array<double, 6>& x) {
        return penalized_objective(x, target);
    };

    detail::parallel_for(static_cast<std::size_t>(restarts), [&](std::size_t j) {
        RngStream rng(seed, kStep1Streams + j);
        const double a0 = 0.001 + 0.998 * rng.uniform();
        const double b0 = 0.001 + 0.998 * rng.uniform();
        auto log_unif = [&](double scale) {
            return std::log(0.1 * scale) + rng.uniform() * std::log(100.0);
        };
        std::array<double, 6> x0 = {std::log(a0 / (1.0 - a0)),
                                    std::log(b0 / (1.0 - b0)),
                                    log_unif(scale_t),
                                    log_unif(scale_t),
                                    log_unif(scale_k),
                                    log_unif(scale_k)};
        auto [x, f] = nelder_mead(objective, x0, 2000, 1e-10);
        best_x[j] = x;
        best_f[j] = f;
    });

    std::size_t winner = 0;
    for (std::size_t j = 1; j < best_f.size(); ++j)
        if (best_f[j] < best_f[winner]) winner = j;
    if (best_f[winner] >= kPenalty * 0.1)
        throw NoConvergence("fit_step1: no restart reached a finite objective");

    Step1Result out = as_step1(decode(best_x[winner]));
    canonical_order(out);
    out.objective = best_f[winner];
    out.restarts_used = restarts;
    return out;
}

FitResult fit_step2_abc(const BivariateTrace& trace, const Step1Result& step1,
                        const AbcConfig& cfg) {
    if (cfg.iterations < 1)
        throw InvalidParameter("fit_step2_abc: iterations must be >= 1");
    if (!(cfg.acceptance_fraction > 0.0) || cfg.acceptance_fraction > 1.0)
        throw InvalidParameter("fit_step2_abc: acceptance_fraction must be in (0,1]");
    if (cfg.iterations * cfg.acceptance_fraction < 1.0)
        throw InvalidParameter(
            "fit_step2_abc: iterations * acceptance_fraction must be >= 1");

    FitResult result;
    result.step1 = step1;
    result.target_moments = empirical_moment_set(trace);
    const JointMeans obs = joint_means(trace);

    const double hi1 = std::min(step1.gamma_t1, step1.gamma_k1);
    const double hi2 = std::min(step1.gamma_t2, step1.gamma_k2);
    const std::size_t iters = static_cast<std::size_t>(cfg.iterations);

    std::vector<double> lam3(iters), ome3(iters), dist(iters);
    detail::parallel_for(iters, [&](std::size_t i) {
        RngStream prior(cfg.seed, kAbcPriorStreams + i);
        const double l3 = prior.uniform() * hi1;
        const double w3 = prior.uniform() * hi2;

        ModelParams cand;
        cand.a = step1.a;
        cand.b = step1.b;
        cand.lambda = {step1.gamma_t1 - l3, step1.gamma_k1 - l3, l3};
        cand.omega = {step1.gamma_t2 - w3, step1.gamma_k2 - w3, w3};

        const BivariateTrace sim =
            simulate_trace(cand, trace.size(), RngStream(cfg.seed, kAbcSimStreams + i));
        const JointMeans sm = joint_means(sim);

        auto rel2 = [](double s, double o) {
            const double d = (s - o) / o;
            return d * d;
        };
        double d = rel2(sm.e11, obs.e11) + rel2(sm.e21, obs.e21) + rel2(sm.e12, obs.e12);
        if (cfg.include_eta22) d += rel2(sm.e22, obs.e22);

        lam3[i] = l3;
        ome3[i] = w3;
        dist[i] = d;
    });

    std::vector<std::size_t> order(iters);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return dist[l] < dist[r]; });

    const std::size_t keep = std::min<std::size_t>(
        iters,
        static_cast<std::size_t>(std::llround(cfg.iterations * cfg.acceptance_fraction)));

    result.accepted_draws.reserve(keep);
    double sum_l3 = 0.0, sum_w3 = 0.0;
    for (std::size_t r = 0; r < keep; ++r) {
        const std::size_t i = order[r];
        result.accepted_draws.push_back({lam3[i], ome3[i], dist[i]});
        sum_l3 += lam3[i];
        sum_w3 += ome3[i];
    }
    const double l3_hat = sum_l3 / static_cast<double>(keep);
    const double w3_hat = sum_w3 / static_cast<double>(keep);

    ModelParams fitted;
    fitted.a = step1.a;
    fitted.b = step1.b;
    fitted.lambda = {step1.gamma_t1 - l3_hat, step1.gamma_k1 - l3_hat, l3_hat};
    fitted.omega = {step1.gamma_t2 - w3_hat, step1.gamma_k2 - w3_hat, w3_hat};
    result.params = canonicalize(validate(fitted));
    return result;
}

FitResult fit_pipeline(const BivariateTrace& trace, int restarts, const AbcConfig& cfg) {
    const MomentSet target = empirical_moment_set(trace);
    const Step1Result step1 = fit_step1(target, restarts, cfg.seed);
    return fit_step2_abc(trace, step1, cfg);
}

} // namespace bimmpp
