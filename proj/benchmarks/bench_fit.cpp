#include <benchmark/benchmark.h>

#include "bimmpp/empirical.hpp"
#include "bimmpp/fit.hpp"
#include "bimmpp/model.hpp"
#include "bimmpp/moments.hpp"
#include "bimmpp/rng.hpp"
#include "bimmpp/simulate.hpp"

namespace {

bimmpp::ModelParams reference_params() {
    bimmpp::ModelParams p;
    p.a = 0.02;
    p.b = 0.44;
    p.lambda = {0.82, 0.40, 1.86};
    p.omega = {0.0235, 0.00527, 0.24};
    return p;
}

void BM_Step1Objective(benchmark::State& state) {
    const bimmpp::ModelParams p = reference_params();
    const bimmpp::MomentSet target = bimmpp::theoretical_moment_set(p);
    bimmpp::Step1Result cand;
    cand.a = p.a;
    cand.b = p.b;
    cand.gamma_t1 = p.gamma_t1();
    cand.gamma_t2 = p.gamma_t2();
    cand.gamma_k1 = p.gamma_k1();
    cand.gamma_k2 = p.gamma_k2();
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::objective_delta0(cand, target));
    }
}
BENCHMARK(BM_Step1Objective);

void BM_FitStep1(benchmark::State& state) {
    const bimmpp::MomentSet target =
        bimmpp::theoretical_moment_set(reference_params());
    const int restarts = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::fit_step1(target, restarts, 11));
    }
}
BENCHMARK(BM_FitStep1)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_FitPipeline(benchmark::State& state) {
    const bimmpp::BivariateTrace tr =
        bimmpp::simulate_trace(reference_params(), 1000, bimmpp::RngStream(5, 0));
    bimmpp::AbcConfig cfg;
    cfg.iterations = static_cast<int>(state.range(0));
    cfg.acceptance_fraction = 0.10;
    cfg.seed = 12;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::fit_pipeline(tr, 20, cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitPipeline)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

} // namespace
