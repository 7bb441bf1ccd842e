#include <benchmark/benchmark.h>

#include "bimmpp/empirical.hpp"
#include "bimmpp/model.hpp"
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

void BM_SampleBve(benchmark::State& state) {
    bimmpp::RngStream rng(1, 0);
    const std::array<double, 3> lam = {1.0, 1.0, 0.5};
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::sample_bve(lam, rng));
    }
}
BENCHMARK(BM_SampleBve);

void BM_SimulateTrace(benchmark::State& state) {
    const bimmpp::ModelParams p = reference_params();
    const auto n = static_cast<std::size_t>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            bimmpp::simulate_trace(p, n, bimmpp::RngStream(++seed, 0)));
    }
    state.SetItemsProcessed(state.iterations() * int64_t(n));
}
BENCHMARK(BM_SimulateTrace)->Arg(1000)->Arg(100000);

void BM_EmpiricalMomentSet(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const bimmpp::BivariateTrace tr =
        bimmpp::simulate_trace(reference_params(), n, bimmpp::RngStream(3, 0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::empirical_moment_set(tr));
    }
    state.SetItemsProcessed(state.iterations() * int64_t(n));
}
BENCHMARK(BM_EmpiricalMomentSet)->Arg(1000)->Arg(100000);

} // namespace
