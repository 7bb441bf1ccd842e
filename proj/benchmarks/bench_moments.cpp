#include <benchmark/benchmark.h>

#include "bimmpp/model.hpp"
#include "bimmpp/moments.hpp"

namespace {

bimmpp::ModelParams reference_params() {
    bimmpp::ModelParams p;
    p.a = 0.02;
    p.b = 0.44;
    p.lambda = {0.82, 0.40, 1.86};
    p.omega = {0.0235, 0.00527, 0.24};
    return p;
}

void BM_TheoreticalMomentSet(benchmark::State& state) {
    const bimmpp::ModelParams p = reference_params();
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::theoretical_moment_set(p));
    }
}
BENCHMARK(BM_TheoreticalMomentSet);

void BM_JointMoment22(benchmark::State& state) {
    const bimmpp::MatrixRep rep = bimmpp::full_matrix_rep(reference_params());
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::joint_moment(rep, 2, 2));
    }
}
BENCHMARK(BM_JointMoment22);

void BM_Mgf(benchmark::State& state) {
    const bimmpp::MatrixRep rep = bimmpp::full_matrix_rep(reference_params());
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::mgf(rep, {-0.1, -0.1}));
    }
}
BENCHMARK(BM_Mgf);

void BM_MarginalAutocorr(benchmark::State& state) {
    const bimmpp::MarginalRep rep =
        bimmpp::marginal_reps(reference_params()).first;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bimmpp::marginal_autocorr(rep, 1));
    }
}
BENCHMARK(BM_MarginalAutocorr);

} // namespace
