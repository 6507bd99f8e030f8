#include <benchmark/benchmark.h>

#include "marginforge/dual_solver.hpp"
#include "marginforge/io.hpp"
#include "marginforge/primal_solver.hpp"

using namespace marginforge;

namespace {

problems::SoftMarginProblem blob_problem(long mPerClass, int dim) {
    io::BlobSpec spec;
    spec.mPerClass = mPerClass;
    spec.dim = dim;
    spec.centerPlus = Vector::Constant(dim, 3.0 / std::sqrt(static_cast<double>(dim)));
    spec.centerMinus = Vector::Zero(dim);
    spec.stddev = 0.75;
    spec.seed = 99;
    auto ds = augment(io::gen_blobs(spec), 1.0);
    const int d = ds.dim();
    return problems::SoftMarginProblem(std::move(ds), sets::whole_space(d), 1.0);
}

}  // namespace

static void BM_SoftSubgradient(benchmark::State& state) {
    const auto p = blob_problem(state.range(0) / 2, 20);
    const Vector w = Vector::Constant(p.dataset().dim(), 0.1);
    for (auto _ : state) {
        auto g = problems::soft_subgradient(p, w);
        benchmark::DoNotOptimize(g.nonsmooth);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SoftSubgradient)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_PrimalSolve1k(benchmark::State& state) {
    const auto p = blob_problem(100, 20);
    const auto schedule = primal::hybrid_schedule(problems::constants(p));
    primal::PrimalConfig cfg;
    cfg.maxIter = 1000;
    cfg.recordEvery = 1000;
    const Vector w1 = Vector::Zero(p.dataset().dim());
    for (auto _ : state) {
        auto result = primal::solve_subgradient(p, schedule, cfg, w1);
        benchmark::DoNotOptimize(result.bestValue);
    }
}
BENCHMARK(BM_PrimalSolve1k)->Unit(benchmark::kMillisecond);

static void BM_DualGradient(benchmark::State& state) {
    const auto p = blob_problem(state.range(0) / 2, 20);
    const auto dp = dual::DualProblem::from_soft(p);
    const Vector lambda = Vector::Constant(dp.multipliers(), 0.5 / dp.multipliers());
    for (auto _ : state) {
        Vector g = dual::dual_gradient(dp, lambda);
        benchmark::DoNotOptimize(g);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DualGradient)->RangeMultiplier(4)->Range(64, 4096)->Complexity();

static void BM_LipschitzEstimate(benchmark::State& state) {
    const auto p = blob_problem(state.range(0) / 2, 20);
    const auto dp = dual::DualProblem::from_soft(p);
    for (auto _ : state) {
        double L = dual::lipschitz_estimate(dp);
        benchmark::DoNotOptimize(L);
    }
}
BENCHMARK(BM_LipschitzEstimate)->Arg(128)->Arg(1024);

static void BM_DualSolveBlob(benchmark::State& state) {
    const auto p = blob_problem(250, 20);
    const auto dp = dual::DualProblem::from_soft(p);
    dual::DualConfig cfg;
    cfg.maxIter = 5000;
    cfg.tolerance = 1e-6;
    cfg.recordEvery = 5000;
    const Vector lambda0 = Vector::Zero(dp.multipliers());
    for (auto _ : state) {
        auto result = dual::solve(dp, cfg, lambda0);
        benchmark::DoNotOptimize(result.dualValue);
    }
}
BENCHMARK(BM_DualSolveBlob)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
