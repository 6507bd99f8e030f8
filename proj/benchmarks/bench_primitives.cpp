#include <benchmark/benchmark.h>

#include "marginforge/prox.hpp"
#include "marginforge/rng.hpp"
#include "marginforge/sets.hpp"

using namespace marginforge;

namespace {

Vector random_vector(SplitMix64& rng, int n, double scale = 2.0) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = scale * rng.next_gaussian();
    return v;
}

}  // namespace

static void BM_ProjectBall(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(1);
    const auto ball = sets::ball(Vector::Zero(n), 1.0);
    const Vector x = random_vector(rng, n);
    for (auto _ : state) {
        Vector p = sets::project(ball, x);
        benchmark::DoNotOptimize(p);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectBall)->RangeMultiplier(4)->Range(8, 2048)->Complexity();

static void BM_ProjectBox(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(2);
    const auto box = sets::box(Vector::Constant(n, -1.0), Vector::Constant(n, 1.0));
    const Vector x = random_vector(rng, n);
    for (auto _ : state) {
        Vector p = sets::project(box, x);
        benchmark::DoNotOptimize(p);
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ProjectBox)->RangeMultiplier(4)->Range(8, 2048)->Complexity();

static void BM_SqDistGradHalfspace(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(3);
    const auto hs = sets::halfspace(random_vector(rng, n), 0.5);
    const Vector x = random_vector(rng, n);
    for (auto _ : state) {
        Vector g = sets::sq_dist_grad(hs, x);
        benchmark::DoNotOptimize(g);
    }
}
BENCHMARK(BM_SqDistGradHalfspace)->Arg(64)->Arg(512);

static void BM_ProxSoftThreshold(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(4);
    const auto l1 = prox::scaled_l1(0.5);
    const Vector z = random_vector(rng, n);
    for (auto _ : state) {
        Vector p = prox::prox(l1, z);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_ProxSoftThreshold)->Arg(64)->Arg(512)->Arg(4096);

static void BM_MoreauEnvelopeBall(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(5);
    const auto ind = prox::set_indicator(sets::ball(Vector::Zero(n), 1.0));
    const Vector z = random_vector(rng, n);
    for (auto _ : state) {
        double v = prox::moreau_env(ind, z);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_MoreauEnvelopeBall)->Arg(64)->Arg(512);
