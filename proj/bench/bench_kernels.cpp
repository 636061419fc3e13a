// Serial reference vs OpenMP for the batch kernels. Arg 0 = Serial, 1 = Parallel.
#include <benchmark/benchmark.h>

#include "suborbit/batch.hpp"
#include "suborbit/knaster.hpp"
#include "suborbit/witness.hpp"

using namespace suborbit;

namespace {

Execution mode(const benchmark::State& state) { return state.range(0) == 0 ? Execution::Serial : Execution::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

void BM_TorusGapBatch(benchmark::State& state) {
    for (auto _ : state) {
        auto r = batch::torus_gap_batch({2, 3, 4, 5, 6, 7, 8}, 56, 42, {}, mode(state));
        benchmark::DoNotOptimize(r.min_total);
    }
    label(state);
}

void BM_FarPointBatch(benchmark::State& state) {
    for (auto _ : state) {
        auto r = batch::far_point_batch({2, 3, 4, 5, 6, 7, 8}, 50, 42, mode(state));
        benchmark::DoNotOptimize(r.min_distance);
    }
    label(state);
}

void BM_HarnessSweep(benchmark::State& state) {
    for (auto _ : state) {
        auto r = batch::orbit_harness_sweep(23, 3, mode(state));
        benchmark::DoNotOptimize(r.max_abs_residual);
    }
    label(state);
}

void BM_CrossCheck(benchmark::State& state) {
    for (auto _ : state) {
        auto r = batch::not_subtoral_cross_check(30, 31, mode(state));
        benchmark::DoNotOptimize(r.lp_solves);
    }
    label(state);
}

void BM_SpreadRestarts(benchmark::State& state) {
    Rng rng(1);
    const auto w = pgon_witness(5, 1.0, {0, 1, 3}, {"a", "b", "c"});
    const auto f = knaster::TestMap::random_quadratic(2, 6, rng);
    knaster::SearchOptions o;
    o.restarts = 32;
    o.tol = 0;
    o.iterations = 200;
    o.execution = mode(state);
    for (auto _ : state) {
        auto r = knaster::minimize_spread(w.claimed, f, o);
        benchmark::DoNotOptimize(r.phi);
    }
    label(state);
}

}  // namespace

BENCHMARK(BM_TorusGapBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FarPointBatch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_HarnessSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossCheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpreadRestarts)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
