#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "momentsos/relax.hpp"
#include "momentsos/solver.hpp"

using namespace momentsos;

static void SolveDenseOrderOne(benchmark::State& state) {
    POP pop = fixtures::two_var_three_minimizers();
    BlockSDP sdp = build_dense(pop, 1);
    SolverOptions opts;
    opts.eps_primal = opts.eps_dual = 1e-6;
    for (auto _ : state) {
        MomentSolution sol = solve(sdp, opts);
        benchmark::DoNotOptimize(sol.objective);
    }
}
BENCHMARK(SolveDenseOrderOne);

static void SolveTermSparsityBlocks(benchmark::State& state) {
    POP pop = fixtures::coupled_pair();
    BlockSDP sdp = build_ts(pop, 2, 1, ChordalStrategy::maximal);
    SolverOptions opts;
    opts.eps_primal = opts.eps_dual = 1e-7;
    for (auto _ : state) {
        MomentSolution sol = solve(sdp, opts);
        benchmark::DoNotOptimize(sol.objective);
    }
}
BENCHMARK(SolveTermSparsityBlocks);
