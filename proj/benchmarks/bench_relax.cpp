#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "momentsos/graph.hpp"
#include "momentsos/relax.hpp"

using namespace momentsos;

static void BuildDenseOrderTwo(benchmark::State& state) {
    POP pop = fixtures::six_var_network();
    for (auto _ : state) {
        BlockSDP sdp = build_dense(pop, 2);
        benchmark::DoNotOptimize(sdp.num_moment_vars());
    }
}
BENCHMARK(BuildDenseOrderTwo);

static void BuildCliqueOrderTwo(benchmark::State& state) {
    POP pop = fixtures::six_var_network();
    CsOptions opts;
    opts.extension = ChordalStrategy::min_fillin;
    for (auto _ : state) {
        BlockSDP sdp = build_cs(pop, 2, opts);
        benchmark::DoNotOptimize(sdp.num_moment_vars());
    }
}
BENCHMARK(BuildCliqueOrderTwo);

static void TermSparsityIteration(benchmark::State& state) {
    POP pop = fixtures::six_var_quartic();
    for (auto _ : state) {
        BlockSDP sdp = build_ts(pop, 2, 1, ChordalStrategy::maximal);
        benchmark::DoNotOptimize(sdp.block_sizes());
    }
}
BENCHMARK(TermSparsityIteration);

static void CliqueEnumeration(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Graph g(n);
    for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    for (int i = 0; i + 2 < n; ++i) g.add_edge(i, i + 2);
    for (auto _ : state) {
        auto dec = maximal_cliques_rip(g);
        benchmark::DoNotOptimize(dec.cliques);
    }
}
BENCHMARK(CliqueEnumeration)->Arg(16)->Arg(64);
