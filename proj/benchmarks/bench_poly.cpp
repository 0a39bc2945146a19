#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "momentsos/poly.hpp"

using namespace momentsos;

static void MultiplyDenseQuadratics(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Polynomial p(n), q(n);
    for (int i = 0; i < n; ++i) {
        Exponent e(n, 0);
        e[i] = 2;
        p.add_term(e, 1.0 + i);
        Exponent c(n, 0);
        c[i] = 1;
        c[(i + 1) % n] += 1;
        q.add_term(c, 0.5 * (i + 1));
    }
    for (auto _ : state) {
        Polynomial r = p * q;
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(MultiplyDenseQuadratics)->Arg(4)->Arg(8)->Arg(16);

static void SubstituteLinearQuartic(benchmark::State& state) {
    POP pop = fixtures::coupled_pair();
    std::vector<std::vector<double>> M{{0.2, -1.0, 0.0}, {1.0, 0.4, -0.3}, {0.0, 0.7, 1.1}};
    for (auto _ : state) {
        Polynomial r = substitute_linear(pop.objective, M);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(SubstituteLinearQuartic);

static void NewtonHalfPolytope(benchmark::State& state) {
    Polynomial f = fixtures::motzkin();
    for (auto _ : state) {
        auto half = newton_halfpolytope(f);
        benchmark::DoNotOptimize(half);
    }
}
BENCHMARK(NewtonHalfPolytope);
