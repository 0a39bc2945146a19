#pragma once

#include "momentsos/pop.hpp"

namespace fixtures {

using momentsos::Exponent;
using momentsos::Polynomial;
using momentsos::POP;

inline Polynomial poly(int n, std::vector<std::pair<Exponent, double>> terms) {
    Polynomial p(n);
    for (auto& [a, c] : terms) p.add_term(a, c);
    return p;
}

// min -(x1-1)^2 - (x1-x2)^2 - (x2-3)^2 over three unit box-type constraints;
// bounds -3 (r=1) and -2 (r=2) with minimizers (1,2), (2,2), (2,3).
inline POP two_var_three_minimizers() {
    POP pop;
    pop.n = 2;
    pop.objective = poly(2, {{{2, 0}, -2},
                             {{0, 2}, -2},
                             {{1, 1}, 2},
                             {{1, 0}, 2},
                             {{0, 1}, 6},
                             {{0, 0}, -10}});
    pop.inequalities.push_back(poly(2, {{{2, 0}, -1}, {{1, 0}, 2}, {{0, 0}, 0}}));
    pop.inequalities.push_back(poly(2, {{{2, 0}, -1}, {{1, 1}, 2}, {{0, 2}, -1}, {{0, 0}, 1}}));
    pop.inequalities.push_back(poly(2, {{{0, 2}, -1}, {{0, 1}, 6}, {{0, 0}, -8}}));
    return pop;
}

// Six-variable network objective with per-variable box constraints
// (6.36 - xi)(xi - 4); dense bounds 20.755 (r=1) and 20.8608 (r=2).
inline POP six_var_network() {
    POP pop;
    pop.n = 6;
    Polynomial f(6);
    auto term = [&](std::initializer_list<int> vars, double c) {
        Exponent e(6, 0);
        for (int v : vars) e[v - 1] += 1;
        f.add_term(e, c);
    };
    term({2, 5}, 1);
    term({3, 6}, 1);
    term({2, 3}, -1);
    term({5, 6}, -1);
    term({1, 1}, -1);
    term({1, 2}, 1);
    term({1, 3}, 1);
    term({1, 4}, -1);
    term({1, 5}, 1);
    term({1, 6}, 1);
    pop.objective = f;
    for (int i = 1; i <= 6; ++i) {
        Polynomial g(6);
        Exponent sq(6, 0), lin(6, 0);
        sq[i - 1] = 2;
        lin[i - 1] = 1;
        g.add_term(sq, -1.0);
        g.add_term(lin, 10.36);
        g.add_term(Exponent(6, 0), -25.44);
        pop.inequalities.push_back(g);
    }
    return pop;
}

// The three-variable sextic whose tsp graph on the Newton basis is a 5-cycle
// plus a triangle; smallest chordal extension gives -0.00355, maximal gives 0.
inline POP lyapunov_sextic() {
    POP pop;
    pop.n = 3;
    pop.objective = poly(3, {{{2, 0, 0}, 1},
                             {{1, 1, 0}, -2},
                             {{0, 2, 0}, 3},
                             {{2, 1, 0}, -2},
                             {{2, 2, 0}, 2},
                             {{0, 1, 1}, -2},
                             {{0, 0, 2}, 6},
                             {{0, 2, 1}, 18},
                             {{0, 1, 2}, -54},
                             {{0, 2, 2}, 142}});
    return pop;
}

// 1 + x1^2 + x2^2 + x3^2 + x1 x2 + x2 x3 + x3: two cliques {x1,x2}, {x2,x3};
// per-clique tsp graphs stabilize at s = 2 under the maximal extension.
inline POP chained_quadratic() {
    POP pop;
    pop.n = 3;
    pop.objective = poly(3, {{{0, 0, 0}, 1},
                             {{2, 0, 0}, 1},
                             {{0, 2, 0}, 1},
                             {{0, 0, 2}, 1},
                             {{1, 1, 0}, 1},
                             {{0, 1, 1}, 1},
                             {{0, 0, 1}, 1}});
    return pop;
}

// 1 + sum xi^4 + x1x2x3 + x3x4x5 + x3x4x6 + x3x5x6 + x4x5x6: the six-variable
// quartic with cliques {1,2,3} and {3,4,5,6}.
inline POP six_var_quartic() {
    POP pop;
    pop.n = 6;
    Polynomial f = Polynomial::constant(6, 1.0);
    for (int i = 0; i < 6; ++i) {
        Exponent e(6, 0);
        e[i] = 4;
        f.add_term(e, 1.0);
    }
    auto cube = [&](int a, int b, int c) {
        Exponent e(6, 0);
        e[a - 1] = 1;
        e[b - 1] = 1;
        e[c - 1] = 1;
        f.add_term(e, 1.0);
    };
    cube(1, 2, 3);
    cube(3, 4, 5);
    cube(3, 4, 6);
    cube(3, 5, 6);
    cube(4, 5, 6);
    pop.objective = f;
    return pop;
}

// f1 + f2 with f1 = x1^4 + (x1 x2 - 1)^2, f2 = x2^2 x3^2 + (x3^2 - 1)^2:
// correlative sparsity loses (0.0005 vs 0.8498) while the term-sparsity
// chain recovers the dense bound at s = 2.
inline POP coupled_pair() {
    POP pop;
    pop.n = 3;
    pop.objective = poly(3, {{{4, 0, 0}, 1},
                             {{2, 2, 0}, 1},
                             {{1, 1, 0}, -2},
                             {{0, 2, 2}, 1},
                             {{0, 0, 4}, 1},
                             {{0, 0, 2}, -2},
                             {{0, 0, 0}, 2}});
    return pop;
}

inline Polynomial motzkin() {
    return poly(2, {{{4, 2}, 1}, {{2, 4}, 1}, {{0, 0}, 1}, {{2, 2}, -3}});
}

// Example 7.3 support: 1 + x1^2 x2^4 + x1^4 x2^2 + x1^4 x2^4 - x1 x2^2 - 3 x1^2 x2^2.
inline POP sign_symmetric_sextic() {
    POP pop;
    pop.n = 2;
    pop.objective = poly(2, {{{0, 0}, 1},
                             {{2, 4}, 1},
                             {{4, 2}, 1},
                             {{4, 4}, 1},
                             {{1, 2}, -1},
                             {{2, 2}, -3}});
    return pop;
}

}  // namespace fixtures
