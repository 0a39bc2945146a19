#pragma once

#include <vector>

#include "momentsos/graph.hpp"
#include "momentsos/poly.hpp"
#include "momentsos/pop.hpp"

namespace momentsos {

// All exponents of degree <= d in n variables, graded-lex ordered;
// size C(n+d, d).
std::vector<Exponent> standard_basis(int n, int d);

// Exponents of total degree exactly d, graded-lex ordered.
std::vector<Exponent> homogeneous_basis(int n, int d);

// Ascending chain B_1 <= B_2 <= ... produced by the basis-generation
// recurrence B_p = {b in B : exists g in B with b+g in A or 2*B_{p-1}},
// iterated from B_0 = {} to a fixed point.
struct BasisChain {
    std::vector<std::vector<Exponent>> stages;
    bool stabilized = false;

    const std::vector<Exponent>& final_stage() const { return stages.back(); }
};

BasisChain generate_basis_chain(const ExponentSet& A, const std::vector<Exponent>& B);

// Constrained basis refinement: alternates basis generation on the support
// set built from the current term-sparsity cliques with recomputation of the
// TS graphs, until the basis is unchanged. Returns the refined basis for the
// moment block.
std::vector<Exponent> refine_constrained_basis(const POP& pop, int r, int s,
                                               ChordalStrategy extension);

}  // namespace momentsos
