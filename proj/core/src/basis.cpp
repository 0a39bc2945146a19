#include "momentsos/basis.hpp"

#include <algorithm>
#include <functional>

#include "momentsos/relax.hpp"

namespace momentsos {

std::vector<Exponent> standard_basis(int n, int d) {
    if (n < 1 || d < 0) throw std::invalid_argument("standard_basis(n >= 1, d >= 0)");
    std::vector<Exponent> out;
    Exponent a(n, 0);
    std::function<void(int, int)> rec = [&](int i, int remaining) {
        if (i == n) {
            out.push_back(a);
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            a[i] = e;
            rec(i + 1, remaining - e);
        }
        a[i] = 0;
    };
    rec(0, d);
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

std::vector<Exponent> homogeneous_basis(int n, int d) {
    std::vector<Exponent> out;
    for (auto& a : standard_basis(n, d))
        if (degree(a) == d) out.push_back(a);
    return out;
}

BasisChain generate_basis_chain(const ExponentSet& A, const std::vector<Exponent>& B) {
    BasisChain chain;
    ExponentSet prev_doubled;  // 2 * B_{p-1}, empty for B_0
    ExponentSet prev_stage;
    while (true) {
        ExponentSet stage;
        for (auto& b : B) {
            bool keep = false;
            for (auto& g : B) {
                Exponent s(b.size());
                for (size_t i = 0; i < b.size(); ++i) s[i] = b[i] + g[i];
                if (A.count(s) || prev_doubled.count(s)) {
                    keep = true;
                    break;
                }
            }
            if (keep) stage.insert(b);
        }
        if (!chain.stages.empty() && stage == prev_stage) {
            // Record the repeated stage so the chain visibly ends B_p = B_{p+1}.
            chain.stages.emplace_back(stage.begin(), stage.end());
            chain.stabilized = true;
            break;
        }
        chain.stages.emplace_back(stage.begin(), stage.end());
        prev_stage = stage;
        prev_doubled.clear();
        for (auto& b : stage) {
            Exponent d(b.size());
            for (size_t i = 0; i < b.size(); ++i) d[i] = 2 * b[i];
            prev_doubled.insert(d);
        }
        if (chain.stages.size() > B.size() + 1) break;  // safety; chain ascends in B
    }
    return chain;
}

std::vector<Exponent> refine_constrained_basis(const POP& pop, int r, int s,
                                               ChordalStrategy extension) {
    std::vector<Exponent> basis = standard_basis(pop.n, r);
    auto constraints = pop.all_constraints();

    for (int round = 0; round < 64; ++round) {
        // Step 2 (graph recomputation) for the current basis.
        std::vector<std::vector<Exponent>> bases(constraints.size() + 1);
        bases[0] = basis;
        TSState state = ts_iterate(pop, r, bases, extension, s);

        // Step 1: the support set F gathers supp(f) and the clique sums of
        // every constraint pattern shifted by the constraint support.
        ExponentSet F = support(pop.objective);
        for (auto& fam : state.families) {
            if (fam.constraint < 0) continue;
            const Graph& pat = extension == ChordalStrategy::maximal ? fam.F.back()
                                                                     : fam.G.back();
            for (auto& clique : pattern_blocks(pat, extension)) {
                for (size_t i = 0; i < clique.size(); ++i) {
                    for (size_t j = i; j < clique.size(); ++j) {
                        for (auto& [d, c] : fam.g.terms()) {
                            Exponent sum(d.size());
                            for (size_t t = 0; t < d.size(); ++t)
                                sum[t] = fam.basis[clique[i]][t] + fam.basis[clique[j]][t] + d[t];
                            F.insert(sum);
                        }
                    }
                }
            }
        }

        auto chain = generate_basis_chain(F, basis);
        std::vector<Exponent> refined = chain.final_stage();
        if (refined == basis) return basis;
        basis = std::move(refined);
    }
    return basis;
}

}  // namespace momentsos
