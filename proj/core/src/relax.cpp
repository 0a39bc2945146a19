#include "momentsos/relax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace momentsos {

void AffineForm::add(VarId v, double c) {
    if (c == 0.0) return;
    auto it = std::lower_bound(terms.begin(), terms.end(), v,
                               [](const auto& t, VarId id) { return t.first < id; });
    if (it != terms.end() && it->first == v) {
        it->second += c;
        if (std::abs(it->second) < 1e-15) terms.erase(it);
    } else {
        terms.insert(it, {v, c});
    }
}

const AffineForm* SymbolicMatrix::entry(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = entries.find({i, j});
    return it == entries.end() ? nullptr : &it->second;
}

void SymbolicMatrix::set(int i, int j, AffineForm f) {
    if (i > j) std::swap(i, j);
    entries[{i, j}] = std::move(f);
}

VarId BlockSDP::moment(const Exponent& a) {
    auto it = moment_index_.find(a);
    if (it != moment_index_.end()) return it->second;
    VarId id = static_cast<VarId>(names_.size());
    names_.push_back({a, ""});
    moment_index_.emplace(a, id);
    return id;
}

std::optional<VarId> BlockSDP::find_moment(const Exponent& a) const {
    auto it = moment_index_.find(a);
    if (it == moment_index_.end()) return std::nullopt;
    return it->second;
}

VarId BlockSDP::free_variable(const std::string& name) {
    VarId id = static_cast<VarId>(names_.size());
    names_.push_back({std::nullopt, name});
    return id;
}

AffineForm BlockSDP::linear_functional(const Polynomial& p) {
    AffineForm f;
    for (auto& [a, c] : p.terms()) f.add(moment(a), c);
    return f;
}

void BlockSDP::add_equality(const AffineForm& f) {
    if (f.terms.empty() && std::abs(f.constant) < 1e-12) return;
    for (auto& e : equalities_)
        if (e == f) return;
    equalities_.push_back(f);
}

void BlockSDP::require_unit_y0() {
    AffineForm f;
    f.constant = -1.0;
    f.add(moment(Exponent(n_, 0)), 1.0);
    add_equality(f);
}

std::vector<int> BlockSDP::block_sizes() const {
    std::vector<int> sizes;
    sizes.reserve(blocks_.size());
    for (auto& b : blocks_) sizes.push_back(b.dim);
    return sizes;
}

std::map<int, std::vector<int>> BlockSDP::block_sizes_by_clique() const {
    std::map<int, std::vector<int>> out;
    for (auto& b : blocks_) out[b.clique].push_back(b.dim);
    return out;
}

SymbolicMatrix localizing_matrix(BlockSDP& sdp, const std::vector<Exponent>& rows,
                                 const Polynomial& g) {
    SymbolicMatrix m;
    m.dim = static_cast<int>(rows.size());
    m.row_labels = rows;
    for (int i = 0; i < m.dim; ++i) {
        for (int j = i; j < m.dim; ++j) {
            AffineForm f;
            for (auto& [d, c] : g.terms()) {
                Exponent s(d.size());
                for (size_t k = 0; k < d.size(); ++k) s[k] = rows[i][k] + rows[j][k] + d[k];
                f.add(sdp.moment(s), c);
            }
            m.set(i, j, std::move(f));
        }
    }
    return m;
}

namespace {

// Restriction of the standard basis to a variable clique, embedded in N^n.
std::vector<Exponent> clique_basis(int n, const std::vector<int>& vars, int d) {
    auto small = standard_basis(static_cast<int>(vars.size()), d);
    std::vector<Exponent> out;
    out.reserve(small.size());
    for (auto& a : small) {
        Exponent e(n, 0);
        for (size_t i = 0; i < vars.size(); ++i) e[vars[i]] = a[i];
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(), GrlexLess{});
    return out;
}

long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Flatten a vanishing localizing matrix into scalar equalities, deduplicated.
void add_vanishing_block(BlockSDP& sdp, const std::vector<Exponent>& rows, const Polynomial& h) {
    SymbolicMatrix m = localizing_matrix(sdp, rows, h);
    for (auto& [ij, f] : m.entries) sdp.add_equality(f);
}

// Assign non-J' constraints to the smallest covering clique (ties broken by
// clique index); constraints covered by no clique fall back to J'.
struct Assignment {
    std::vector<std::vector<int>> owned;  // per clique: constraint indices
    std::set<int> scalars;                // J' plus uncovered constraints
};

Assignment assign_constraints(const POP& pop, int r, const std::vector<std::vector<int>>& cliques,
                              bool jprime_at_rmin) {
    Assignment out;
    out.owned.resize(cliques.size());
    auto constraints = pop.all_constraints();
    std::set<int> jprime = jprime_at_rmin ? pop.j_prime(r) : std::set<int>{};
    for (int j = 0; j < static_cast<int>(constraints.size()); ++j) {
        if (jprime.count(j)) {
            out.scalars.insert(j);
            continue;
        }
        std::set<int> vars;
        for (auto& [a, c] : constraints[j].terms())
            for (int v : variables_of(a)) vars.insert(v);
        int best = -1;
        for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
            bool covers = std::includes(cliques[k].begin(), cliques[k].end(), vars.begin(),
                                        vars.end());
            if (covers && (best < 0 || cliques[k].size() < cliques[best].size())) best = k;
        }
        if (best < 0)
            out.scalars.insert(j);
        else
            out.owned[best].push_back(j);
    }
    return out;
}

void add_scalar_constraint(BlockSDP& sdp, const POP& pop, int j) {
    auto constraints = pop.all_constraints();
    AffineForm f = sdp.linear_functional(constraints[j]);
    if (pop.is_equality(j)) {
        sdp.add_equality(f);
    } else {
        SymbolicMatrix m;
        m.dim = 1;
        m.constraint = j;
        m.row_labels = {Exponent(pop.n, 0)};
        m.set(0, 0, std::move(f));
        sdp.add_block(std::move(m));
    }
}

ExponentSet global_support(const POP& pop) {
    ExponentSet A = support(pop.objective);
    for (auto& g : pop.all_constraints())
        for (auto& [a, c] : g.terms()) A.insert(a);
    return A;
}

// supp(G) = {b + g : b = g or {b, g} an edge} over the labeled nodes.
ExponentSet graph_support(const Graph& g, const std::vector<Exponent>& labels) {
    ExponentSet s;
    auto sum = [](const Exponent& a, const Exponent& b) {
        Exponent r(a.size());
        for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
        return r;
    };
    for (int u = 0; u < g.num_nodes(); ++u) s.insert(sum(labels[u], labels[u]));
    for (auto [u, v] : g.edges()) s.insert(sum(labels[u], labels[v]));
    return s;
}

}  // namespace

BlockSDP build_dense(const POP& pop, int r) {
    if (r < pop.r_min()) throw OrderTooLowError();
    BlockSDP sdp(pop.n);
    sdp.require_unit_y0();

    SymbolicMatrix moment = localizing_matrix(sdp, standard_basis(pop.n, r), Polynomial::constant(pop.n, 1.0));
    sdp.add_block(std::move(moment));

    auto constraints = pop.all_constraints();
    for (int j = 0; j < static_cast<int>(constraints.size()); ++j) {
        auto rows = standard_basis(pop.n, r - pop.d_of(j));
        if (pop.is_equality(j)) {
            add_vanishing_block(sdp, rows, constraints[j]);
        } else {
            SymbolicMatrix m = localizing_matrix(sdp, rows, constraints[j]);
            m.constraint = j;
            sdp.add_block(std::move(m));
        }
    }
    sdp.set_objective(sdp.linear_functional(pop.objective));
    return sdp;
}

BlockSDP build_cs(const POP& pop, int r, const CsOptions& opts) {
    if (r < pop.r_min()) throw OrderTooLowError();
    Graph csp = csp_graph(pop, r);
    Graph ext = chordal_extension(csp, opts.extension);
    auto cliques = maximal_cliques_rip(ext).cliques;

    BlockSDP sdp(pop.n);
    sdp.require_unit_y0();
    sdp.cliques = cliques;

    auto assignment = assign_constraints(pop, r, cliques, /*jprime_at_rmin=*/true);
    auto constraints = pop.all_constraints();

    for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
        SymbolicMatrix m = localizing_matrix(sdp, clique_basis(pop.n, cliques[k], r),
                                             Polynomial::constant(pop.n, 1.0));
        m.clique = k;
        sdp.add_block(std::move(m));
        for (int j : assignment.owned[k]) {
            auto rows = clique_basis(pop.n, cliques[k], r - pop.d_of(j));
            if (pop.is_equality(j)) {
                add_vanishing_block(sdp, rows, constraints[j]);
            } else {
                SymbolicMatrix lm = localizing_matrix(sdp, rows, constraints[j]);
                lm.constraint = j;
                lm.clique = k;
                sdp.add_block(std::move(lm));
            }
        }
        if (opts.add_ball) {
            Polynomial ball =
                Polynomial::constant(pop.n, cliques[k].size() * opts.ball_radius * opts.ball_radius);
            for (int i : cliques[k]) {
                Exponent sq(pop.n, 0);
                sq[i] = 2;
                ball.add_term(sq, -1.0);
            }
            SymbolicMatrix bm = localizing_matrix(sdp, clique_basis(pop.n, cliques[k], r - 1), ball);
            bm.clique = k;
            sdp.add_block(std::move(bm));
        }
        sdp.clique_slot_counts.push_back(
            static_cast<int>(binom(static_cast<int>(cliques[k].size()) + 2 * r, 2 * r)));
    }
    for (int j : assignment.scalars) add_scalar_constraint(sdp, pop, j);
    sdp.set_objective(sdp.linear_functional(pop.objective));
    return sdp;
}

namespace {

// Shared iteration engine. Computes stages 1..s_max of the support/chordal
// extension sequence; stops early (and flags it) when two consecutive stages
// coincide for every family.
void iterate_families(TSState& state, int s_max) {
    auto minkowski = [](const ExponentSet& A, const ExponentSet& B) {
        ExponentSet out;
        for (auto& a : A)
            for (auto& b : B) {
                Exponent r(a.size());
                for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
                out.insert(r);
            }
        return out;
    };

    while (state.stages() < s_max && !state.stabilized) {
        int stage = state.stages();  // about to compute stage+1
        // C^{(s-1)} = union over families of supp(g) + supp(G^{(s-1)}).
        ExponentSet C;
        for (auto& fam : state.families) {
            const Graph& prev = stage == 0 ? fam.initial : fam.G.back();
            if (prev.num_nodes() == 0) continue;
            ExponentSet gs = graph_support(prev, fam.basis);
            for (auto& e : minkowski(support(fam.g), gs)) C.insert(e);
        }

        bool all_equal = stage >= 1;
        std::vector<Graph> next_f, next_g;
        for (auto& fam : state.families) {
            const int nb = static_cast<int>(fam.basis.size());
            Graph F(nb);
            ExponentSet gsupp = support(fam.g);
            for (int i = 0; i < nb; ++i) {
                for (int j = i + 1; j < nb; ++j) {
                    bool hit = false;
                    for (auto& d : gsupp) {
                        Exponent sum(d.size());
                        for (size_t k = 0; k < d.size(); ++k)
                            sum[k] = fam.basis[i][k] + fam.basis[j][k] + d[k];
                        if (C.count(sum)) {
                            hit = true;
                            break;
                        }
                    }
                    if (hit) F.add_edge(i, j);
                }
            }
            Graph G = chordal_extension(F, state.extension);
            if (all_equal && !(G == fam.G.back())) all_equal = false;
            next_f.push_back(std::move(F));
            next_g.push_back(std::move(G));
        }

        if (all_equal) {
            state.stabilized = true;
            return;
        }
        for (size_t f = 0; f < state.families.size(); ++f) {
            state.families[f].F.push_back(std::move(next_f[f]));
            state.families[f].G.push_back(std::move(next_g[f]));
        }
    }
}

std::vector<Exponent> default_moment_basis(const POP& pop, int r) {
    if (pop.inequalities.empty() && pop.equalities.empty() && r == pop.r_min()) {
        // The program represents f - b, so the constant joins the support.
        ExponentSet supp = support(pop.objective);
        supp.insert(Exponent(pop.n, 0));
        auto half = newton_halfpolytope(supp, pop.n);
        return {half.begin(), half.end()};
    }
    return standard_basis(pop.n, r);
}

}  // namespace

TSState ts_iterate(const POP& pop, int r, const std::vector<std::vector<Exponent>>& bases,
                   ChordalStrategy extension, int s_max) {
    if (r < pop.r_min()) throw OrderTooLowError();
    TSState state;
    state.extension = extension;
    auto constraints = pop.all_constraints();
    ExponentSet A = global_support(pop);

    TSState::Family moment_family;
    moment_family.constraint = -1;
    moment_family.g = Polynomial::constant(pop.n, 1.0);
    moment_family.basis =
        bases.empty() || bases[0].empty() ? default_moment_basis(pop, r) : bases[0];
    moment_family.initial = tsp_graph(moment_family.basis, A);
    state.families.push_back(std::move(moment_family));

    for (int j = 0; j < static_cast<int>(constraints.size()); ++j) {
        TSState::Family fam;
        fam.constraint = j;
        fam.g = constraints[j];
        fam.basis = (static_cast<int>(bases.size()) > j + 1 && !bases[j + 1].empty())
                        ? bases[j + 1]
                        : standard_basis(pop.n, r - pop.d_of(j));
        state.families.push_back(std::move(fam));
    }

    iterate_families(state, s_max);
    return state;
}

TSState cs_ts_iterate(const POP& pop, int r, const std::vector<std::vector<int>>& cliques,
                      ChordalStrategy ts_extension, int s_max) {
    if (r < pop.r_min()) throw OrderTooLowError();
    TSState state;
    state.extension = ts_extension;
    state.cliques = cliques;
    auto assignment = assign_constraints(pop, r, cliques, /*jprime_at_rmin=*/true);
    state.scalar_constraints.assign(assignment.scalars.begin(), assignment.scalars.end());
    auto constraints = pop.all_constraints();
    ExponentSet A = global_support(pop);

    for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
        ExponentSet Ak;
        for (auto& a : A) {
            auto vars = variables_of(a);
            if (std::includes(cliques[k].begin(), cliques[k].end(), vars.begin(), vars.end()))
                Ak.insert(a);
        }
        TSState::Family fam;
        fam.clique = k;
        fam.constraint = -1;
        fam.g = Polynomial::constant(pop.n, 1.0);
        fam.basis = clique_basis(pop.n, cliques[k], r);
        fam.initial = tsp_graph(fam.basis, Ak);
        state.families.push_back(std::move(fam));

        for (int j : assignment.owned[k]) {
            TSState::Family cf;
            cf.clique = k;
            cf.constraint = j;
            cf.g = constraints[j];
            cf.basis = clique_basis(pop.n, cliques[k], r - pop.d_of(j));
            state.families.push_back(std::move(cf));
        }
    }

    iterate_families(state, s_max);
    return state;
}

BlockSDP realize_ts(const POP& pop, const TSState& state, int s) {
    if (state.stages() == 0) throw std::invalid_argument("empty TS state");
    int stage = std::min(s, state.stages());
    if (stage < 1) throw std::invalid_argument("sparse order must be >= 1");

    BlockSDP sdp(pop.n);
    sdp.require_unit_y0();
    sdp.cliques = state.cliques;

    for (auto& fam : state.families) {
        if (static_cast<int>(fam.G.size()) < stage) continue;
        const Graph& pattern = state.extension == ChordalStrategy::maximal
                                   ? fam.F[stage - 1]
                                   : fam.G[stage - 1];
        auto blocks = pattern_blocks(pattern, state.extension);
        bool equality = fam.constraint >= 0 && pop.is_equality(fam.constraint);
        for (auto& blk : blocks) {
            std::vector<Exponent> rows;
            rows.reserve(blk.size());
            for (int v : blk) rows.push_back(fam.basis[v]);
            if (equality) {
                add_vanishing_block(sdp, rows, fam.g);
            } else {
                SymbolicMatrix m = localizing_matrix(sdp, rows, fam.g);
                m.constraint = fam.constraint;
                m.clique = fam.clique;
                sdp.add_block(std::move(m));
            }
        }
    }
    for (int j : state.scalar_constraints) add_scalar_constraint(sdp, pop, j);

    sdp.set_objective(sdp.linear_functional(pop.objective));
    return sdp;
}

BlockSDP build_ts(const POP& pop, int r, int s, ChordalStrategy extension) {
    if (s < 1) throw std::invalid_argument("sparse order must be >= 1");
    TSState state = ts_iterate(pop, r, {}, extension, s);
    return realize_ts(pop, state, s);
}

BlockSDP build_cs_ts(const POP& pop, int r, int s, ChordalStrategy cs_extension,
                     ChordalStrategy ts_extension) {
    if (s < 1) throw std::invalid_argument("sparse order must be >= 1");
    Graph csp = csp_graph(pop, r);
    Graph ext = chordal_extension(csp, cs_extension);
    auto cliques = maximal_cliques_rip(ext).cliques;
    TSState state = cs_ts_iterate(pop, r, cliques, ts_extension, s);
    BlockSDP sdp = realize_ts(pop, state, s);
    for (auto& clique : cliques)
        sdp.clique_slot_counts.push_back(
            static_cast<int>(binom(static_cast<int>(clique.size()) + 2 * r, 2 * r)));
    return sdp;
}

BlockSDP minimal_initial_relaxation(const POP& pop, int s, ChordalStrategy cs_extension,
                                    ChordalStrategy ts_extension) {
    if (s < 1) throw std::invalid_argument("sparse order must be >= 1");
    // Monomial-coupling csp variant: edges only from shared monomials.
    ExponentSet A = global_support(pop);
    Graph g(pop.n);
    for (auto& a : A) {
        auto vars = variables_of(a);
        for (size_t i = 0; i < vars.size(); ++i)
            for (size_t j = i + 1; j < vars.size(); ++j)
                if (!g.has_edge(vars[i], vars[j])) g.add_edge(vars[i], vars[j]);
    }
    Graph ext = chordal_extension(g, cs_extension);
    auto cliques = maximal_cliques_rip(ext).cliques;

    auto constraints = pop.all_constraints();
    Assignment assignment = assign_constraints(pop, /*r=*/-1, cliques, /*jprime_at_rmin=*/false);

    // Objective decomposition: each monomial owned by its smallest covering
    // clique; per-clique orders from owned parts and constraints.
    std::vector<int> o(cliques.size(), 1);
    for (auto& [a, c] : pop.objective.terms()) {
        auto vars = variables_of(a);
        int best = -1;
        for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
            bool covers =
                std::includes(cliques[k].begin(), cliques[k].end(), vars.begin(), vars.end());
            if (covers && (best < 0 || cliques[k].size() < cliques[best].size())) best = k;
        }
        if (best >= 0) o[best] = std::max(o[best], (degree(a) + 1) / 2);
    }
    for (int k = 0; k < static_cast<int>(cliques.size()); ++k)
        for (int j : assignment.owned[k]) o[k] = std::max(o[k], pop.d_of(j));

    TSState state;
    state.extension = ts_extension;
    state.cliques = cliques;
    state.scalar_constraints.assign(assignment.scalars.begin(), assignment.scalars.end());
    for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
        ExponentSet Ak;
        for (auto& a : A) {
            auto vars = variables_of(a);
            if (std::includes(cliques[k].begin(), cliques[k].end(), vars.begin(), vars.end()))
                Ak.insert(a);
        }
        TSState::Family fam;
        fam.clique = k;
        fam.constraint = -1;
        fam.g = Polynomial::constant(pop.n, 1.0);
        fam.basis = clique_basis(pop.n, cliques[k], o[k]);
        fam.initial = tsp_graph(fam.basis, Ak);
        state.families.push_back(std::move(fam));
        for (int j : assignment.owned[k]) {
            TSState::Family cf;
            cf.clique = k;
            cf.constraint = j;
            cf.g = constraints[j];
            cf.basis = clique_basis(pop.n, cliques[k], o[k] - pop.d_of(j));
            state.families.push_back(std::move(cf));
        }
    }
    iterate_families(state, s);
    BlockSDP sdp = realize_ts(pop, state, s);
    for (int k = 0; k < static_cast<int>(cliques.size()); ++k)
        sdp.clique_slot_counts.push_back(
            static_cast<int>(binom(static_cast<int>(cliques[k].size()) + 2 * o[k], 2 * o[k])));
    return sdp;
}

BlockSDP augment_first_order(const BlockSDP& sdp, const std::vector<std::vector<int>>& cliques) {
    BlockSDP out = sdp;
    for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
        std::vector<Exponent> rows = clique_basis(out.n(), cliques[k], 1);
        SymbolicMatrix m = localizing_matrix(out, rows, Polynomial::constant(out.n(), 1.0));
        m.clique = k;
        out.add_block(std::move(m));
    }
    return out;
}

}  // namespace momentsos
