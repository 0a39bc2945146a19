#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momentsos/basis.hpp"
#include "momentsos/graph.hpp"
#include "momentsos/poly.hpp"
#include "momentsos/pop.hpp"

namespace momentsos {

using VarId = int;

// Affine form c0 + sum_i coeff_i * v_i with combined, id-sorted terms.
struct AffineForm {
    double constant = 0.0;
    std::vector<std::pair<VarId, double>> terms;

    void add(VarId v, double c);
    bool operator==(const AffineForm& o) const = default;
};

// Symmetric matrix whose entries are affine forms in the SDP variables;
// entries stored for i <= j.
struct SymbolicMatrix {
    int dim = 0;
    std::map<std::pair<int, int>, AffineForm> entries;

    // provenance
    int constraint = -1;  // -1: moment block, j >= 0: constraint index
    int clique = -1;      // -1: no clique decomposition
    std::vector<Exponent> row_labels;

    const AffineForm* entry(int i, int j) const;
    void set(int i, int j, AffineForm f);
};

struct IllFormedError : std::runtime_error {
    explicit IllFormedError(const std::string& what) : std::runtime_error(what) {}
};

// A linear objective over registered variables, PSD block constraints with
// affine entries, and affine equalities (== 0). Moment variables are keyed
// globally by exponent, so overlap consistency between cliques holds by
// construction; auxiliary variables (Gram entries of SOS feasibility
// programs) share the same id space without an exponent key.
class BlockSDP {
  public:
    BlockSDP() = default;
    explicit BlockSDP(int n_poly_vars) : n_(n_poly_vars) {}

    int n() const { return n_; }
    int num_vars() const { return static_cast<int>(names_.size()); }
    int num_moment_vars() const { return static_cast<int>(moment_index_.size()); }

    VarId moment(const Exponent& a);                 // get-or-create y_a
    std::optional<VarId> find_moment(const Exponent& a) const;
    VarId free_variable(const std::string& name);    // non-moment variable
    const std::optional<Exponent>& exponent_of(VarId v) const { return names_[v].exponent; }
    const std::map<Exponent, VarId, GrlexLess>& moment_index() const { return moment_index_; }

    AffineForm linear_functional(const Polynomial& p);  // L_y(p), creating vars

    void set_objective(AffineForm f) { objective_ = std::move(f); }
    const AffineForm& objective() const { return objective_; }

    void add_block(SymbolicMatrix m) { blocks_.push_back(std::move(m)); }
    const std::vector<SymbolicMatrix>& blocks() const { return blocks_; }
    void replace_blocks(std::vector<SymbolicMatrix> blocks) { blocks_ = std::move(blocks); }

    void add_equality(const AffineForm& f);  // deduplicated
    const std::vector<AffineForm>& equalities() const { return equalities_; }

    void require_unit_y0();  // registers y_0 and the equality y_0 = 1

    std::vector<int> block_sizes() const;
    // Block sizes grouped by clique index (-1 group first when present).
    std::map<int, std::vector<int>> block_sizes_by_clique() const;

    // Per-clique moment-variable slot counts C(n_k + 2r, 2r); populated by
    // the clique-based builders.
    std::vector<int> clique_slot_counts;
    std::vector<std::vector<int>> cliques;  // variable cliques, when any

  private:
    int n_ = 0;
    struct VarInfo {
        std::optional<Exponent> exponent;
        std::string name;
    };
    std::vector<VarInfo> names_;
    std::map<Exponent, VarId, GrlexLess> moment_index_;
    AffineForm objective_;
    std::vector<SymbolicMatrix> blocks_;
    std::vector<AffineForm> equalities_;
};

// Localizing matrix with the given row monomials: entry (b, g) equals
// sum_d g_d * y_{b+g+d}; g = 1 yields the moment matrix.
SymbolicMatrix localizing_matrix(BlockSDP& sdp, const std::vector<Exponent>& rows,
                                 const Polynomial& g);

// Dense moment relaxation of order r.
BlockSDP build_dense(const POP& pop, int r);

struct CsOptions {
    ChordalStrategy extension = ChordalStrategy::min_fillin;
    bool add_ball = false;
    double ball_radius = 1.0;  // per-variable bound used for N_k = n_k * R^2
};

// Correlative-sparsity relaxation: per-clique moment blocks on restricted
// monomials, per-constraint localizing blocks in the owning clique.
BlockSDP build_cs(const POP& pop, int r, const CsOptions& opts = {});

// State of the term-sparsity iteration: per constraint family the ascending
// graph sequence G^{(s)} together with its support-extension precursor F^{(s)}.
struct TSState {
    struct Family {
        int clique = -1;      // -1 when no clique decomposition
        int constraint = -1;  // -1: moment family (g = 1)
        Polynomial g;
        std::vector<Exponent> basis;
        Graph initial;         // G^{(0)}: the tsp graph for moment families, empty otherwise
        std::vector<Graph> G;  // G[s-1] = graph after chordal extension at sparse order s
        std::vector<Graph> F;  // F[s-1] = graph after support extension at sparse order s
    };
    std::vector<Family> families;
    std::vector<int> scalar_constraints;  // J' members handled as scalars
    std::vector<std::vector<int>> cliques;
    ChordalStrategy extension = ChordalStrategy::maximal;
    bool stabilized = false;
    int stages() const { return families.empty() ? 0 : static_cast<int>(families[0].G.size()); }
};

// Term-sparsity iteration without clique decomposition; bases[j] is the
// monomial basis of constraint j (index 0 = moment family). Pass empty
// to use the defaults (Newton half-polytope when unconstrained, standard
// bases otherwise).
TSState ts_iterate(const POP& pop, int r, const std::vector<std::vector<Exponent>>& bases,
                   ChordalStrategy extension, int s_max);

// Combined iteration on top of a clique decomposition.
TSState cs_ts_iterate(const POP& pop, int r, const std::vector<std::vector<int>>& cliques,
                      ChordalStrategy ts_extension, int s_max);

// Realize the relaxation of `state` at sparse order s (1-based; capped at
// the stabilized stage).
BlockSDP realize_ts(const POP& pop, const TSState& state, int s);

BlockSDP build_ts(const POP& pop, int r, int s, ChordalStrategy extension);
BlockSDP build_cs_ts(const POP& pop, int r, int s, ChordalStrategy cs_extension,
                     ChordalStrategy ts_extension);

// Minimal initial relaxation: per-clique orders o_k from the degrees of the
// owned objective part and constraints, on the monomial-coupling csp variant.
BlockSDP minimal_initial_relaxation(const POP& pop, int s, ChordalStrategy cs_extension,
                                    ChordalStrategy ts_extension);

// Adds a dense first-order moment block M_1(y, I_k) per clique.
BlockSDP augment_first_order(const BlockSDP& sdp, const std::vector<std::vector<int>>& cliques);

}  // namespace momentsos
