#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "momentsos/poly.hpp"

namespace momentsos {

// Simple undirected graph on nodes 0..n-1, no self-loops. Labels (variable
// indices for csp graphs, monomials for tsp graphs) are kept by the callers.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n) : n_(n), adj_(n) {}

    int num_nodes() const { return n_; }
    int num_edges() const;
    void add_edge(int u, int v);
    bool has_edge(int u, int v) const;
    const std::set<int>& neighbors(int u) const { return adj_[u]; }
    std::vector<std::pair<int, int>> edges() const;

    bool contains(const Graph& sub) const;
    bool operator==(const Graph& other) const { return n_ == other.n_ && adj_ == other.adj_; }

    std::vector<std::vector<int>> connected_components() const;

    // Vertex sets of the biconnected components (edge blocks); isolated nodes
    // are returned as singletons.
    std::vector<std::vector<int>> biconnected_components() const;

  private:
    int n_ = 0;
    std::vector<std::set<int>> adj_;
};

enum class ChordalStrategy { maximal, min_degree, min_fillin };

// Chordal extension of G: `maximal` completes every connected component,
// the two heuristics run greedy elimination and add the fill edges.
Graph chordal_extension(const Graph& g, ChordalStrategy strategy);

// Maximum-cardinality search; returns an ordering that is a perfect
// elimination ordering iff the graph is chordal.
std::vector<int> mcs_order(const Graph& g);
bool is_chordal(const Graph& g);

struct CliqueDecomposition {
    std::vector<std::vector<int>> cliques;  // ordered to satisfy the RIP
    bool rip_holds = false;
};

struct NotChordalError : std::runtime_error {
    NotChordalError() : std::runtime_error("graph is not chordal") {}
};

// All maximal cliques of a chordal graph, ordered so that the running
// intersection property holds (per connected component, concatenated).
// Throws NotChordalError otherwise.
CliqueDecomposition maximal_cliques_rip(const Graph& g);

// Explicit RIP predicate on an ordered clique list.
bool rip_predicate(const std::vector<std::vector<int>>& cliques);

// Clique cover used to realize a PSD-completable pattern block-wise: the
// maximal cliques of a chordal extension of g chosen per strategy. For the
// maximal strategy the blocks are the completed biconnected components of g,
// a chordal refinement whose block sizes match the per-component counts used
// throughout; the heuristics use the maximal cliques of their extension.
std::vector<std::vector<int>> pattern_blocks(const Graph& g, ChordalStrategy strategy);

struct POP;  // defined in pop.hpp

// Correlative sparsity pattern graph of a POP at relaxation order r: nodes
// are variables; edges join variables sharing a monomial of the objective
// (or of a constraint with d_j = r when r = r_min), or appearing anywhere in
// a common constraint otherwise.
Graph csp_graph(const POP& pop, int r);

// Term sparsity pattern graph: nodes are the basis monomials, with an edge
// {b, g} iff b + g lies in A or 2*basis.
Graph tsp_graph(const std::vector<Exponent>& basis, const ExponentSet& A);

}  // namespace momentsos
