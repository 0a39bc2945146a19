#include "momentsos/graph.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "momentsos/pop.hpp"

namespace momentsos {

int Graph::num_edges() const {
    int e = 0;
    for (auto& a : adj_) e += static_cast<int>(a.size());
    return e / 2;
}

void Graph::add_edge(int u, int v) {
    if (u == v) throw std::invalid_argument("self-loop");
    if (u < 0 || v < 0 || u >= n_ || v >= n_) throw std::out_of_range("edge endpoint");
    adj_[u].insert(v);
    adj_[v].insert(u);
}

bool Graph::has_edge(int u, int v) const {
    if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    return adj_[u].count(v) > 0;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> es;
    for (int u = 0; u < n_; ++u)
        for (int v : adj_[u])
            if (u < v) es.emplace_back(u, v);
    return es;
}

bool Graph::contains(const Graph& sub) const {
    if (sub.n_ != n_) return false;
    for (auto [u, v] : sub.edges())
        if (!has_edge(u, v)) return false;
    return true;
}

std::vector<std::vector<int>> Graph::connected_components() const {
    std::vector<int> comp(n_, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n_; ++s) {
        if (comp[s] >= 0) continue;
        int id = static_cast<int>(out.size());
        out.emplace_back();
        std::vector<int> stack{s};
        comp[s] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            out[id].push_back(u);
            for (int v : adj_[u]) {
                if (comp[v] < 0) {
                    comp[v] = id;
                    stack.push_back(v);
                }
            }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

std::vector<std::vector<int>> Graph::biconnected_components() const {
    // Hopcroft-Tarjan: DFS collecting edge stacks; each popped edge set is a
    // block. Isolated vertices become singleton blocks.
    std::vector<int> num(n_, -1), low(n_, 0);
    std::vector<std::vector<int>> blocks;
    std::vector<std::pair<int, int>> edge_stack;
    int counter = 0;

    std::function<void(int, int)> dfs = [&](int u, int parent) {
        num[u] = low[u] = counter++;
        for (int v : adj_[u]) {
            if (v == parent) continue;
            if (num[v] < 0) {
                edge_stack.emplace_back(u, v);
                dfs(v, u);
                low[u] = std::min(low[u], low[v]);
                if (low[v] >= num[u]) {
                    std::set<int> verts;
                    while (true) {
                        auto [a, b] = edge_stack.back();
                        edge_stack.pop_back();
                        verts.insert(a);
                        verts.insert(b);
                        if (a == u && b == v) break;
                    }
                    blocks.emplace_back(verts.begin(), verts.end());
                }
            } else if (num[v] < num[u]) {
                edge_stack.emplace_back(u, v);
                low[u] = std::min(low[u], num[v]);
            }
        }
    };

    for (int s = 0; s < n_; ++s) {
        if (num[s] < 0) {
            dfs(s, -1);
            if (adj_[s].empty()) blocks.push_back({s});
        }
    }
    return blocks;
}

namespace {

// Greedy elimination; score(u, adjacency) returns degree or fill count.
// Ties broken toward the highest node index, which reproduces the standard
// worked extensions (one fill edge {3,5} on the 6-node example graph).
Graph eliminate_greedy(const Graph& g, bool min_fill) {
    const int n = g.num_nodes();
    std::vector<std::set<int>> adj(n);
    for (int u = 0; u < n; ++u) adj[u] = g.neighbors(u);
    std::vector<bool> gone(n, false);
    Graph out = g;

    auto fill_count = [&](int u) {
        int fill = 0;
        std::vector<int> nb(adj[u].begin(), adj[u].end());
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j)
                if (!adj[nb[i]].count(nb[j])) ++fill;
        return fill;
    };

    for (int step = 0; step < n; ++step) {
        int best = -1, best_score = 0;
        for (int u = 0; u < n; ++u) {
            if (gone[u]) continue;
            int score = min_fill ? fill_count(u) : static_cast<int>(adj[u].size());
            if (best < 0 || score < best_score || (score == best_score && u > best)) {
                best = u;
                best_score = score;
            }
        }
        std::vector<int> nb(adj[best].begin(), adj[best].end());
        for (size_t i = 0; i < nb.size(); ++i) {
            for (size_t j = i + 1; j < nb.size(); ++j) {
                if (!adj[nb[i]].count(nb[j])) {
                    adj[nb[i]].insert(nb[j]);
                    adj[nb[j]].insert(nb[i]);
                    out.add_edge(nb[i], nb[j]);
                }
            }
        }
        for (int v : nb) adj[v].erase(best);
        adj[best].clear();
        gone[best] = true;
    }
    return out;
}

}  // namespace

Graph chordal_extension(const Graph& g, ChordalStrategy strategy) {
    switch (strategy) {
        case ChordalStrategy::maximal: {
            Graph out = g;
            for (auto& comp : g.connected_components())
                for (size_t i = 0; i < comp.size(); ++i)
                    for (size_t j = i + 1; j < comp.size(); ++j)
                        if (!out.has_edge(comp[i], comp[j])) out.add_edge(comp[i], comp[j]);
            return out;
        }
        case ChordalStrategy::min_degree:
            return eliminate_greedy(g, false);
        case ChordalStrategy::min_fillin:
            return eliminate_greedy(g, true);
    }
    throw std::logic_error("unknown strategy");
}

std::vector<int> mcs_order(const Graph& g) {
    const int n = g.num_nodes();
    std::vector<int> weight(n, 0), order;
    std::vector<bool> chosen(n, false);
    order.reserve(n);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int u = 0; u < n; ++u)
            if (!chosen[u] && (best < 0 || weight[u] > weight[best])) best = u;
        chosen[best] = true;
        order.push_back(best);
        for (int v : g.neighbors(best))
            if (!chosen[v]) ++weight[v];
    }
    return order;
}

bool is_chordal(const Graph& g) {
    const int n = g.num_nodes();
    auto order = mcs_order(g);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;
    // order reversed is a candidate perfect elimination ordering: check the
    // zero-fill property on earlier neighbors.
    for (int i = 0; i < n; ++i) {
        int u = order[i];
        std::vector<int> prev;  // neighbors visited before u
        for (int v : g.neighbors(u))
            if (pos[v] < i) prev.push_back(v);
        if (prev.empty()) continue;
        // The most recently visited one must be adjacent to all the others.
        int w = prev[0];
        for (int v : prev)
            if (pos[v] > pos[w]) w = v;
        for (int v : prev)
            if (v != w && !g.has_edge(w, v)) return false;
    }
    return true;
}

bool rip_predicate(const std::vector<std::vector<int>>& cliques) {
    std::set<int> seen;
    for (size_t k = 0; k < cliques.size(); ++k) {
        if (k > 0) {
            std::set<int> inter;
            for (int v : cliques[k])
                if (seen.count(v)) inter.insert(v);
            bool ok = inter.empty();
            for (size_t i = 0; i < k && !ok; ++i) {
                ok = std::includes(cliques[i].begin(), cliques[i].end(), inter.begin(),
                                   inter.end());
            }
            if (!ok) return false;
        }
        seen.insert(cliques[k].begin(), cliques[k].end());
    }
    return true;
}

CliqueDecomposition maximal_cliques_rip(const Graph& g) {
    if (!is_chordal(g)) throw NotChordalError();
    const int n = g.num_nodes();
    auto order = mcs_order(g);
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;

    // Candidate cliques: v together with its earlier-MCS neighbors. For a
    // chordal graph every maximal clique appears among these; keep the
    // maximal candidates in MCS discovery order, which satisfies the RIP
    // within each connected component.
    std::vector<std::vector<int>> candidates;
    for (int i = 0; i < n; ++i) {
        int u = order[i];
        std::vector<int> cand{u};
        for (int v : g.neighbors(u))
            if (pos[v] < i) cand.push_back(v);
        std::sort(cand.begin(), cand.end());
        candidates.push_back(cand);
    }
    std::vector<std::vector<int>> cliques;
    for (size_t i = 0; i < candidates.size(); ++i) {
        bool dominated = false;
        for (size_t j = 0; j < candidates.size() && !dominated; ++j) {
            if (i == j || candidates[j].size() < candidates[i].size()) continue;
            if (candidates[j] == candidates[i] && j < i) dominated = true;
            if (candidates[j].size() > candidates[i].size() &&
                std::includes(candidates[j].begin(), candidates[j].end(), candidates[i].begin(),
                              candidates[i].end()))
                dominated = true;
        }
        if (!dominated) cliques.push_back(candidates[i]);
    }

    // Concatenate per-component orderings: stable-partition cliques by the
    // component of their first node, preserving MCS discovery order.
    auto comps = g.connected_components();
    std::vector<int> comp_of(n, 0);
    for (size_t c = 0; c < comps.size(); ++c)
        for (int v : comps[c]) comp_of[v] = static_cast<int>(c);
    std::vector<std::vector<int>> ordered;
    for (size_t c = 0; c < comps.size(); ++c)
        for (auto& cl : cliques)
            if (comp_of[cl[0]] == static_cast<int>(c)) ordered.push_back(cl);

    CliqueDecomposition out;
    out.cliques = std::move(ordered);
    out.rip_holds = rip_predicate(out.cliques);
    return out;
}

std::vector<std::vector<int>> pattern_blocks(const Graph& g, ChordalStrategy strategy) {
    if (strategy == ChordalStrategy::maximal) {
        auto blocks = g.biconnected_components();
        for (auto& b : blocks) std::sort(b.begin(), b.end());
        return blocks;
    }
    Graph ext = chordal_extension(g, strategy);
    return maximal_cliques_rip(ext).cliques;
}

Graph csp_graph(const POP& pop, int r) {
    const int rmin = pop.r_min();
    if (r < rmin) throw OrderTooLowError();
    const int n = pop.n;
    Graph g(n);

    auto connect_support = [&](const Exponent& a) {
        auto vars = variables_of(a);
        for (size_t i = 0; i < vars.size(); ++i)
            for (size_t j = i + 1; j < vars.size(); ++j)
                if (!g.has_edge(vars[i], vars[j])) g.add_edge(vars[i], vars[j]);
    };
    auto connect_all = [&](const Polynomial& p) {
        std::set<int> vars;
        for (auto& [a, c] : p.terms())
            for (int v : variables_of(a)) vars.insert(v);
        std::vector<int> vv(vars.begin(), vars.end());
        for (size_t i = 0; i < vv.size(); ++i)
            for (size_t j = i + 1; j < vv.size(); ++j)
                if (!g.has_edge(vv[i], vv[j])) g.add_edge(vv[i], vv[j]);
    };

    for (auto& [a, c] : pop.objective.terms()) connect_support(a);

    auto constraints = pop.all_constraints();
    auto jprime = pop.j_prime(r);
    for (size_t j = 0; j < constraints.size(); ++j) {
        if (jprime.count(static_cast<int>(j))) {
            for (auto& [a, c] : constraints[j].terms()) connect_support(a);
        } else {
            connect_all(constraints[j]);
        }
    }
    return g;
}

Graph tsp_graph(const std::vector<Exponent>& basis, const ExponentSet& A) {
    const int m = static_cast<int>(basis.size());
    Graph g(m);
    ExponentSet doubled;
    for (auto& b : basis) {
        Exponent d(b.size());
        for (size_t i = 0; i < b.size(); ++i) d[i] = 2 * b[i];
        doubled.insert(d);
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            Exponent s(basis[i].size());
            for (size_t k = 0; k < s.size(); ++k) s[k] = basis[i][k] + basis[j][k];
            if (A.count(s) || doubled.count(s)) g.add_edge(i, j);
        }
    }
    return g;
}

}  // namespace momentsos
