#include "momentsos/jsr.hpp"

#include <cmath>
#include <functional>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "momentsos/basis.hpp"

namespace momentsos {

void MatrixSet::validate() const {
    if (matrices.empty()) throw std::invalid_argument("matrix set is empty");
    const auto rows = matrices[0].rows();
    for (auto& m : matrices)
        if (m.rows() != rows || m.cols() != rows)
            throw std::invalid_argument("matrices must be square of equal dimension");
}

std::string matrix_set_to_json(const MatrixSet& A) {
    nlohmann::ordered_json j;
    j["n"] = A.n();
    j["matrices"] = nlohmann::ordered_json::array();
    for (auto& m : A.matrices) {
        std::vector<double> flat;
        for (int i = 0; i < m.rows(); ++i)
            for (int k = 0; k < m.cols(); ++k) flat.push_back(m(i, k));
        j["matrices"].push_back(flat);
    }
    return j.dump();
}

MatrixSet matrix_set_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    MatrixSet A;
    for (auto& mj : j.at("matrices")) {
        auto flat = mj.get<std::vector<double>>();
        if (static_cast<int>(flat.size()) != n * n)
            throw std::invalid_argument("matrix entry count must be n*n (row-major)");
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) m(i, k) = flat[i * n + k];
        A.matrices.push_back(m);
    }
    A.validate();
    return A;
}

namespace {

// Support of (A x)^a without cancellation: the Minkowski sum over rows j of
// {g : |g| = a_j, supp(g) within the nonzero columns of row j}.
ExponentSet substituted_support(const Eigen::MatrixXd& A, const Exponent& a) {
    const int n = static_cast<int>(A.rows());
    ExponentSet acc;
    acc.insert(Exponent(n, 0));
    for (int j = 0; j < n; ++j) {
        if (a[j] == 0) continue;
        std::vector<int> cols;
        for (int k = 0; k < n; ++k)
            if (A(j, k) != 0.0) cols.push_back(k);
        if (cols.empty()) return {};  // the whole monomial image vanishes
        // All ways to distribute degree a[j] over the active columns.
        ExponentSet factor;
        Exponent cur(n, 0);
        std::function<void(size_t, int)> rec = [&](size_t idx, int remaining) {
            if (idx + 1 == cols.size()) {
                cur[cols[idx]] = remaining;
                factor.insert(cur);
                cur[cols[idx]] = 0;
                return;
            }
            for (int e = 0; e <= remaining; ++e) {
                cur[cols[idx]] = e;
                rec(idx + 1, remaining - e);
                cur[cols[idx]] = 0;
            }
        };
        rec(0, a[j]);
        ExponentSet next;
        for (auto& u : acc)
            for (auto& v : factor) {
                Exponent s(n);
                for (int k = 0; k < n; ++k) s[k] = u[k] + v[k];
                next.insert(s);
            }
        acc = std::move(next);
    }
    return acc;
}

ExponentSet propagate(const MatrixSet& A, const ExponentSet& supp) {
    ExponentSet out = supp;
    for (auto& mat : A.matrices)
        for (auto& a : supp)
            for (auto& e : substituted_support(mat, a)) out.insert(e);
    return out;
}

}  // namespace

SupportChain jsr_support_chain(const MatrixSet& A, int r, int s_max) {
    A.validate();
    if (r < 1) throw std::invalid_argument("relaxation order must be >= 1");
    const int n = A.n();

    SupportChain chain;
    for (auto& mat : A.matrices) {
        for (int row = 0; row < n; ++row) {
            bool dense = true;
            for (int col = 0; col < n; ++col) dense = dense && mat(row, col) != 0.0;
            if (dense && n > 1) chain.dense_row = true;
        }
    }

    ExponentSet stage;
    for (int i = 0; i < n; ++i) {
        Exponent e(n, 0);
        e[i] = 2 * r;
        stage.insert(e);
    }
    chain.stages.push_back(stage);
    for (int s = 1; s <= s_max; ++s) {
        ExponentSet next = propagate(A, chain.stages.back());
        if (next == chain.stages.back()) {
            chain.stabilized = true;
            break;
        }
        chain.stages.push_back(std::move(next));
    }
    return chain;
}

namespace {

// Gram feasibility block: sum over cliques of the pattern graph, entries are
// fresh variables; accumulates the coefficient-matching forms into `match`.
void add_gram(BlockSDP& sdp, const std::vector<Exponent>& basis, const Graph& pattern,
              ChordalStrategy strategy, const std::string& tag,
              std::map<Exponent, AffineForm, GrlexLess>& match, AffineForm& trace_reg) {
    auto blocks = pattern_blocks(pattern, strategy);
    int counter = 0;
    for (auto& blk : blocks) {
        const int d = static_cast<int>(blk.size());
        SymbolicMatrix sm;
        sm.dim = d;
        for (int i = 0; i < d; ++i) {
            for (int j = i; j < d; ++j) {
                VarId v = sdp.free_variable(tag + "_g" + std::to_string(counter) + "_" +
                                            std::to_string(i) + "_" + std::to_string(j));
                AffineForm f;
                f.add(v, 1.0);
                sm.set(i, j, f);
                Exponent s(basis[blk[i]].size());
                for (size_t k = 0; k < s.size(); ++k) s[k] = basis[blk[i]][k] + basis[blk[j]][k];
                match[s].add(v, i == j ? 1.0 : 2.0);
                if (i == j) trace_reg.add(v, 1.0);
            }
        }
        sdp.add_block(std::move(sm));
        ++counter;
    }
}

}  // namespace

namespace {

// Margin of membership in the sparse Gram cone: max t such that
// q - t |x|^{2r} admits a Gram matrix with the given pattern. With q fixed
// the program is solved at the scale of q's coefficients.
double gram_margin(const std::map<Exponent, double, GrlexLess>& q, int n, int r,
                   const std::vector<Exponent>& gram_basis, const Graph& pattern,
                   ChordalStrategy strategy, const SolverOptions& sopts, bool* trusted,
                   double* residual = nullptr) {
    BlockSDP sdp(n);
    VarId t = sdp.free_variable("t");
    AffineForm trace_reg;
    std::map<Exponent, AffineForm, GrlexLess> match;
    {
        auto blocks = pattern_blocks(pattern, strategy);
        int counter = 0;
        for (auto& blk : blocks) {
            const int d = static_cast<int>(blk.size());
            SymbolicMatrix sm;
            sm.dim = d;
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    VarId v = sdp.free_variable("g" + std::to_string(counter));
                    AffineForm f;
                    f.add(v, 1.0);
                    sm.set(i, j, f);
                    Exponent e(gram_basis[blk[i]].size());
                    for (size_t k = 0; k < e.size(); ++k)
                        e[k] = gram_basis[blk[i]][k] + gram_basis[blk[j]][k];
                    match[e].add(v, i == j ? 1.0 : 2.0);
                    if (i == j) trace_reg.add(v, 1.0);
                }
            }
            sdp.add_block(std::move(sm));
            ++counter;
        }
    }
    ExponentSet all;
    for (auto& [e, f] : match) all.insert(e);
    for (auto& [e, c] : q) all.insert(e);
    for (auto& e : all) {
        AffineForm f;
        auto mit = match.find(e);
        if (mit != match.end()) f = mit->second;
        auto qit = q.find(e);
        if (qit != q.end()) f.constant -= qit->second;
        bool axis = false;
        for (int i = 0; i < n && !axis; ++i) {
            Exponent ax(n, 0);
            ax[i] = 2 * r;
            axis = e == ax;
        }
        if (axis) f.add(t, 1.0);
        sdp.add_equality(f);
    }
    AffineForm obj;
    obj.add(t, -1.0);
    for (auto& [v, c] : trace_reg.terms) obj.add(v, 1e-9 * c);
    sdp.set_objective(obj);

    MomentSolution sol = solve(sdp, sopts);
    if (trusted)
        *trusted = sol.status == SolveStatus::optimal || sol.status == SolveStatus::near_optimal;
    if (residual) *residual = sol.primal_residual;
    if (sol.raw.empty()) return -1e30;
    return sol.raw[t];
}

}  // namespace

bool jsr_sos_feasible(const MatrixSet& A, double gamma, int r, int s, const JsrOptions& opts) {
    A.validate();
    if (gamma < 0) throw std::invalid_argument("gamma must be nonnegative");
    const int n = A.n();
    const int m = static_cast<int>(A.matrices.size());

    SupportChain chain = jsr_support_chain(A, r, s);
    const ExponentSet& As = chain.final_stage();

    std::vector<Exponent> gram_basis = homogeneous_basis(n, r);
    double g2r = std::pow(gamma, 2 * r);

    BlockSDP sdp(n);
    // Coefficients of p, one free variable per support element, plus the
    // positivity margin mu of p - mu |x|^{2r}. The axis coefficients are
    // normalized to sum to one, so the program is solved at unit scale and
    // feasibility of the original form is equivalent to mu > 0.
    std::map<Exponent, VarId, GrlexLess> pcoef;
    for (auto& a : As) pcoef[a] = sdp.free_variable("p");
    VarId mu = sdp.free_variable("mu");
    {
        AffineForm norm;
        norm.constant = -1.0;
        for (int i = 0; i < n; ++i) {
            Exponent ax(n, 0);
            ax[i] = 2 * r;
            norm.add(pcoef.at(ax), 1.0);
        }
        sdp.add_equality(norm);
    }

    AffineForm trace_reg;

    auto full_graph = [&]() {
        Graph full(static_cast<int>(gram_basis.size()));
        for (int i = 0; i < full.num_nodes(); ++i)
            for (int j = i + 1; j < full.num_nodes(); ++j) full.add_edge(i, j);
        return full;
    };

    // Constraint 0: p - mu |x|^{2r} is a sparse Gram form.
    {
        std::map<Exponent, AffineForm, GrlexLess> match;
        Graph pattern = opts.dense ? full_graph() : tsp_graph(gram_basis, As);
        add_gram(sdp, gram_basis, pattern, opts.extension, "c0", match, trace_reg);
        // Gram expansion = c_e - mu [e is an axis point x_i^{2r}], per monomial.
        ExponentSet all;
        for (auto& [e, f] : match) all.insert(e);
        for (auto& [e, v] : pcoef) all.insert(e);
        for (auto& e : all) {
            AffineForm f;
            auto mit = match.find(e);
            if (mit != match.end()) f = mit->second;
            auto it = pcoef.find(e);
            if (it != pcoef.end()) f.add(it->second, -1.0);
            bool axis = false;
            for (int i = 0; i < n && !axis; ++i) {
                Exponent ax(n, 0);
                ax[i] = 2 * r;
                axis = e == ax;
            }
            if (axis) f.add(mu, 1.0);
            sdp.add_equality(f);
        }
    }

    // Constraint i: gamma^{2r} p - p(A_i x) - mu |x|^{2r} is a sparse Gram
    // form; sharing the margin keeps every certificate strictly interior.
    for (int i = 0; i < m; ++i) {
        std::map<Exponent, AffineForm, GrlexLess> match;
        Graph pattern(0);
        if (opts.dense) {
            pattern = full_graph();
        } else {
            ExponentSet Ai = As;
            for (auto& a : As)
                for (auto& e : substituted_support(A.matrices[i], a)) Ai.insert(e);
            pattern = tsp_graph(gram_basis, Ai);
        }
        add_gram(sdp, gram_basis, pattern, opts.extension, "c" + std::to_string(i + 1), match,
                 trace_reg);

        // gamma^{2r} c_d - sum_a c_a [x^d](A_i x)^a, per monomial d.
        std::map<Exponent, AffineForm, GrlexLess> rhs;
        std::vector<std::vector<double>> Mrow(n, std::vector<double>(n));
        for (int rr = 0; rr < n; ++rr)
            for (int cc = 0; cc < n; ++cc) Mrow[rr][cc] = A.matrices[i](rr, cc);
        for (auto& [a, v] : pcoef) {
            rhs[a].add(v, g2r);
            Polynomial mono = Polynomial::monomial(n, a, 1.0);
            Polynomial image = substitute_linear(mono, Mrow);
            for (auto& [e, c] : image.terms()) rhs[e].add(v, -c);
        }
        ExponentSet all;
        for (auto& [e, f] : match) all.insert(e);
        for (auto& [e, f] : rhs) all.insert(e);
        for (auto& e : all) {
            AffineForm f;
            auto mit = match.find(e);
            if (mit != match.end()) f = mit->second;
            auto rit = rhs.find(e);
            if (rit != rhs.end()) {
                AffineForm neg = rit->second;
                for (auto& [v, c] : neg.terms) f.add(v, -c);
                f.constant -= neg.constant;
            }
            bool axis = false;
            for (int k = 0; k < n && !axis; ++k) {
                Exponent ax(n, 0);
                ax[k] = 2 * r;
                axis = e == ax;
            }
            if (axis) f.add(mu, 1.0);
            sdp.add_equality(f);
        }
    }

    // Maximize the positivity margin; the trace regularizer bounds the free
    // Gram directions.
    AffineForm obj;
    obj.add(mu, -1.0);
    for (auto& [v, c] : trace_reg.terms) obj.add(v, 1e-8 * c);
    sdp.set_objective(obj);

    SolverOptions stage1 = opts.solver;
    if (sdp.num_vars() <= 200) {
        // Small probes are resolved near the floating-point floor: the
        // feasibility margin can decay cubically in the distance to the
        // threshold.
        stage1.eps_primal = std::min(stage1.eps_primal, 1e-11);
        stage1.eps_dual = std::min(stage1.eps_dual, 1e-11);
        stage1.max_iters = std::max(stage1.max_iters, 400000);
    }
    MomentSolution sol = solve(sdp, stage1);
    if (sol.status == SolveStatus::primal_infeasible_suspected || sol.raw.empty()) return false;
    if (sol.raw[mu] < -1e-7) return false;

    // Certification pass: fix the candidate form p and verify each Gram
    // membership by a margin solve at the scale of the fixed coefficients.
    std::map<Exponent, double, GrlexLess> phat;
    for (auto& [e, v] : pcoef) phat[e] = sol.raw[v];

    SolverOptions cert_opts = opts.solver;
    cert_opts.eps_primal = cert_opts.eps_dual = 1e-12;
    cert_opts.max_iters = 200000;

    {
        double scale = 0.0;
        for (auto& [e, c] : phat) scale = std::max(scale, std::abs(c));
        Graph pattern = opts.dense ? full_graph() : tsp_graph(gram_basis, As);
        bool trusted = false;
        double rp = 1.0;
        double t0 = gram_margin(phat, n, r, gram_basis, pattern, opts.extension, cert_opts,
                                &trusted, &rp);
        bool deep = rp <= 1e-8 && t0 >= 1e-4 * scale;  // large margins need no floor accuracy
        if (!(deep || (trusted && t0 >= 1e-8 * scale))) return false;
    }
    for (int i = 0; i < m; ++i) {
        std::map<Exponent, double, GrlexLess> qi;
        double scale = 0.0;
        for (auto& [a, ca] : phat) {
            qi[a] += g2r * ca;
            Polynomial mono = Polynomial::monomial(n, a, 1.0);
            std::vector<std::vector<double>> Mrow(n, std::vector<double>(n));
            for (int rr = 0; rr < n; ++rr)
                for (int cc = 0; cc < n; ++cc) Mrow[rr][cc] = A.matrices[i](rr, cc);
            Polynomial image = substitute_linear(mono, Mrow);
            for (auto& [e, c] : image.terms()) qi[e] -= ca * c;
        }
        for (auto& [e, c] : qi) scale = std::max(scale, std::abs(c));
        Graph pattern(0);
        if (opts.dense) {
            pattern = full_graph();
        } else {
            ExponentSet Ai = As;
            for (auto& a : As)
                for (auto& e : substituted_support(A.matrices[i], a)) Ai.insert(e);
            pattern = tsp_graph(gram_basis, Ai);
        }
        bool trusted = false;
        double rp = 1.0;
        double ti = gram_margin(qi, n, r, gram_basis, pattern, opts.extension, cert_opts,
                                &trusted, &rp);
        bool deep = rp <= 1e-8 && ti >= 1e-4 * scale;
        if (!(deep || (trusted && ti >= 1e-8 * scale))) return false;
    }
    return true;
}

JsrBound jsr_upper(const MatrixSet& A, int r, int s, const JsrOptions& opts) {
    JsrBound out;
    int steps = 0;
    auto oracle = [&](double gamma) {
        ++steps;
        return jsr_sos_feasible(A, gamma, r, s, opts);
    };
    bool failed = false;
    out.value = bisect(oracle, opts.lo, opts.hi, opts.tol, &failed);
    out.failed = failed;
    out.bisection_steps = steps;
    return out;
}

double spectral_radius(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> eig(M);
    return eig.eigenvalues().cwiseAbs().maxCoeff();
}

double jsr_lower_products(const MatrixSet& A, int depth) {
    A.validate();
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    const int m = static_cast<int>(A.matrices.size());
    double best = 0.0;
    std::vector<Eigen::MatrixXd> current{Eigen::MatrixXd::Identity(A.n(), A.n())};
    for (int k = 1; k <= depth; ++k) {
        std::vector<Eigen::MatrixXd> next;
        next.reserve(current.size() * m);
        for (auto& prod : current)
            for (int i = 0; i < m; ++i) next.push_back(A.matrices[i] * prod);
        for (auto& prod : next) best = std::max(best, std::pow(spectral_radius(prod), 1.0 / k));
        current = std::move(next);
    }
    return best;
}

}  // namespace momentsos
