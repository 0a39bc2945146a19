#include "momentsos/extract.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "momentsos/basis.hpp"

namespace momentsos {

namespace {

Eigen::MatrixXd moment_matrix_rows(const std::map<Exponent, double, GrlexLess>& y,
                                   const std::vector<Exponent>& rows) {
    const int m = static_cast<int>(rows.size());
    Eigen::MatrixXd M(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            Exponent s(rows[i].size());
            for (size_t k = 0; k < s.size(); ++k) s[k] = rows[i][k] + rows[j][k];
            auto it = y.find(s);
            double v = it == y.end() ? 0.0 : it->second;
            M(i, j) = v;
            M(j, i) = v;
        }
    }
    return M;
}

int numeric_rank(const Eigen::MatrixXd& M, double tol) {
    if (M.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    double top = svd.singularValues()[0];
    if (top <= 0) return 0;
    int r = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] >= tol * top) ++r;
    return r;
}

// Reorder a real Schur form so the diagonal of T increases, swapping adjacent
// 1x1 blocks with Givens rotations. Quasi-triangular 2x2 blocks (complex
// pairs) are left in place; they do not occur for flat moment inputs.
void order_schur(Eigen::MatrixXd& T, Eigen::MatrixXd& Q) {
    const int t = static_cast<int>(T.rows());
    auto is_block_start = [&](int k) { return k + 1 < t && std::abs(T(k + 1, k)) > 1e-9; };
    for (int k = 0; k < t; ++k)
        if (is_block_start(k)) return;  // leave quasi-triangular forms alone

    bool swapped = true;
    while (swapped) {
        swapped = false;
        for (int k = 0; k + 1 < t; ++k) {
            double a = T(k, k), b = T(k + 1, k + 1);
            if (a <= b + 1e-12) continue;
            // Rotate the 2x2 [[a, p], [0, b]] so the eigenvalues exchange:
            // the first column of G is the unit eigenvector for b.
            double p = T(k, k + 1);
            Eigen::Vector2d v(p, b - a);
            double nrm = v.norm();
            if (nrm < 1e-300) continue;
            double c = v[0] / nrm, s = v[1] / nrm;
            Eigen::Matrix2d G;
            G << c, -s, s, c;
            T.middleRows(k, 2) = G.transpose() * T.middleRows(k, 2);
            T.middleCols(k, 2) = T.middleCols(k, 2) * G;
            Q.middleCols(k, 2) = Q.middleCols(k, 2) * G;
            T(k + 1, k) = 0.0;
            swapped = true;
        }
    }
}

}  // namespace

Eigen::MatrixXd moment_matrix(const std::map<Exponent, double, GrlexLess>& y, int n, int r) {
    return moment_matrix_rows(y, standard_basis(n, r));
}

Eigen::MatrixXd moment_matrix(const std::map<Exponent, double, GrlexLess>& y, int n, int r,
                              const std::vector<int>& clique) {
    auto small = standard_basis(static_cast<int>(clique.size()), r);
    std::vector<Exponent> rows;
    rows.reserve(small.size());
    for (auto& a : small) {
        Exponent e(n, 0);
        for (size_t i = 0; i < clique.size(); ++i) e[clique[i]] = a[i];
        rows.push_back(e);
    }
    std::sort(rows.begin(), rows.end(), GrlexLess{});
    return moment_matrix_rows(y, rows);
}

FlatnessReport flatness_rank(const std::map<Exponent, double, GrlexLess>& y, int n, int r,
                             int r_min, double tol) {
    FlatnessReport rep;
    rep.tolerance = tol;
    for (int rp = 0; rp <= r; ++rp) rep.ranks[rp] = numeric_rank(moment_matrix(y, n, rp), tol);
    for (int rp = r_min; rp <= r; ++rp) {
        if (rep.ranks[rp] == rep.ranks[rp - r_min]) {
            rep.flat_at = rp;
            break;
        }
    }
    return rep;
}

ExtractedSolutions extract(const Eigen::MatrixXd& M, int n, double tol, std::uint64_t seed) {
    ExtractedSolutions out;
    // Infer the truncation degree from the dimension.
    int rp = 0;
    while (static_cast<int>(standard_basis(n, rp).size()) < M.rows()) ++rp;
    auto basis = standard_basis(n, rp);
    if (static_cast<int>(basis.size()) != M.rows()) {
        out.failure = "matrix dimension is not C(n+r', r')";
        return out;
    }
    std::map<Exponent, int, GrlexLess> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);

    // Rank-revealing square root via eigendecomposition (M symmetric PSD).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
    double top = eig.eigenvalues().cwiseAbs().maxCoeff();
    if (top <= 0) {
        out.failure = "zero moment matrix";
        return out;
    }
    std::vector<int> keep;
    for (int i = 0; i < eig.eigenvalues().size(); ++i)
        if (eig.eigenvalues()[i] >= tol * top) keep.push_back(i);
    const int t = static_cast<int>(keep.size());
    if (t == 0) {
        out.failure = "numerically zero rank";
        return out;
    }
    Eigen::MatrixXd C(M.rows(), t);
    for (int k = 0; k < t; ++k)
        C.col(k) = eig.eigenvectors().col(keep[k]) * std::sqrt(eig.eigenvalues()[keep[k]]);

    // Column echelon form with row pivoting: pivot rows name the generating
    // monomials.
    Eigen::MatrixXd U = C;
    std::vector<int> pivot_rows;
    int col = 0;
    double thresh = tol * U.cwiseAbs().maxCoeff();
    for (int row = 0; row < U.rows() && col < t; ++row) {
        int best = -1;
        double best_abs = thresh;
        for (int k = col; k < t; ++k) {
            if (std::abs(U(row, k)) > best_abs) {
                best = k;
                best_abs = std::abs(U(row, k));
            }
        }
        if (best < 0) continue;
        U.col(col).swap(U.col(best));
        U.col(col) /= U(row, col);
        for (int k = 0; k < t; ++k) {
            if (k == col) continue;
            U.col(k) -= U(row, k) * U.col(col);
        }
        pivot_rows.push_back(row);
        ++col;
    }
    if (static_cast<int>(pivot_rows.size()) < t) {
        out.failure = "echelon reduction found fewer pivots than the numeric rank";
        return out;
    }

    // Multiplication matrices from the echelon rows.
    std::vector<Eigen::MatrixXd> N(n, Eigen::MatrixXd(t, t));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < t; ++j) {
            Exponent target = basis[pivot_rows[j]];
            target[i] += 1;
            auto it = index.find(target);
            if (it == index.end()) {
                out.failure = "multiplier row exceeds the truncation degree";
                return out;  // EchelonFailure: insufficient order
            }
            N[i].row(j) = U.row(it->second);
        }
    }

    // Random convex combination, then ordered real Schur.
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    Eigen::VectorXd lambda(n);
    for (int i = 0; i < n; ++i) lambda[i] = unif(gen);
    lambda /= lambda.sum();
    Eigen::MatrixXd Nmix = Eigen::MatrixXd::Zero(t, t);
    for (int i = 0; i < n; ++i) Nmix += lambda[i] * N[i];

    Eigen::RealSchur<Eigen::MatrixXd> schur(Nmix);
    Eigen::MatrixXd T = schur.matrixT();
    Eigen::MatrixXd Q = schur.matrixU();
    order_schur(T, Q);

    for (int j = 0; j < t; ++j) {
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = Q.col(j).dot(N[i] * Q.col(j));
        bool dup = false;
        for (auto& p : out.points) {
            double d = 0;
            for (int i = 0; i < n; ++i) d = std::max(d, std::abs(p[i] - x[i]));
            if (d < 1e-6) dup = true;
        }
        if (!dup) out.points.push_back(std::move(x));
    }
    out.certified = true;  // extraction succeeded; feasibility checked by callers
    return out;
}

bool certify_points(const POP& pop, const std::vector<std::vector<double>>& points, double bound,
                    double tol, double obj_tol) {
    if (points.empty()) return false;
    for (auto& x : points) {
        if (!pop.feasible(x, tol)) return false;
        if (std::abs(pop.objective(x) - bound) > obj_tol) return false;
    }
    return true;
}

ExtractedSolutions extract_cs(const POP& pop, const MomentSolution& sol,
                              const std::vector<std::vector<int>>& cliques, int r, double tol,
                              std::uint64_t seed) {
    ExtractedSolutions out;
    const int n = pop.n;

    // a_k = max over constraints owned by clique k of d_j (at least 1).
    auto constraints = pop.all_constraints();
    std::vector<int> a(cliques.size(), 1);
    for (int j = 0; j < static_cast<int>(constraints.size()); ++j) {
        std::set<int> vars;
        for (auto& [e, c] : constraints[j].terms())
            for (int v : variables_of(e)) vars.insert(v);
        int best = -1;
        for (int k = 0; k < static_cast<int>(cliques.size()); ++k) {
            bool covers =
                std::includes(cliques[k].begin(), cliques[k].end(), vars.begin(), vars.end());
            if (covers && (best < 0 || cliques[k].size() < cliques[best].size())) best = k;
        }
        if (best >= 0) a[best] = std::max(a[best], pop.d_of(j));
    }

    bool flat = true;
    for (int k = 0; k < static_cast<int>(cliques.size()) && flat; ++k) {
        int rk = numeric_rank(moment_matrix(sol.y, n, r, cliques[k]), tol);
        int rk_low = numeric_rank(moment_matrix(sol.y, n, r - a[k], cliques[k]), tol);
        flat = rk == rk_low;
    }
    for (size_t j = 0; j < cliques.size() && flat; ++j) {
        for (size_t k = j + 1; k < cliques.size() && flat; ++k) {
            std::vector<int> overlap;
            std::set_intersection(cliques[j].begin(), cliques[j].end(), cliques[k].begin(),
                                  cliques[k].end(), std::back_inserter(overlap));
            if (overlap.empty()) continue;
            flat = numeric_rank(moment_matrix(sol.y, n, r, overlap), tol) == 1;
        }
    }

    if (flat) {
        // Extract per clique, then stitch coordinates through the overlaps.
        std::vector<std::vector<std::vector<double>>> clique_points;
        bool ok = true;
        for (auto& clique : cliques) {
            auto ext = extract(moment_matrix(sol.y, n, r, clique),
                               static_cast<int>(clique.size()), tol, seed);
            if (ext.points.empty()) {
                ok = false;
                break;
            }
            clique_points.push_back(ext.points);
        }
        if (ok) {
            std::vector<std::vector<double>> stitched;
            std::vector<std::vector<double>> partial{std::vector<double>(n,
                std::numeric_limits<double>::quiet_NaN())};
            bool mismatch = false;
            for (size_t k = 0; k < cliques.size(); ++k) {
                std::vector<std::vector<double>> next;
                for (auto& base : partial) {
                    bool matched_any = false;
                    for (auto& cp : clique_points[k]) {
                        bool consistent = true;
                        std::vector<double> cand = base;
                        for (size_t i = 0; i < cliques[k].size(); ++i) {
                            int v = cliques[k][i];
                            if (std::isnan(cand[v])) {
                                cand[v] = cp[i];
                            } else if (std::abs(cand[v] - cp[i]) > std::max(tol, 1e-4)) {
                                consistent = false;
                                break;
                            }
                        }
                        if (consistent) {
                            matched_any = true;
                            if (next.size() < 256) next.push_back(std::move(cand));
                        }
                    }
                    if (!matched_any) mismatch = true;
                }
                partial = std::move(next);
                if (partial.empty()) break;
            }
            if (partial.empty() && mismatch) throw OverlapMismatchError();
            for (auto& x : partial) {
                bool has_nan = false;
                for (double v : x) has_nan |= std::isnan(v);
                if (has_nan) continue;
                bool dup = false;
                for (auto& p : stitched) {
                    double d = 0;
                    for (int i = 0; i < n; ++i) d = std::max(d, std::abs(p[i] - x[i]));
                    if (d < 1e-6) dup = true;
                }
                if (!dup) stitched.push_back(x);
            }
            if (!stitched.empty()) {
                out.points = stitched;
                out.certified =
                    certify_points(pop, out.points, sol.objective, 1e-6,
                                   std::max(1e-6, 100 * sol.primal_residual));
                return out;
            }
        }
    }

    // Fallback: read coordinates from rank-one first-order moment blocks.
    std::vector<double> x(n, 0.0);
    bool all_rank_one = true;
    for (auto& clique : cliques) {
        Eigen::MatrixXd m1 = moment_matrix(sol.y, n, 1, clique);
        if (numeric_rank(m1, tol) != 1) {
            all_rank_one = false;
            break;
        }
    }
    if (all_rank_one) {
        Exponent e(n, 0);
        for (int i = 0; i < n; ++i) {
            e[i] = 1;
            auto it = sol.y.find(e);
            x[i] = it == sol.y.end() ? 0.0 : it->second;
            e[i] = 0;
        }
        out.points = {x};
        out.certified = certify_points(pop, out.points, sol.objective, 1e-6,
                                       std::max(1e-6, 100 * sol.primal_residual));
        if (!out.certified) out.failure = "fallback point does not certify";
        return out;
    }
    out.failure = "neither flatness with rank-one overlaps nor rank-one first-order blocks hold";
    return out;
}

}  // namespace momentsos
