#include "momentsos/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace momentsos {

namespace {

constexpr double kEps = 1e-10;

// Tableau simplex with Bland's rule. Rows: m constraints, columns: the
// decision variables currently in the tableau. basis[i] is the column basic
// in row i.
struct Tableau {
    int m, n;
    std::vector<std::vector<double>> T;  // m rows of n coefficients
    std::vector<double> rhs;
    std::vector<double> cost;  // reduced-cost row (for maximization)
    double cost_rhs = 0.0;
    std::vector<int> basis;

    void pivot(int row, int col) {
        double piv = T[row][col];
        for (int j = 0; j < n; ++j) T[row][j] /= piv;
        rhs[row] /= piv;
        for (int i = 0; i < m; ++i) {
            if (i == row || std::abs(T[i][col]) < kEps * 1e-4) continue;
            double f = T[i][col];
            for (int j = 0; j < n; ++j) T[i][j] -= f * T[row][j];
            rhs[i] -= f * rhs[row];
        }
        double f = cost[col];
        if (std::abs(f) > 0) {
            for (int j = 0; j < n; ++j) cost[j] -= f * T[row][j];
            cost_rhs -= f * rhs[row];
        }
        basis[row] = col;
    }

    // Returns true on optimal, false on unbounded.
    bool run(int max_iters = 50000) {
        for (int it = 0; it < max_iters; ++it) {
            int col = -1;
            for (int j = 0; j < n; ++j) {
                if (cost[j] > kEps) {  // entering column (Bland: lowest index)
                    col = j;
                    break;
                }
            }
            if (col < 0) return true;
            int row = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (T[i][col] > kEps) {
                    double ratio = rhs[i] / T[i][col];
                    if (ratio < best - kEps || (ratio < best + kEps && (row < 0 || basis[i] < basis[row]))) {
                        best = ratio;
                        row = i;
                    }
                }
            }
            if (row < 0) return false;
            pivot(row, col);
        }
        throw std::runtime_error("simplex iteration limit");
    }
};

}  // namespace

LpResult solve_lp_max(const std::vector<double>& c,
                      const std::vector<std::vector<double>>& A,
                      const std::vector<double>& b) {
    const int m = static_cast<int>(A.size());
    const int n = m == 0 ? static_cast<int>(c.size()) : static_cast<int>(A[0].size());

    Tableau t;
    t.m = m;
    t.n = n + m;  // decision variables plus phase-1 artificials
    t.T.assign(m, std::vector<double>(t.n, 0.0));
    t.rhs.resize(m);
    t.basis.resize(m);
    for (int i = 0; i < m; ++i) {
        double sign = b[i] >= 0 ? 1.0 : -1.0;
        for (int j = 0; j < n; ++j) t.T[i][j] = sign * A[i][j];
        t.rhs[i] = sign * b[i];
        t.T[i][n + i] = 1.0;
        t.basis[i] = n + i;
    }

    // Phase 1: maximize -sum(artificials).
    t.cost.assign(t.n, 0.0);
    t.cost_rhs = 0.0;
    for (int i = 0; i < m; ++i) t.cost[n + i] = -1.0;
    for (int i = 0; i < m; ++i) {  // price out the initial basis
        for (int j = 0; j < t.n; ++j) t.cost[j] += t.T[i][j];
        t.cost_rhs += t.rhs[i];
    }
    if (!t.run()) return {LpResult::Status::unbounded, {}, 0.0};
    // cost_rhs tracks the negated objective: positive means leftover
    // artificial mass, i.e. the original system is infeasible.
    if (t.cost_rhs > 1e-7) return {LpResult::Status::infeasible, {}, 0.0};

    // Drive any artificial still basic out of the basis if possible.
    for (int i = 0; i < m; ++i) {
        if (t.basis[i] >= n) {
            for (int j = 0; j < n; ++j) {
                if (std::abs(t.T[i][j]) > kEps) {
                    t.pivot(i, j);
                    break;
                }
            }
        }
    }

    // Phase 2 on the original columns.
    Tableau t2;
    t2.m = m;
    t2.n = n;
    t2.T.assign(m, std::vector<double>(n, 0.0));
    t2.rhs = t.rhs;
    t2.basis = t.basis;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) t2.T[i][j] = t.T[i][j];
    t2.cost.assign(n, 0.0);
    for (int j = 0; j < n; ++j) t2.cost[j] = c[j];
    t2.cost_rhs = 0.0;
    for (int i = 0; i < m; ++i) {
        if (t2.basis[i] < n && std::abs(c[t2.basis[i]]) > 0) {
            double f = c[t2.basis[i]];
            for (int j = 0; j < n; ++j) t2.cost[j] -= f * t2.T[i][j];
            t2.cost_rhs -= f * t2.rhs[i];
        }
    }
    // Rows whose basic variable is a leftover artificial are redundant; they
    // are kept with the artificial pinned at zero (cost untouched).
    for (int i = 0; i < m; ++i)
        if (t2.basis[i] >= n) t2.basis[i] = -1;

    if (!t2.run()) return {LpResult::Status::unbounded, {}, 0.0};

    LpResult res;
    res.status = LpResult::Status::optimal;
    res.x.assign(n, 0.0);
    for (int i = 0; i < m; ++i)
        if (t2.basis[i] >= 0 && t2.basis[i] < n) res.x[t2.basis[i]] = t2.rhs[i];
    res.objective = 0.0;
    for (int j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
    return res;
}

bool lp_feasible(const std::vector<std::vector<double>>& A, const std::vector<double>& b) {
    std::vector<double> c(A.empty() ? 0 : A[0].size(), 0.0);
    return solve_lp_max(c, A, b).status == LpResult::Status::optimal;
}

}  // namespace momentsos
