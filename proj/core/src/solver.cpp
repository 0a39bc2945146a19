#include "momentsos/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "momentsos/basis.hpp"

namespace momentsos {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::near_optimal: return "near_optimal";
        case SolveStatus::primal_infeasible_suspected: return "primal_infeasible_suspected";
        case SolveStatus::unbounded_suspected: return "unbounded_suspected";
        case SolveStatus::iteration_limit: return "iteration_limit";
    }
    return "unknown";
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Numeric image of a BlockSDP: z = Q y + q0 constrained to lie in the
// product of svec'd PSD cones and the zero cone of the equality rows.
struct NumericProblem {
    int N = 0;  // variables
    int T = 0;  // stacked rows
    std::vector<int> block_dims;
    std::vector<int> block_offsets;
    int eq_offset = 0;
    int eq_count = 0;
    Eigen::MatrixXd Q;
    Eigen::VectorXd q0;
    Eigen::VectorXd c;
    double c0 = 0.0;
};

int svec_size(int m) { return m * (m + 1) / 2; }

NumericProblem assemble(const BlockSDP& sdp) {
    NumericProblem p;
    p.N = sdp.num_vars();
    for (auto& b : sdp.blocks()) {
        p.block_offsets.push_back(p.T);
        p.block_dims.push_back(b.dim);
        p.T += svec_size(b.dim);
    }
    p.eq_offset = p.T;
    p.eq_count = static_cast<int>(sdp.equalities().size());
    p.T += p.eq_count;

    p.Q = Eigen::MatrixXd::Zero(p.T, p.N);
    p.q0 = Eigen::VectorXd::Zero(p.T);
    p.c = Eigen::VectorXd::Zero(p.N);
    p.c0 = sdp.objective().constant;
    for (auto& [v, coef] : sdp.objective().terms) {
        if (v < 0 || v >= p.N) throw IllFormedError("objective references unregistered variable");
        p.c[v] = coef;
    }

    for (size_t bi = 0; bi < sdp.blocks().size(); ++bi) {
        const auto& b = sdp.blocks()[bi];
        int off = p.block_offsets[bi];
        for (auto& [ij, f] : b.entries) {
            auto [i, j] = ij;
            if (i > j || j >= b.dim) throw IllFormedError("bad block entry index");
            int row = off;
            // svec index of (i, j), i <= j, row-major upper triangle
            row += i * b.dim - i * (i - 1) / 2 + (j - i);
            double scale = (i == j) ? 1.0 : kSqrt2;
            p.q0[row] += scale * f.constant;
            for (auto& [v, coef] : f.terms) {
                if (v < 0 || v >= p.N) throw IllFormedError("block references unregistered variable");
                p.Q(row, v) += scale * coef;
            }
        }
    }
    for (int e = 0; e < p.eq_count; ++e) {
        const auto& f = sdp.equalities()[e];
        int row = p.eq_offset + e;
        p.q0[row] = f.constant;
        for (auto& [v, coef] : f.terms) {
            if (v < 0 || v >= p.N) throw IllFormedError("equality references unregistered variable");
            p.Q(row, v) += coef;
        }
    }
    return p;
}

Eigen::MatrixXd unsvec(const Eigen::VectorXd& v, int m) {
    Eigen::MatrixXd M(m, m);
    int k = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j, ++k) {
            double val = (i == j) ? v[k] : v[k] / kSqrt2;
            M(i, j) = val;
            M(j, i) = val;
        }
    }
    return M;
}

void svec_into(const Eigen::MatrixXd& M, Eigen::Ref<Eigen::VectorXd> out) {
    const int m = static_cast<int>(M.rows());
    int k = 0;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j, ++k) out[k] = (i == j) ? M(i, j) : kSqrt2 * M(i, j);
}

// Projection of the stacked vector onto the cone product.
void project(const NumericProblem& p, const Eigen::VectorXd& w, Eigen::VectorXd& z) {
    z.resize(p.T);
    for (size_t bi = 0; bi < p.block_dims.size(); ++bi) {
        int m = p.block_dims[bi];
        int off = p.block_offsets[bi];
        if (m == 1) {
            z[off] = std::max(0.0, w[off]);
            continue;
        }
        Eigen::MatrixXd M = unsvec(w.segment(off, svec_size(m)), m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
        Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
        Eigen::MatrixXd P = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
        svec_into(P, z.segment(off, svec_size(m)));
    }
    z.segment(p.eq_offset, p.eq_count).setZero();
}

// Minimum eigenvalue of each realized block, the worst equality violation,
// and the magnitude of the realized constraint image (for relative checks).
struct Violations {
    double min_eig = 0.0;
    double eq_viol = 0.0;
    double scale = 1.0;
};

Violations unscaled_violations(const NumericProblem& p, const Eigen::VectorXd& y) {
    Eigen::VectorXd w = p.Q * y + p.q0;
    Violations v;
    for (size_t bi = 0; bi < p.block_dims.size(); ++bi) {
        int m = p.block_dims[bi];
        if (m == 1) {
            v.min_eig = std::min(v.min_eig, w[p.block_offsets[bi]]);
            v.scale = std::max(v.scale, std::abs(w[p.block_offsets[bi]]));
            continue;
        }
        Eigen::MatrixXd M = unsvec(w.segment(p.block_offsets[bi], svec_size(m)), m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
        v.min_eig = std::min(v.min_eig, eig.eigenvalues().minCoeff());
        v.scale = std::max(v.scale, eig.eigenvalues().cwiseAbs().maxCoeff());
    }
    if (p.eq_count > 0) v.eq_viol = w.segment(p.eq_offset, p.eq_count).cwiseAbs().maxCoeff();
    return v;
}

}  // namespace

MomentSolution solve(const BlockSDP& sdp, const SolverOptions& opts) {
    NumericProblem orig = assemble(sdp);
    NumericProblem p = orig;

    // Diagonal equilibration: per-variable column scales, per-row scales that
    // are uniform inside each PSD block (a positive multiple of a PSD matrix
    // stays PSD) and free on equality rows.
    Eigen::VectorXd col_scale = Eigen::VectorXd::Ones(p.N);
    Eigen::VectorXd row_scale = Eigen::VectorXd::Ones(p.T);
    if (opts.scale && p.N > 0) {
        for (int pass = 0; pass < 10; ++pass) {
            for (int j = 0; j < p.N; ++j) {
                double nrm = p.Q.col(j).cwiseAbs().maxCoeff();
                if (nrm > 1e-12) {
                    double s = 1.0 / std::sqrt(nrm);
                    p.Q.col(j) *= s;
                    col_scale[j] *= s;
                }
            }
            for (size_t bi = 0; bi < p.block_dims.size(); ++bi) {
                int off = p.block_offsets[bi];
                int len = svec_size(p.block_dims[bi]);
                double nrm = p.Q.middleRows(off, len).cwiseAbs().maxCoeff();
                if (nrm > 1e-12) {
                    double s = 1.0 / std::sqrt(nrm);
                    p.Q.middleRows(off, len) *= s;
                    row_scale.segment(off, len) *= s;
                }
            }
            for (int e = 0; e < p.eq_count; ++e) {
                int row = p.eq_offset + e;
                double nrm = p.Q.row(row).cwiseAbs().maxCoeff();
                if (nrm > 1e-12) {
                    double s = 1.0 / std::sqrt(nrm);
                    p.Q.row(row) *= s;
                    row_scale[row] *= s;
                }
            }
        }
        p.q0 = row_scale.asDiagonal() * p.q0;
        p.c = col_scale.asDiagonal() * orig.c;
    }

    double cost_scale = 1.0;
    double cnorm = p.c.cwiseAbs().maxCoeff();
    if (cnorm > 1e-12) {
        cost_scale = 1.0 / cnorm;
        p.c *= cost_scale;
    }

    double rho = opts.rho;
    const double sigma = 1e-6;
    const double alpha = opts.over_relaxation;

    Eigen::MatrixXd QtQ = p.Q.transpose() * p.Q;
    auto factorize = [&](double r) {
        Eigen::MatrixXd H = r * QtQ;
        H.diagonal().array() += sigma;
        return Eigen::LDLT<Eigen::MatrixXd>(H);
    };
    Eigen::LDLT<Eigen::MatrixXd> ldlt = factorize(rho);

    Eigen::VectorXd y = Eigen::VectorXd::Zero(p.N);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(p.T);
    Eigen::VectorXd u = Eigen::VectorXd::Zero(p.T);
    Eigen::VectorXd u_checkpoint = Eigen::VectorXd::Zero(p.T);
    double plateau_reference = 1e30, plateau_window = 1e30;
    project(p, p.q0, z);

    MomentSolution sol;
    double primal_res = 1e30, dual_res = 1e30;
    int it = 0;
    int refactor_budget = 40;
    double eps_scaled_p = opts.eps_primal, eps_scaled_d = opts.eps_dual;

    for (it = 1; it <= opts.max_iters; ++it) {
        Eigen::VectorXd rhs = -p.c + sigma * y + rho * (p.Q.transpose() * (z - u - p.q0));
        y = ldlt.solve(rhs);

        Eigen::VectorXd w = p.Q * y + p.q0;
        Eigen::VectorXd w_relaxed = alpha * w + (1.0 - alpha) * z;
        Eigen::VectorXd z_prev = z;
        project(p, w_relaxed + u, z);
        u += w_relaxed - z;

        if (it % 25 == 0 || it == opts.max_iters) {
            primal_res = (w - z).norm() / std::max(1.0, std::max(w.norm(), z.norm()));
            dual_res = rho * (p.Q.transpose() * (z - z_prev)).norm() / std::max(1.0, p.c.norm());
            if (primal_res < eps_scaled_p && dual_res < eps_scaled_d) {
                // The optimal guarantee is stated on the unscaled problem;
                // keep iterating with a tighter scaled target until it holds
                // or the floor is reached.
                Eigen::VectorXd y_try = opts.scale ? Eigen::VectorXd(col_scale.asDiagonal() * y) : y;
                Violations v = unscaled_violations(orig, y_try);
                if (v.min_eig >= -10.0 * opts.eps_primal && v.eq_viol <= 10.0 * opts.eps_primal)
                    break;
                if (eps_scaled_p > 1e-12) {
                    eps_scaled_p *= 0.25;
                    eps_scaled_d *= 0.25;
                } else {
                    break;
                }
            }

            // Infeasibility certificate: a dual direction in the polar cone
            // annihilating Q with negative pairing against the offset. The
            // accumulated multiplier and its recent drift both converge to
            // such a direction on infeasible instances.
            if (it % 100 == 0 && u.norm() > 1e-12) {
                for (int source = 0; source < 2; ++source) {
                    Eigen::VectorXd dir = source == 0 ? u : Eigen::VectorXd(u - u_checkpoint);
                    if (dir.norm() < 1e-12) continue;
                    Eigen::VectorXd cert = dir / dir.norm();
                    double cert_res = (p.Q.transpose() * cert).norm();
                    double gap = p.q0.dot(cert);
                    bool in_polar = true;
                    for (size_t bi = 0; bi < p.block_dims.size() && in_polar; ++bi) {
                        int m = p.block_dims[bi];
                        int off = p.block_offsets[bi];
                        if (m == 1) {
                            in_polar = cert[off] > -1e-7;
                            continue;
                        }
                        Eigen::MatrixXd M = unsvec(cert.segment(off, svec_size(m)), m);
                        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(M);
                        in_polar = eig.eigenvalues().minCoeff() > -1e-7;
                    }
                    if (in_polar && cert_res < 1e-7 && gap < -1e-9) {
                        sol.status = SolveStatus::primal_infeasible_suspected;
                        sol.iterations = it;
                        sol.primal_residual = primal_res;
                        sol.dual_residual = dual_res;
                        return sol;
                    }
                }
                u_checkpoint = u;
            }

            // Residual plateau far above tolerance: treat as suspected
            // infeasibility rather than burning the full iteration budget.
            // Only after a warmup, comparing windowed minima.
            plateau_window = std::min(plateau_window, primal_res);
            if (opts.detect_stall && it % 10000 == 0) {
                if (it >= 30000 && plateau_window > 1e3 * opts.eps_primal &&
                    plateau_window > 0.99 * plateau_reference) {
                    sol.status = SolveStatus::primal_infeasible_suspected;
                    sol.iterations = it;
                    sol.primal_residual = primal_res;
                    sol.dual_residual = dual_res;
                    return sol;
                }
                plateau_reference = plateau_window;
                plateau_window = 1e30;
            }

            if (std::abs(p.c.dot(y)) > 1e12 && primal_res < 1e-4) {
                sol.status = SolveStatus::unbounded_suspected;
                sol.iterations = it;
                return sol;
            }

            if (it % 500 == 0 && refactor_budget > 0) {
                double ratio = primal_res / std::max(dual_res, 1e-16);
                if (ratio > 10.0) {
                    rho = std::min(rho * 2.0, 1e6);
                    ldlt = factorize(rho);
                    --refactor_budget;
                } else if (ratio < 0.1) {
                    rho = std::max(rho * 0.5, 1e-6);
                    ldlt = factorize(rho);
                    --refactor_budget;
                }
            }
        }
    }

    // Undo the scaling.
    Eigen::VectorXd y_unscaled = opts.scale ? Eigen::VectorXd(col_scale.asDiagonal() * y) : y;

    sol.raw.assign(y_unscaled.data(), y_unscaled.data() + p.N);
    sol.objective = orig.c.dot(y_unscaled) + orig.c0;
    sol.iterations = std::min(it, opts.max_iters);
    sol.primal_residual = primal_res;
    sol.dual_residual = dual_res;

    Violations v = unscaled_violations(orig, y_unscaled);
    bool converged = primal_res < opts.eps_primal && dual_res < opts.eps_dual;
    bool valid = v.min_eig >= -10.0 * opts.eps_primal && v.eq_viol <= 10.0 * opts.eps_primal;
    // Relative validity tolerates well-converged iterates of large norm.
    bool nearly = primal_res < 100 * opts.eps_primal && dual_res < 100 * opts.eps_dual;
    bool valid_rel = v.min_eig >= -1e3 * opts.eps_primal * v.scale &&
                     v.eq_viol <= 1e3 * opts.eps_primal * v.scale;
    if (converged && valid)
        sol.status = SolveStatus::optimal;
    else if (nearly && (valid || valid_rel))
        sol.status = SolveStatus::near_optimal;
    else
        sol.status = SolveStatus::iteration_limit;

    for (auto& [a, v] : sdp.moment_index()) sol.y[a] = sol.raw[v];

    Eigen::VectorXd w = orig.Q * y_unscaled + orig.q0;
    for (size_t bi = 0; bi < orig.block_dims.size(); ++bi) {
        int m = orig.block_dims[bi];
        sol.block_matrices.push_back(unsvec(w.segment(orig.block_offsets[bi], svec_size(m)), m));
    }
    return sol;
}

BlockSDP dualize(const BlockSDP& sdp) {
    // Primal: min c'y + c0 over blocks C_b + sum_i y_i A_{b,i} >= 0 and
    // equalities e_j'y + d_j = 0. Dual: max -sum <W_b, C_b> + sum l_j d_j
    // over W_b >= 0 and the per-variable stationarity equalities
    //   sum_b <A_{b,i}, W_b> - sum_j l_j e_{j,i} = c_i.
    // Returned as a minimization of the negated dual objective.
    BlockSDP dual(0);
    const int nv = sdp.num_vars();
    std::vector<AffineForm> stationarity(nv);
    AffineForm objective;  // minimized: sum <W_b, C_b> - sum l_j d_j - c0

    for (auto& b : sdp.blocks()) {
        SymbolicMatrix wb;
        wb.dim = b.dim;
        std::vector<std::vector<VarId>> w(b.dim, std::vector<VarId>(b.dim, -1));
        for (int i = 0; i < b.dim; ++i) {
            for (int j = i; j < b.dim; ++j) {
                VarId v = dual.free_variable("w");
                w[i][j] = v;
                AffineForm f;
                f.add(v, 1.0);
                wb.set(i, j, f);
            }
        }
        dual.add_block(std::move(wb));
        for (auto& [ij, form] : b.entries) {
            double weight = ij.first == ij.second ? 1.0 : 2.0;
            VarId v = w[ij.first][ij.second];
            objective.add(v, weight * form.constant);
            for (auto& [var, coef] : form.terms) stationarity[var].add(v, weight * coef);
        }
    }
    std::vector<VarId> lambda;
    for (auto& e : sdp.equalities()) {
        VarId l = dual.free_variable("l");
        lambda.push_back(l);
        objective.add(l, -e.constant);
        for (auto& [var, coef] : e.terms) stationarity[var].add(l, -coef);
    }
    for (int i = 0; i < nv; ++i) {
        AffineForm f = stationarity[i];
        double ci = 0.0;
        for (auto& [var, coef] : sdp.objective().terms)
            if (var == i) ci = coef;
        f.constant = -ci;
        dual.add_equality(f);
    }
    objective.constant = -sdp.objective().constant;
    dual.set_objective(objective);
    return dual;
}

BlockSDP eliminate_free_diagonal_rays(const BlockSDP& sdp) {
    BlockSDP out = sdp;
    bool changed = true;
    while (changed) {
        changed = false;
        const int nv = out.num_vars();
        std::vector<char> in_objective(nv, 0), in_equality(nv, 0), off_diagonal(nv, 0),
            bad_diagonal(nv, 0);
        std::vector<char> on_diagonal(nv, 0);
        for (auto& [v, c] : out.objective().terms) in_objective[v] = 1;
        for (auto& e : out.equalities())
            for (auto& [v, c] : e.terms) in_equality[v] = 1;
        for (auto& b : out.blocks()) {
            for (auto& [ij, f] : b.entries) {
                for (auto& [v, c] : f.terms) {
                    if (ij.first == ij.second) {
                        on_diagonal[v] = 1;
                        if (c <= 0) bad_diagonal[v] = 1;
                    } else {
                        off_diagonal[v] = 1;
                    }
                }
            }
        }
        std::vector<char> eligible(nv, 0);
        for (int v = 0; v < nv; ++v)
            eligible[v] = on_diagonal[v] && !in_objective[v] && !in_equality[v] &&
                          !off_diagonal[v] && !bad_diagonal[v];

        std::vector<SymbolicMatrix> new_blocks;
        for (auto& b : out.blocks()) {
            std::vector<char> drop(b.dim, 0);
            for (auto& [ij, f] : b.entries) {
                if (ij.first != ij.second) continue;
                for (auto& [v, c] : f.terms)
                    if (eligible[v]) drop[ij.first] = 1;
            }
            bool any = false;
            for (char d : drop) any |= d;
            if (!any) {
                new_blocks.push_back(b);
                continue;
            }
            changed = true;
            std::vector<int> keep;
            for (int i = 0; i < b.dim; ++i)
                if (!drop[i]) keep.push_back(i);
            if (keep.empty()) continue;
            SymbolicMatrix nb;
            nb.dim = static_cast<int>(keep.size());
            nb.constraint = b.constraint;
            nb.clique = b.clique;
            for (int i : keep)
                if (i < static_cast<int>(b.row_labels.size()))
                    nb.row_labels.push_back(b.row_labels[i]);
            std::vector<int> pos(b.dim, -1);
            for (size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = static_cast<int>(i);
            for (auto& [ij, f] : b.entries) {
                if (pos[ij.first] >= 0 && pos[ij.second] >= 0)
                    nb.set(pos[ij.first], pos[ij.second], f);
            }
            new_blocks.push_back(std::move(nb));
        }
        if (changed) out.replace_blocks(std::move(new_blocks));
    }
    return out;
}

double bisect(const std::function<bool(double)>& oracle, double lo, double hi, double tol,
              bool* failed) {
    if (failed) *failed = false;
    if (!(lo < hi) || !(tol > 0)) throw std::invalid_argument("bisect requires lo < hi, tol > 0");
    if (oracle(lo)) return lo;
    if (!oracle(hi)) {
        if (failed) *failed = true;
        return hi;
    }
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (oracle(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

ConstantTrace constant_trace_sphere(int n, int r) {
    ConstantTrace ct;
    ct.a = std::pow(2.0, r);
    ct.basis = standard_basis(n, r);
    ct.T.resize(static_cast<int>(ct.basis.size()));
    // (1 + |x|^2)^r = sum_a theta_a x^{2a}: theta_a = r! / ((r - |a|)! * prod a_i!).
    auto factorial = [](int k) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        return f;
    };
    for (size_t i = 0; i < ct.basis.size(); ++i) {
        const Exponent& a = ct.basis[i];
        double theta = factorial(r) / factorial(r - degree(a));
        for (int e : a) theta /= factorial(e);
        ct.T[static_cast<int>(i)] = std::sqrt(theta);
    }
    return ct;
}

ConstantTrace constant_trace_sphere(const POP& pop, int r) {
    if (!pop.has_unit_sphere_equality()) throw NoSphereError();
    return constant_trace_sphere(pop.n, r);
}

}  // namespace momentsos
