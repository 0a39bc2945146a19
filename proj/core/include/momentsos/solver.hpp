#pragma once

#include <functional>
#include <map>

#include <Eigen/Dense>

#include "momentsos/relax.hpp"

namespace momentsos {

struct SolverOptions {
    double eps_primal = 1e-6;
    double eps_dual = 1e-6;
    int max_iters = 200000;
    double over_relaxation = 1.6;  // in (1, 2)
    bool scale = true;
    double rho = 1.0;
    // Treat a long residual plateau far above tolerance as suspected
    // infeasibility (used by bisection oracles).
    bool detect_stall = false;
};

enum class SolveStatus {
    optimal,
    near_optimal,
    primal_infeasible_suspected,
    unbounded_suspected,
    iteration_limit,
};

const char* to_string(SolveStatus s);

struct MomentSolution {
    SolveStatus status = SolveStatus::iteration_limit;
    double objective = 0.0;
    std::map<Exponent, double, GrlexLess> y;
    std::vector<double> raw;                     // all variable values, by id
    std::vector<Eigen::MatrixXd> block_matrices; // realized numeric blocks
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;

    double value(const Exponent& a) const {
        auto it = y.find(a);
        return it == y.end() ? 0.0 : it->second;
    }
};

// Operator-splitting solve: least-squares step in the variables (equalities
// via augmented terms) alternating with per-block PSD projections by
// symmetric eigendecomposition. Throws IllFormedError on malformed input.
MomentSolution solve(const BlockSDP& sdp, const SolverOptions& opts = {});

// Lagrangian dual of a BlockSDP, again as a BlockSDP: one PSD block of
// multiplier variables per primal block, one free multiplier per equality,
// one equality per primal variable. Useful when the primal optimum is only
// weakly attained; the negated dual optimum matches the primal bound under
// strong duality.
BlockSDP dualize(const BlockSDP& sdp);

// Ray presolve: a variable with zero objective coefficient that appears in no
// equality and only in diagonal entries with positive coefficients spans a
// free recession direction; driving it to infinity relaxes those rows away.
// Deletes such rows (iterated to a fixed point), preserving the optimum.
// Splitting iterations otherwise crawl along these rays on instances whose
// infimum is attained only asymptotically.
BlockSDP eliminate_free_diagonal_rays(const BlockSDP& sdp);

// Bisection over a monotone feasibility oracle. Returns a value at which the
// oracle is feasible, within tol of the threshold; returns lo immediately if
// oracle(lo) holds, and hi with *failed = true if oracle(hi) does not.
double bisect(const std::function<bool(double)>& oracle, double lo, double hi, double tol,
              bool* failed = nullptr);

struct NoSphereError : std::runtime_error {
    NoSphereError() : std::runtime_error("POP has no unit-sphere equality 1 - |x|^2 = 0") {}
};

// Constant-trace data for unit-sphere POPs: a_r = 2^r and the diagonal
// basis transformation T_r = diag(theta_{r,a}^{1/2}) over N^n_r with theta
// the coefficients of (1 + |x|^2)^r.
struct ConstantTrace {
    double a = 1.0;
    Eigen::VectorXd T;                // diagonal of T_r, graded-lex order
    std::vector<Exponent> basis;      // N^n_r
};

ConstantTrace constant_trace_sphere(int n, int r);
// Validating variant: requires pop to contain the unit-sphere equality.
ConstantTrace constant_trace_sphere(const POP& pop, int r);

}  // namespace momentsos
