#pragma once

#include <vector>

#include <Eigen/Dense>

#include "momentsos/graph.hpp"
#include "momentsos/poly.hpp"
#include "momentsos/solver.hpp"

namespace momentsos {

struct MatrixSet {
    std::vector<Eigen::MatrixXd> matrices;

    int n() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
    void validate() const;
};

std::string matrix_set_to_json(const MatrixSet& A);
MatrixSet matrix_set_from_json(const std::string& text);

// Ascending support sets A^(0) <= A^(1) <= ..., all homogeneous of degree 2r,
// starting from {2r e_i} and closed under symbolic (cancellation-free)
// substitution x -> A_i x.
struct SupportChain {
    std::vector<ExponentSet> stages;  // stages[0] = initial support
    bool stabilized = false;
    bool dense_row = false;  // a fully dense row forced the full support

    const ExponentSet& final_stage() const { return stages.back(); }
};

SupportChain jsr_support_chain(const MatrixSet& A, int r, int s_max);

struct JsrOptions {
    double lo = 0.0;
    double hi = 2.0;
    double tol = 1e-5;
    ChordalStrategy extension = ChordalStrategy::maximal;
    SolverOptions solver;
    bool dense = false;  // bypass the term-sparsity pattern

    JsrOptions() {
        solver.eps_primal = 1e-8;
        solver.eps_dual = 1e-8;
        solver.max_iters = 150000;
        solver.detect_stall = true;
    }
};

// Feasibility of the degree-2r SOS program at a fixed scaling gamma: an
// auxiliary form p supported on A^(s) such that p - |x|^{2r} and each
// gamma^{2r} p - p(A_i x) admit Gram matrices with the term-sparsity
// pattern, realized clique-wise. Solved in an equivalent normalized margin
// form (maximize mu with a shared slack mu |x|^{2r} in every membership and
// unit axis-coefficient sum), then certified by fixing the candidate form
// and re-verifying each Gram membership. Iteration limits and failed
// certifications count as infeasible.
bool jsr_sos_feasible(const MatrixSet& A, double gamma, int r, int s, const JsrOptions& opts = {});

struct JsrBound {
    double value = 0.0;
    bool failed = false;  // infeasible at hi
    int bisection_steps = 0;
};

// Certified upper bound on the joint spectral radius by bisection.
JsrBound jsr_upper(const MatrixSet& A, int r, int s, const JsrOptions& opts = {});

// Brute-force lower bound: max over words w of length k <= depth of
// spectral_radius(prod w)^{1/k}.
double jsr_lower_products(const MatrixSet& A, int depth);

double spectral_radius(const Eigen::MatrixXd& M);

}  // namespace momentsos
