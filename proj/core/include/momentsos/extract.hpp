#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include <Eigen/Dense>

#include "momentsos/pop.hpp"
#include "momentsos/solver.hpp"

namespace momentsos {

struct FlatnessReport {
    std::map<int, int> ranks;    // truncation order r' -> numeric rank of M_{r'}(y)
    std::optional<int> flat_at;  // smallest r' <= r with rank M_{r'} = rank M_{r'-r_min}
    double tolerance = 1e-3;
};

// Numeric moment matrix M_r(y) over the standard basis (missing entries 0).
Eigen::MatrixXd moment_matrix(const std::map<Exponent, double, GrlexLess>& y, int n, int r);
// Restricted to a variable clique.
Eigen::MatrixXd moment_matrix(const std::map<Exponent, double, GrlexLess>& y, int n, int r,
                              const std::vector<int>& clique);

FlatnessReport flatness_rank(const std::map<Exponent, double, GrlexLess>& y, int n, int r,
                             int r_min, double tol = 1e-3);

struct ExtractedSolutions {
    std::vector<std::vector<double>> points;
    bool certified = false;
    std::string failure;  // nonempty when extraction bailed out (echelon failure etc.)
};

struct OverlapMismatchError : std::runtime_error {
    OverlapMismatchError() : std::runtime_error("clique overlap coordinates disagree") {}
};

// Atom extraction from a flat moment matrix indexed by the standard basis of
// degree r' (inferred from the dimension): rank-revealing square root,
// column-echelon reduction, multiplication matrices, random-combination
// ordered Schur. Uncertified (with `failure` set) when a needed multiplier
// row exceeds the truncation degree.
ExtractedSolutions extract(const Eigen::MatrixXd& M, int n, double tol = 1e-3,
                           std::uint64_t seed = 0);

// Correlative-sparse extraction: per-clique flatness plus rank-one overlaps,
// clique-wise extract and coordinate stitching; falls back to reading
// rank-one first-order moment blocks. Certified only when a stitched point
// is feasible and attains the relaxation objective. Throws
// OverlapMismatchError when stitched coordinates disagree beyond tol.
ExtractedSolutions extract_cs(const POP& pop, const MomentSolution& sol,
                              const std::vector<std::vector<int>>& cliques, int r,
                              double tol = 1e-3, std::uint64_t seed = 0);

// Shared certification rule: every point feasible to `tol` and within
// `obj_tol` of the relaxation bound.
bool certify_points(const POP& pop, const std::vector<std::vector<double>>& points,
                    double bound, double tol, double obj_tol);

}  // namespace momentsos
