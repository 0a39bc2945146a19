#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "momentsos/poly.hpp"

namespace momentsos {

struct OrderTooLowError : std::runtime_error {
    OrderTooLowError() : std::runtime_error("relaxation order below r_min") {}
};

// Polynomial optimization problem: minimize `objective` over the set cut out
// by inequalities >= 0 and equalities == 0.
struct POP {
    int n = 0;
    Polynomial objective;
    std::vector<Polynomial> inequalities;
    std::vector<Polynomial> equalities;

    // half-degree of the j-th constraint in the combined list
    // (inequalities followed by equalities)
    std::vector<Polynomial> all_constraints() const;
    bool is_equality(int j) const { return j >= static_cast<int>(inequalities.size()); }
    int d_of(int j) const;
    int r_min() const;

    // Indices of constraints handled as scalar inequalities/equalities at the
    // minimum relaxation order: {j : d_j = r}, nonempty only when r = r_min.
    std::set<int> j_prime(int r) const;

    bool feasible(const std::vector<double>& x, double tol) const;

    // True when some equality equals 1 - |x|^2 up to coefficient tolerance.
    bool has_unit_sphere_equality() const;
};

std::string pop_to_json(const POP& pop);
POP pop_from_json(const std::string& text);

// Moment vector of a point: y_a = x^a for all |a| <= 2r, graded-lex keyed.
std::map<Exponent, double, GrlexLess> moments_of_point(const std::vector<double>& x, int max_degree);

}  // namespace momentsos
