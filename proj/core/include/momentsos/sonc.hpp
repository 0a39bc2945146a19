#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momentsos/poly.hpp"

namespace momentsos {

struct NotInteriorError : std::runtime_error {
    NotInteriorError() : std::runtime_error("point is not in the relative interior of the simplex") {}
};

struct UncoverableError : std::runtime_error {
    explicit UncoverableError(const Exponent& beta)
        : std::runtime_error("no simplex from the even support covers the exponent"), beta(beta) {}
    Exponent beta;
};

// Vertex set of a simplex with even exponents.
struct Trellis {
    std::vector<Exponent> vertices;

    bool valid() const;  // even entries and affine independence
};

// f = sum_{a in trellis} c_a x^a - d x^beta with c_a > 0 and beta in the
// relative interior of the simplex.
struct CircuitPolynomial {
    Trellis trellis;
    std::vector<double> vertex_coeffs;
    Exponent inner_exponent;
    double inner_coeff = 0.0;  // the d in  - d x^beta

    int n() const { return static_cast<int>(inner_exponent.size()); }
    Polynomial to_polynomial() const;
};

// The unique lambda > 0 with sum lambda_j a_j = beta, sum lambda_j = 1.
// Throws NotInteriorError on boundary or inconsistent systems.
std::vector<double> barycentric_coords(const Trellis& t, const Exponent& beta);

// Circuit number prod_j (c_j / lambda_j)^{lambda_j}, computed in log space.
double circuit_number(const std::vector<double>& c, const std::vector<double>& lam);

// Nonnegativity test: sum of monomial squares, or |d| <= circuit number.
bool is_nonneg_circuit(const CircuitPolynomial& f);

// Simplex selection LP: maximize lambda_{alpha0} subject to the barycentric
// constraints over Lambda; the support of an optimal vertex solution forms
// the trellis. Returns nothing when the LP is infeasible.
std::optional<Trellis> simsel(const Exponent& beta, const std::vector<Exponent>& Lambda,
                              const Exponent& alpha0);

// One covering trellis per negative-part exponent, chosen by sweeping alpha0
// over the even support in graded-lex order. Throws UncoverableError.
std::vector<std::pair<Trellis, Exponent>> simplex_cover(const Polynomial& f);

// Checks that the parts plus the residual reproduce f coefficient-wise, that
// every part is a nonnegative circuit, and that the residual is a sum of
// monomial squares.
bool verify_sonc_decomposition(const Polynomial& f, const std::vector<CircuitPolynomial>& parts,
                               const Polynomial& residual_monomial_squares);

// JSON for a decomposition file: f, circuit parts, residual.
std::string sonc_decomposition_to_json(const Polynomial& f,
                                       const std::vector<CircuitPolynomial>& parts,
                                       const Polynomial& residual);
void sonc_decomposition_from_json(const std::string& text, Polynomial& f,
                                  std::vector<CircuitPolynomial>& parts, Polynomial& residual);

}  // namespace momentsos
