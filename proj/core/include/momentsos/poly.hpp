#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace momentsos {

// Exponent vector of a monomial x^a = x_1^{a_1} ... x_n^{a_n}.
using Exponent = std::vector<int>;

int degree(const Exponent& a);

// Variable indices with nonzero exponent.
std::vector<int> variables_of(const Exponent& a);

// Graded lexicographic order: lower total degree first, then
// lexicographically larger vector first (so x1 precedes x2).
struct GrlexLess {
    bool operator()(const Exponent& a, const Exponent& b) const;
};

using ExponentSet = std::set<Exponent, GrlexLess>;

// Sparse multivariate polynomial with real coefficients, kept canonical:
// stored coefficients are nonzero and every exponent has length n.
class Polynomial {
  public:
    Polynomial() : n_(0) {}
    explicit Polynomial(int n) : n_(n) {}
    Polynomial(int n, std::map<Exponent, double, GrlexLess> terms);

    static Polynomial constant(int n, double c);
    static Polynomial monomial(int n, const Exponent& a, double c);
    static Polynomial variable(int n, int i);

    int n() const { return n_; }
    const std::map<Exponent, double, GrlexLess>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;
    double coefficient(const Exponent& a) const;
    double operator()(const std::vector<double>& x) const;

    void add_term(const Exponent& a, double c);

    Polynomial operator+(const Polynomial& q) const;
    Polynomial operator-(const Polynomial& q) const;
    Polynomial operator*(const Polynomial& q) const;
    Polynomial operator*(double c) const;
    Polynomial operator-() const { return *this * -1.0; }

    bool equals(const Polynomial& q, double tol) const;

    std::string str() const;

    // Coefficients with |c| below this threshold are dropped on construction.
    static constexpr double kCoefficientTolerance = 1e-14;

  private:
    int n_;
    std::map<Exponent, double, GrlexLess> terms_;
};

ExponentSet support(const Polynomial& p);

// The polynomial x -> p(M x), expanded and canonicalized. M is n x n,
// row-major. Throws std::invalid_argument on dimension mismatch.
Polynomial substitute_linear(const Polynomial& p, const std::vector<std::vector<double>>& M);

// All lattice points a with 2a inside the convex hull of supp(p); membership
// is decided by a feasibility LP per candidate in the bounding box of
// (1/2) supp(p). Throws std::invalid_argument if p is zero.
ExponentSet newton_halfpolytope(const Polynomial& p);
ExponentSet newton_halfpolytope(const ExponentSet& supp, int n);

// Basis of the sign-symmetry subgroup of Z_2^n of a support set: binary
// vectors s with s.a even for every a in A.
struct SignSymmetryBasis {
    int n = 0;
    std::vector<std::vector<int>> generators;  // 0/1 vectors, GF(2)-independent

    bool annihilates(const Exponent& a) const;
};

SignSymmetryBasis sign_symmetries(const ExponentSet& A, int n);

// JSON round-trip for the {"n": ..., "terms": [{"exp": [...], "coef": ...}]}
// encoding.
std::string polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const std::string& text);

}  // namespace momentsos
