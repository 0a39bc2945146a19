#include <doctest.h>

#include <random>

#include "momentsos/jsr.hpp"

using namespace momentsos;

namespace {

MatrixSet identity_set(int n) {
    MatrixSet A;
    A.matrices.push_back(Eigen::MatrixXd::Identity(n, n));
    return A;
}

MatrixSet scaled_pair() {
    MatrixSet A;
    A.matrices.push_back(0.5 * Eigen::MatrixXd::Identity(2, 2));
    A.matrices.push_back(0.25 * Eigen::MatrixXd::Identity(2, 2));
    return A;
}

// Two 3x3 matrices with a common zero third column.
MatrixSet zero_column_pair() {
    MatrixSet A;
    Eigen::MatrixXd m1(3, 3), m2(3, 3);
    m1 << 1, -1, 0, -0.5, 1, 0, 1, 1, 0;
    m2 << 0.5, 1, 0, -1, 1, 0, -1, -0.5, 0;
    A.matrices = {m1, m2};
    return A;
}

// Brute-force support propagation: iterate the defining recurrence on sets.
ExponentSet chain_oracle(const MatrixSet& A, int r, int steps) {
    const int n = A.n();
    ExponentSet cur;
    for (int i = 0; i < n; ++i) {
        Exponent e(n, 0);
        e[i] = 2 * r;
        cur.insert(e);
    }
    for (int s = 0; s < steps; ++s) {
        ExponentSet next = cur;
        for (auto& mat : A.matrices) {
            for (auto& a : cur) {
                // expand (A x)^a symbolically over generic coefficients
                Polynomial mono = Polynomial::monomial(n, a, 1.0);
                std::vector<std::vector<double>> M(n, std::vector<double>(n, 0.0));
                std::mt19937 gen(s * 7919 + 13);
                std::uniform_real_distribution<double> unif(0.3, 0.9);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) M[i][j] = mat(i, j) == 0.0 ? 0.0 : unif(gen);
                Polynomial img = substitute_linear(mono, M);
                for (auto& [e, c] : img.terms()) next.insert(e);
            }
        }
        if (next == cur) break;
        cur = next;
    }
    return cur;
}

}  // namespace

TEST_CASE("support chain of a diagonal matrix is stationary") {
    MatrixSet A;
    Eigen::MatrixXd d(2, 2);
    d << 0.7, 0, 0, 0.3;
    A.matrices.push_back(d);
    SupportChain chain = jsr_support_chain(A, 1, 5);
    CHECK(chain.stabilized);
    for (auto& stage : chain.stages) {
        CHECK(stage == ExponentSet{{2, 0}, {0, 2}});
    }
}

TEST_CASE("support chain respects common zero columns") {
    MatrixSet A = zero_column_pair();
    SupportChain chain = jsr_support_chain(A, 1, 6);
    // every stage lives in the span of the first two coordinates except the
    // third axis point itself
    for (auto& stage : chain.stages) {
        for (auto& e : stage) {
            bool axis = e == Exponent{0, 0, 2};
            if (!axis) CHECK(e[2] == 0);
        }
    }
}

TEST_CASE("support chain agrees with the brute-force propagation oracle") {
    MatrixSet A = zero_column_pair();
    SupportChain chain = jsr_support_chain(A, 1, 8);
    CHECK(chain.stabilized);
    ExponentSet oracle = chain_oracle(A, 1, 8);
    CHECK(chain.final_stage() == oracle);
}

TEST_CASE("dense-row detection") {
    MatrixSet A;
    Eigen::MatrixXd full(2, 2);
    full << 1, 1, 1, 1;
    A.matrices.push_back(full);
    CHECK(jsr_support_chain(A, 1, 3).dense_row);
    CHECK(!jsr_support_chain(identity_set(2), 1, 3).dense_row);
}

TEST_CASE("sos feasibility at fixed gamma for the identity") {
    JsrOptions opts;
    CHECK(jsr_sos_feasible(identity_set(2), 1.001, 1, 1, opts));
    CHECK(!jsr_sos_feasible(identity_set(2), 0.9, 1, 1, opts));
}

TEST_CASE("scaling threshold of a scalar multiple") {
    MatrixSet A;
    A.matrices.push_back(0.6 * Eigen::MatrixXd::Identity(2, 2));
    JsrOptions opts;
    CHECK(jsr_sos_feasible(A, 0.62, 1, 1, opts));
    CHECK(!jsr_sos_feasible(A, 0.58, 1, 1, opts));
}

TEST_CASE("upper bound on the identity") {
    JsrBound b = jsr_upper(identity_set(2), 1, 1);
    CHECK(!b.failed);
    CHECK(b.value == doctest::Approx(1.0).epsilon(2e-5));
}

TEST_CASE("upper bound on a scaled pair") {
    JsrBound b = jsr_upper(scaled_pair(), 1, 1);
    CHECK(!b.failed);
    CHECK(b.value == doctest::Approx(0.5).epsilon(2e-5 / 0.5));
}

TEST_CASE("single Jordan block threshold is its spectral radius") {
    MatrixSet A;
    Eigen::MatrixXd j(2, 2);
    j << 1, 1, 0, 1;
    A.matrices.push_back(j);
    // Lyapunov oracle: for one matrix the quadratic program is A' P A <= g^2 P,
    // whose threshold is the spectral radius: sweep eigenvalues numerically.
    CHECK(spectral_radius(j) == doctest::Approx(1.0));
    JsrBound b = jsr_upper(A, 1, 1);
    CHECK(!b.failed);
    CHECK(b.value == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("product lower bounds") {
    CHECK(jsr_lower_products(identity_set(3), 3) == doctest::Approx(1.0));

    MatrixSet single;
    Eigen::MatrixXd m(2, 2);
    m << 0.4, 1.0, 0.0, 0.9;
    single.matrices.push_back(m);
    CHECK(jsr_lower_products(single, 5) == doctest::Approx(spectral_radius(m)).epsilon(1e-12));
}

TEST_CASE("sandwich on the zero-column pair") {
    MatrixSet A = zero_column_pair();
    double lb = jsr_lower_products(A, 8);
    JsrOptions opts;
    JsrBound sparse = jsr_upper(A, 1, 1, opts);
    CHECK(!sparse.failed);
    CHECK(lb <= sparse.value + 2e-5);
}

TEST_CASE("homogeneity of the upper bound") {
    MatrixSet A = zero_column_pair();
    MatrixSet A2;
    for (auto& m : A.matrices) A2.matrices.push_back(0.5 * m);
    JsrBound b1 = jsr_upper(A, 1, 1);
    JsrBound b2 = jsr_upper(A2, 1, 1);
    CHECK(b2.value == doctest::Approx(0.5 * b1.value).epsilon(4e-5 / b2.value));
}

TEST_CASE("permutation similarity invariance") {
    MatrixSet A = zero_column_pair();
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(3, 3);
    P(0, 1) = P(1, 2) = P(2, 0) = 1.0;
    MatrixSet B;
    for (auto& m : A.matrices) B.matrices.push_back(P * m * P.transpose());
    JsrBound a = jsr_upper(A, 1, 1);
    JsrBound b = jsr_upper(B, 1, 1);
    CHECK(a.value == doctest::Approx(b.value).epsilon(4e-5));
}

TEST_CASE("matrix set json round trip") {
    MatrixSet A = zero_column_pair();
    MatrixSet B = matrix_set_from_json(matrix_set_to_json(A));
    REQUIRE(B.matrices.size() == 2);
    for (size_t i = 0; i < 2; ++i) CHECK((A.matrices[i] - B.matrices[i]).norm() == 0.0);
    CHECK_THROWS(matrix_set_from_json("{\"n\": 2, \"matrices\": [[1, 0, 0]]}"));
}

TEST_CASE("one-sided factor bound on random pairs") {
    // m^{-1/(2r)} * dense upper bound lower-bounds the radius, hence also the
    // product lower bound at sufficient depth.
    std::mt19937 gen(41);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 3; ++trial) {
        MatrixSet A;
        for (int k = 0; k < 2; ++k) {
            Eigen::MatrixXd m(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) m(i, j) = unif(gen);
            A.matrices.push_back(m);
        }
        JsrOptions opts;
        opts.dense = true;
        JsrBound ub = jsr_upper(A, 1, 1, opts);
        if (ub.failed) continue;
        double lb = jsr_lower_products(A, 10);
        CHECK(std::pow(2.0, -0.5) * ub.value <= lb + 1e-4);
        CHECK(lb <= ub.value + 2e-5);
    }
}

TEST_CASE("upper bounds are monotone in the sparse order") {
    MatrixSet A = zero_column_pair();
    JsrBound s1 = jsr_upper(A, 1, 1);
    JsrBound s2 = jsr_upper(A, 1, 2);
    CHECK(!s1.failed);
    CHECK(!s2.failed);
    CHECK(s2.value <= s1.value + 2e-5);
}
