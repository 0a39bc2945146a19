#include "momentsos/sonc.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <json.hpp>

#include "momentsos/lp.hpp"

namespace momentsos {

namespace {

bool affinely_independent(const std::vector<Exponent>& pts) {
    if (pts.empty()) return false;
    const int n = static_cast<int>(pts[0].size());
    const int m = static_cast<int>(pts.size());
    Eigen::MatrixXd D(n, m - 1);
    for (int j = 1; j < m; ++j)
        for (int i = 0; i < n; ++i) D(i, j - 1) = pts[j][i] - pts[0][i];
    if (m == 1) return true;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
    lu.setThreshold(1e-9);
    return lu.rank() == m - 1;
}

bool all_even(const Exponent& a) {
    for (int e : a)
        if (e % 2 != 0) return false;
    return true;
}

}  // namespace

bool Trellis::valid() const {
    if (vertices.empty()) return false;
    for (auto& v : vertices)
        if (!all_even(v)) return false;
    return affinely_independent(vertices);
}

Polynomial CircuitPolynomial::to_polynomial() const {
    Polynomial p(n());
    for (size_t j = 0; j < trellis.vertices.size(); ++j)
        p.add_term(trellis.vertices[j], vertex_coeffs[j]);
    p.add_term(inner_exponent, -inner_coeff);
    return p;
}

std::vector<double> barycentric_coords(const Trellis& t, const Exponent& beta) {
    const int m = static_cast<int>(t.vertices.size());
    if (m == 0) throw NotInteriorError();
    const int n = static_cast<int>(beta.size());
    Eigen::MatrixXd A(n + 1, m);
    Eigen::VectorXd b(n + 1);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) A(i, j) = t.vertices[j][i];
        A(n, j) = 1.0;
    }
    for (int i = 0; i < n; ++i) b[i] = beta[i];
    b[n] = 1.0;

    Eigen::VectorXd lam = A.colPivHouseholderQr().solve(b);
    if ((A * lam - b).cwiseAbs().maxCoeff() > 1e-9) throw NotInteriorError();
    for (int j = 0; j < m; ++j)
        if (lam[j] <= 1e-12) throw NotInteriorError();
    return std::vector<double>(lam.data(), lam.data() + m);
}

double circuit_number(const std::vector<double>& c, const std::vector<double>& lam) {
    if (c.size() != lam.size()) throw std::invalid_argument("length mismatch");
    double log_theta = 0.0;
    for (size_t j = 0; j < c.size(); ++j) {
        if (c[j] <= 0 || lam[j] <= 0) throw std::invalid_argument("positive inputs required");
        log_theta += lam[j] * (std::log(c[j]) - std::log(lam[j]));
    }
    return std::exp(log_theta);
}

bool is_nonneg_circuit(const CircuitPolynomial& f) {
    const double d = f.inner_coeff;
    if (std::abs(d) < 1e-15) return true;  // sum of monomial squares
    if (all_even(f.inner_exponent) && d <= 0) return true;
    auto lam = barycentric_coords(f.trellis, f.inner_exponent);
    return std::abs(d) <= circuit_number(f.vertex_coeffs, lam) + 1e-12;
}

std::optional<Trellis> simsel(const Exponent& beta, const std::vector<Exponent>& Lambda,
                              const Exponent& alpha0) {
    const int n = static_cast<int>(beta.size());
    const int m = static_cast<int>(Lambda.size());
    int i0 = -1;
    for (int j = 0; j < m; ++j)
        if (Lambda[j] == alpha0) i0 = j;
    if (i0 < 0) throw std::invalid_argument("alpha0 must belong to Lambda");

    std::vector<std::vector<double>> A(n + 1, std::vector<double>(m));
    std::vector<double> b(n + 1);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) A[i][j] = Lambda[j][i];
        A[n][j] = 1.0;
    }
    for (int i = 0; i < n; ++i) b[i] = beta[i];
    b[n] = 1.0;
    std::vector<double> c(m, 0.0);
    c[i0] = 1.0;

    LpResult res = solve_lp_max(c, A, b);
    if (res.status != LpResult::Status::optimal) return std::nullopt;

    std::vector<Exponent> chosen;
    std::vector<double> weights;
    for (int j = 0; j < m; ++j) {
        if (res.x[j] > 1e-9) {
            chosen.push_back(Lambda[j]);
            weights.push_back(res.x[j]);
        }
    }
    // Degenerate optimum: drop the smallest-weight vertex until the support
    // is affinely independent (a circuit needs a simplex).
    while (chosen.size() > 1 && !affinely_independent(chosen)) {
        size_t drop = 0;
        for (size_t j = 1; j < weights.size(); ++j)
            if (weights[j] < weights[drop]) drop = j;
        chosen.erase(chosen.begin() + drop);
        weights.erase(weights.begin() + drop);
    }
    Trellis t{chosen};
    if (!t.valid()) return std::nullopt;
    return t;
}

std::vector<std::pair<Trellis, Exponent>> simplex_cover(const Polynomial& f) {
    std::vector<Exponent> Lambda;
    std::vector<Exponent> Gamma;
    for (auto& [a, c] : f.terms()) {
        if (all_even(a) && c > 0)
            Lambda.push_back(a);
        else
            Gamma.push_back(a);
    }
    std::vector<std::pair<Trellis, Exponent>> cover;
    for (auto& beta : Gamma) {
        bool done = false;
        for (auto& alpha0 : Lambda) {
            auto t = simsel(beta, Lambda, alpha0);
            if (t) {
                // The trellis must strictly contain beta in its interior.
                try {
                    barycentric_coords(*t, beta);
                } catch (const NotInteriorError&) {
                    continue;
                }
                cover.emplace_back(*t, beta);
                done = true;
                break;
            }
        }
        if (!done) throw UncoverableError(beta);
    }
    return cover;
}

bool verify_sonc_decomposition(const Polynomial& f, const std::vector<CircuitPolynomial>& parts,
                               const Polynomial& residual_monomial_squares) {
    if (f.n() == 0) return false;
    Polynomial sum =
        residual_monomial_squares.is_zero() ? Polynomial(f.n()) : residual_monomial_squares;
    if (sum.n() != f.n()) return false;
    for (auto& part : parts) {
        if (part.n() != f.n()) return false;
        for (double c : part.vertex_coeffs)
            if (c <= 0) return false;
        try {
            if (!is_nonneg_circuit(part)) return false;
        } catch (const NotInteriorError&) {
            return false;
        } catch (const std::invalid_argument&) {
            return false;
        }
        sum = sum + part.to_polynomial();
    }
    for (auto& [a, c] : residual_monomial_squares.terms())
        if (!all_even(a) || c < 0) return false;
    return sum.equals(f, 1e-9);
}

std::string sonc_decomposition_to_json(const Polynomial& f,
                                       const std::vector<CircuitPolynomial>& parts,
                                       const Polynomial& residual) {
    nlohmann::ordered_json j;
    j["f"] = nlohmann::ordered_json::parse(polynomial_to_json(f));
    j["parts"] = nlohmann::ordered_json::array();
    for (auto& p : parts) {
        nlohmann::ordered_json pj;
        pj["trellis"] = p.trellis.vertices;
        pj["coeffs"] = p.vertex_coeffs;
        pj["inner_exp"] = p.inner_exponent;
        pj["inner_coef"] = p.inner_coeff;
        j["parts"].push_back(pj);
    }
    j["residual"] = nlohmann::ordered_json::parse(polynomial_to_json(residual));
    return j.dump();
}

void sonc_decomposition_from_json(const std::string& text, Polynomial& f,
                                  std::vector<CircuitPolynomial>& parts, Polynomial& residual) {
    auto j = nlohmann::json::parse(text);
    f = polynomial_from_json(j.at("f").dump());
    parts.clear();
    for (auto& pj : j.at("parts")) {
        CircuitPolynomial p;
        for (auto& v : pj.at("trellis")) p.trellis.vertices.push_back(v.get<Exponent>());
        p.vertex_coeffs = pj.at("coeffs").get<std::vector<double>>();
        p.inner_exponent = pj.at("inner_exp").get<Exponent>();
        p.inner_coeff = pj.at("inner_coef").get<double>();
        parts.push_back(std::move(p));
    }
    if (j.contains("residual"))
        residual = polynomial_from_json(j.at("residual").dump());
    else
        residual = Polynomial(f.n());
}

}  // namespace momentsos
