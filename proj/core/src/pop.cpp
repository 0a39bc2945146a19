#include "momentsos/pop.hpp"

#include <cmath>
#include <functional>

#include <json.hpp>

namespace momentsos {

std::vector<Polynomial> POP::all_constraints() const {
    std::vector<Polynomial> all = inequalities;
    all.insert(all.end(), equalities.begin(), equalities.end());
    return all;
}

int POP::d_of(int j) const {
    const Polynomial& g =
        j < static_cast<int>(inequalities.size())
            ? inequalities[j]
            : equalities[j - static_cast<int>(inequalities.size())];
    return (g.degree() + 1) / 2;
}

int POP::r_min() const {
    int r = (objective.degree() + 1) / 2;
    int m = static_cast<int>(inequalities.size() + equalities.size());
    for (int j = 0; j < m; ++j) r = std::max(r, d_of(j));
    return std::max(r, 1);
}

std::set<int> POP::j_prime(int r) const {
    std::set<int> jp;
    if (r != r_min()) return jp;
    int m = static_cast<int>(inequalities.size() + equalities.size());
    for (int j = 0; j < m; ++j)
        if (d_of(j) == r) jp.insert(j);
    return jp;
}

bool POP::feasible(const std::vector<double>& x, double tol) const {
    for (auto& g : inequalities)
        if (g(x) < -tol) return false;
    for (auto& h : equalities)
        if (std::abs(h(x)) > tol) return false;
    return true;
}

bool POP::has_unit_sphere_equality() const {
    for (auto& h : equalities) {
        Polynomial sphere = Polynomial::constant(n, 1.0);
        for (int i = 0; i < n; ++i) {
            Exponent sq(n, 0);
            sq[i] = 2;
            sphere.add_term(sq, -1.0);
        }
        if (h.equals(sphere, 1e-12) || h.equals(-sphere, 1e-12)) return true;
    }
    return false;
}

std::string pop_to_json(const POP& pop) {
    nlohmann::ordered_json j;
    j["n"] = pop.n;
    j["objective"] = nlohmann::ordered_json::parse(polynomial_to_json(pop.objective));
    j["inequalities"] = nlohmann::ordered_json::array();
    for (auto& g : pop.inequalities)
        j["inequalities"].push_back(nlohmann::ordered_json::parse(polynomial_to_json(g)));
    j["equalities"] = nlohmann::ordered_json::array();
    for (auto& h : pop.equalities)
        j["equalities"].push_back(nlohmann::ordered_json::parse(polynomial_to_json(h)));
    return j.dump();
}

POP pop_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    POP pop;
    pop.n = j.at("n").get<int>();
    pop.objective = polynomial_from_json(j.at("objective").dump());
    if (j.contains("inequalities"))
        for (auto& g : j["inequalities"]) pop.inequalities.push_back(polynomial_from_json(g.dump()));
    if (j.contains("equalities"))
        for (auto& h : j["equalities"]) pop.equalities.push_back(polynomial_from_json(h.dump()));
    if (pop.objective.n() != pop.n) throw std::invalid_argument("objective dimension mismatch");
    for (auto& g : pop.inequalities)
        if (g.n() != pop.n) throw std::invalid_argument("constraint dimension mismatch");
    for (auto& h : pop.equalities)
        if (h.n() != pop.n) throw std::invalid_argument("constraint dimension mismatch");
    return pop;
}

std::map<Exponent, double, GrlexLess> moments_of_point(const std::vector<double>& x, int max_degree) {
    const int n = static_cast<int>(x.size());
    std::map<Exponent, double, GrlexLess> y;
    Exponent a(n, 0);
    // Enumerate all exponents with degree <= max_degree.
    std::function<void(int, int)> rec = [&](int i, int remaining) {
        if (i == n) {
            double v = 1.0;
            for (int k = 0; k < n; ++k)
                for (int t = 0; t < a[k]; ++t) v *= x[k];
            y[a] = v;
            return;
        }
        for (int e = 0; e <= remaining; ++e) {
            a[i] = e;
            rec(i + 1, remaining - e);
        }
        a[i] = 0;
    };
    rec(0, max_degree);
    return y;
}

}  // namespace momentsos
