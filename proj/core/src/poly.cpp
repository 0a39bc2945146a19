#include "momentsos/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "momentsos/lp.hpp"

namespace momentsos {

int degree(const Exponent& a) {
    int d = 0;
    for (int e : a) d += e;
    return d;
}

std::vector<int> variables_of(const Exponent& a) {
    std::vector<int> vars;
    for (int i = 0; i < static_cast<int>(a.size()); ++i)
        if (a[i] != 0) vars.push_back(i);
    return vars;
}

bool GrlexLess::operator()(const Exponent& a, const Exponent& b) const {
    int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    // Same degree: x1^d comes before x2^d, i.e. lexicographically larger first.
    return a > b;
}

Polynomial::Polynomial(int n, std::map<Exponent, double, GrlexLess> terms) : n_(n) {
    for (auto& [a, c] : terms) {
        if (static_cast<int>(a.size()) != n)
            throw std::invalid_argument("exponent length does not match variable count");
        if (std::abs(c) >= kCoefficientTolerance) terms_.emplace(a, c);
    }
}

Polynomial Polynomial::constant(int n, double c) {
    Polynomial p(n);
    p.add_term(Exponent(n, 0), c);
    return p;
}

Polynomial Polynomial::monomial(int n, const Exponent& a, double c) {
    Polynomial p(n);
    p.add_term(a, c);
    return p;
}

Polynomial Polynomial::variable(int n, int i) {
    Exponent a(n, 0);
    a[i] = 1;
    return monomial(n, a, 1.0);
}

int Polynomial::degree() const {
    int d = 0;
    for (auto& [a, c] : terms_) d = std::max(d, momentsos::degree(a));
    return d;
}

double Polynomial::coefficient(const Exponent& a) const {
    auto it = terms_.find(a);
    return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw std::invalid_argument("evaluation point has wrong dimension");
    double v = 0.0;
    for (auto& [a, c] : terms_) {
        double m = c;
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < a[i]; ++k) m *= x[i];
        v += m;
    }
    return v;
}

void Polynomial::add_term(const Exponent& a, double c) {
    if (static_cast<int>(a.size()) != n_)
        throw std::invalid_argument("exponent length does not match variable count");
    for (int e : a)
        if (e < 0) throw std::invalid_argument("negative exponent");
    auto it = terms_.find(a);
    double v = (it == terms_.end() ? 0.0 : it->second) + c;
    if (std::abs(v) < kCoefficientTolerance) {
        if (it != terms_.end()) terms_.erase(it);
    } else if (it == terms_.end()) {
        terms_.emplace(a, v);
    } else {
        it->second = v;
    }
}

Polynomial Polynomial::operator+(const Polynomial& q) const {
    if (n_ != q.n_) throw std::invalid_argument("variable counts differ");
    Polynomial r = *this;
    for (auto& [a, c] : q.terms_) r.add_term(a, c);
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& q) const { return *this + q * -1.0; }

Polynomial Polynomial::operator*(const Polynomial& q) const {
    if (n_ != q.n_) throw std::invalid_argument("variable counts differ");
    Polynomial r(n_);
    for (auto& [a, ca] : terms_) {
        for (auto& [b, cb] : q.terms_) {
            Exponent s(n_);
            for (int i = 0; i < n_; ++i) s[i] = a[i] + b[i];
            r.add_term(s, ca * cb);
        }
    }
    return r;
}

Polynomial Polynomial::operator*(double c) const {
    Polynomial r(n_);
    for (auto& [a, v] : terms_) r.add_term(a, v * c);
    return r;
}

bool Polynomial::equals(const Polynomial& q, double tol) const {
    if (n_ != q.n_) return false;
    Polynomial d = *this - q;
    for (auto& [a, c] : d.terms())
        if (std::abs(c) > tol) return false;
    return true;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [a, c] : terms_) {
        if (!first) os << (c >= 0 ? " + " : " - ");
        else if (c < 0) os << "-";
        os << std::abs(c);
        for (int i = 0; i < n_; ++i) {
            if (a[i] > 0) {
                os << "*x" << (i + 1);
                if (a[i] > 1) os << "^" << a[i];
            }
        }
        first = false;
    }
    return os.str();
}

ExponentSet support(const Polynomial& p) {
    ExponentSet s;
    for (auto& [a, c] : p.terms()) s.insert(a);
    return s;
}

Polynomial substitute_linear(const Polynomial& p, const std::vector<std::vector<double>>& M) {
    const int n = p.n();
    if (static_cast<int>(M.size()) != n)
        throw std::invalid_argument("substitution matrix must be n x n");
    for (auto& row : M)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("substitution matrix must be n x n");

    // Images of the variables: x_i -> sum_j M[i][j] x_j.
    std::vector<Polynomial> image(n, Polynomial(n));
    for (int i = 0; i < n; ++i) {
        Polynomial li(n);
        for (int j = 0; j < n; ++j) {
            Exponent e(n, 0);
            e[j] = 1;
            li.add_term(e, M[i][j]);
        }
        image[i] = li;
    }

    Polynomial out(n);
    for (auto& [a, c] : p.terms()) {
        Polynomial term = Polynomial::constant(n, c);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < a[i]; ++k) term = term * image[i];
        out = out + term;
    }
    return out;
}

ExponentSet newton_halfpolytope(const Polynomial& p) {
    if (p.is_zero()) throw std::invalid_argument("newton_halfpolytope of the zero polynomial");
    return newton_halfpolytope(support(p), p.n());
}

ExponentSet newton_halfpolytope(const ExponentSet& supp_set, int n) {
    if (supp_set.empty()) throw std::invalid_argument("newton_halfpolytope of an empty support");
    std::vector<Exponent> supp(supp_set.begin(), supp_set.end());

    // Bounding box of (1/2) supp.
    Exponent lo(n, 0), hi(n, 0);
    for (int i = 0; i < n; ++i) {
        int mn = supp[0][i], mx = supp[0][i];
        for (auto& a : supp) {
            mn = std::min(mn, a[i]);
            mx = std::max(mx, a[i]);
        }
        lo[i] = (mn + 1) / 2;  // ceil(mn/2) for nonnegative mn
        hi[i] = mx / 2;        // floor(mx/2)
    }

    // Membership oracle: 2a in conv(supp) iff the barycentric system is
    // feasible with lambda >= 0.
    auto in_half_polytope = [&](const Exponent& a) {
        std::vector<std::vector<double>> A(n + 1, std::vector<double>(supp.size()));
        std::vector<double> b(n + 1);
        for (size_t j = 0; j < supp.size(); ++j) {
            for (int i = 0; i < n; ++i) A[i][j] = supp[j][i];
            A[n][j] = 1.0;
        }
        for (int i = 0; i < n; ++i) b[i] = 2.0 * a[i];
        b[n] = 1.0;
        return lp_feasible(A, b);
    };

    ExponentSet out;
    Exponent cur = lo;
    while (true) {
        if (in_half_polytope(cur)) out.insert(cur);
        int i = 0;
        while (i < n) {
            if (cur[i] < hi[i]) {
                ++cur[i];
                break;
            }
            cur[i] = lo[i];
            ++i;
        }
        if (i == n) break;
    }
    return out;
}

bool SignSymmetryBasis::annihilates(const Exponent& a) const {
    for (auto& s : generators) {
        int dot = 0;
        for (size_t i = 0; i < s.size() && i < a.size(); ++i) dot += s[i] * a[i];
        if (dot % 2 != 0) return false;
    }
    return true;
}

SignSymmetryBasis sign_symmetries(const ExponentSet& A, int n) {
    if (n > 63) throw std::invalid_argument("sign_symmetries supports up to 63 variables");
    // Rows of the GF(2) system: supports reduced mod 2.
    std::vector<std::uint64_t> rows;
    for (auto& a : A) {
        std::uint64_t r = 0;
        for (int i = 0; i < n; ++i)
            if (a[i] % 2 != 0) r |= (1ull << i);
        if (r != 0) rows.push_back(r);
    }

    // Gaussian elimination to row echelon form; the kernel basis follows from
    // the free columns.
    std::vector<std::uint64_t> echelon;
    std::vector<int> pivot_col;
    for (std::uint64_t r : rows) {
        for (size_t k = 0; k < echelon.size(); ++k)
            if (r & (1ull << pivot_col[k])) r ^= echelon[k];
        if (r == 0) continue;
        int pc = 0;
        while (!(r & (1ull << pc))) ++pc;
        echelon.push_back(r);
        pivot_col.push_back(pc);
    }

    std::vector<bool> is_pivot(n, false);
    for (int pc : pivot_col) is_pivot[pc] = true;

    SignSymmetryBasis basis;
    basis.n = n;
    for (int free_col = 0; free_col < n; ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<int> s(n, 0);
        s[free_col] = 1;
        // Back-substitute: each pivot row fixes its pivot coordinate.
        bool changed = true;
        while (changed) {
            changed = false;
            for (size_t k = 0; k < echelon.size(); ++k) {
                int dot = 0;
                for (int i = 0; i < n; ++i)
                    if (echelon[k] & (1ull << i)) dot ^= s[i];
                if (dot != 0) {
                    s[pivot_col[k]] ^= 1;
                    changed = true;
                }
            }
        }
        basis.generators.push_back(s);
    }
    return basis;
}

std::string polynomial_to_json(const Polynomial& p) {
    nlohmann::ordered_json j;
    j["n"] = p.n();
    j["terms"] = nlohmann::ordered_json::array();
    for (auto& [a, c] : p.terms()) {
        nlohmann::ordered_json t;
        t["exp"] = a;
        t["coef"] = c;
        j["terms"].push_back(t);
    }
    return j.dump();
}

Polynomial polynomial_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    int n = j.at("n").get<int>();
    Polynomial p(n);
    for (auto& t : j.at("terms")) {
        Exponent a = t.at("exp").get<Exponent>();
        double c = t.at("coef").get<double>();
        if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
        p.add_term(a, c);
    }
    return p;
}

}  // namespace momentsos
