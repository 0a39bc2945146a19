#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "momentsos/relax.hpp"
#include "momentsos/sdpa.hpp"
#include "momentsos/solver.hpp"

using namespace momentsos;

namespace {

BlockSDP correlation_sdp() {
    BlockSDP sdp(0);
    VarId y = sdp.free_variable("y");
    SymbolicMatrix m;
    m.dim = 2;
    AffineForm one;
    one.constant = 1.0;
    AffineForm off;
    off.add(y, 1.0);
    m.set(0, 0, one);
    m.set(1, 1, one);
    m.set(0, 1, off);
    sdp.add_block(std::move(m));
    AffineForm obj;
    obj.add(y, 1.0);
    sdp.set_objective(obj);
    return sdp;
}

}  // namespace

TEST_CASE("export of the correlation-matrix toy problem") {
    std::string text = export_sdpa(correlation_sdp());
    std::istringstream in(text);
    int m, nblock;
    in >> m >> nblock;
    CHECK(m == 1);
    CHECK(nblock == 1);
    int bs;
    in >> bs;
    CHECK(bs == 2);
    double c;
    in >> c;
    CHECK(c == doctest::Approx(1.0));
    // F_0 = -C = -I and F_1 = offdiag(1).
    int matno, blkno, i, j;
    double v;
    std::multiset<std::tuple<int, int, int, int>> entries;
    while (in >> matno >> blkno >> i >> j >> v) entries.insert({matno, blkno, i, j});
    CHECK(entries.count({0, 1, 1, 1}) == 1);
    CHECK(entries.count({0, 1, 2, 2}) == 1);
    CHECK(entries.count({1, 1, 1, 2}) == 1);
}

TEST_CASE("round trip of the toy problem") {
    BlockSDP sdp = correlation_sdp();
    MomentSolution direct = solve(sdp);
    BlockSDP parsed = parse_sdpa(export_sdpa(sdp));
    MomentSolution reparsed = solve(parsed);
    CHECK(reparsed.objective == doctest::Approx(direct.objective).epsilon(1e-6));
}

TEST_CASE("equalities become a paired diagonal block") {
    // min y0 s.t. y0 = 1: scalar block file, optimum 1.
    BlockSDP sdp(1);
    sdp.require_unit_y0();
    AffineForm obj;
    obj.add(sdp.moment(Exponent{0}), 1.0);
    sdp.set_objective(obj);
    // A harmless psd block so the file has one: [y0] >= 0.
    SymbolicMatrix m;
    m.dim = 1;
    AffineForm f;
    f.add(sdp.moment(Exponent{0}), 1.0);
    m.set(0, 0, f);
    sdp.add_block(std::move(m));

    std::string text = export_sdpa(sdp);
    std::istringstream in(text);
    int nvars, nblock;
    in >> nvars >> nblock;
    CHECK(nvars == 1);
    CHECK(nblock == 2);
    int b1, b2;
    in >> b1 >> b2;
    CHECK(b1 == 1);
    CHECK(b2 == -2);  // one equality -> two 1-d inequality rows

    MomentSolution sol = solve(parse_sdpa(text));
    CHECK(sol.objective == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("random tiny block sdps round trip through the format") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        // min c'y over I + sum y_i F_i >= 0 with two random symmetric F's:
        // bounded since the identity offset keeps a Slater point at y = 0.
        BlockSDP sdp(0);
        int nv = 2;
        std::vector<VarId> vars;
        for (int v = 0; v < nv; ++v) vars.push_back(sdp.free_variable("x"));
        int dim = 2 + static_cast<int>(gen() % 2);
        SymbolicMatrix m;
        m.dim = dim;
        for (int i = 0; i < dim; ++i) {
            for (int j = i; j < dim; ++j) {
                AffineForm f;
                if (i == j) f.constant = 1.0;
                for (int v = 0; v < nv; ++v) f.add(vars[v], unif(gen));
                m.set(i, j, f);
            }
        }
        sdp.add_block(std::move(m));
        // small linear objective plus a pinning equality keeps it bounded
        AffineForm obj;
        for (int v = 0; v < nv; ++v) obj.add(vars[v], unif(gen) * 0.1);
        AffineForm norm_eq;  // pin y_0-like combination to stay bounded
        norm_eq.constant = -0.3;
        norm_eq.add(vars[0], 1.0);
        sdp.add_equality(norm_eq);
        sdp.set_objective(obj);

        SolverOptions opts;
        MomentSolution direct = solve(sdp, opts);
        if (direct.status != SolveStatus::optimal) continue;
        MomentSolution reparsed = solve(parse_sdpa(export_sdpa(sdp)), opts);
        CHECK(reparsed.objective == doctest::Approx(direct.objective).epsilon(1e-6));
    }
}

TEST_CASE("moment variables are enumerated graded-lex in the export") {
    POP pop = fixtures::two_var_three_minimizers();
    BlockSDP sdp = build_dense(pop, 1);
    std::string text = export_sdpa(sdp);
    // Objective L_y(f) has coefficient of y_(0,0) = -10 in the first c slot.
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // m
    std::getline(in, line);  // nblock
    std::getline(in, line);  // struct
    std::getline(in, line);  // c
    std::istringstream cs(line);
    double c0;
    cs >> c0;
    CHECK(c0 == doctest::Approx(-10.0));
}

TEST_CASE("parser rejects malformed input") {
    CHECK_THROWS(parse_sdpa("1\n"));
    CHECK_THROWS(parse_sdpa("1\n1\n2 2\n0.0\n"));
    CHECK_NOTHROW(parse_sdpa("* comment\n1\n1\n1\n0.5\n"));
}
