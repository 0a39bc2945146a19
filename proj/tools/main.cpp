// Command-line front end: problem ingestion, hierarchy selection, solving,
// reporting, and SDPA export.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "momentsos/extract.hpp"
#include "momentsos/jsr.hpp"
#include "momentsos/relax.hpp"
#include "momentsos/sdpa.hpp"
#include "momentsos/solver.hpp"
#include "momentsos/sonc.hpp"

using namespace momentsos;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolverFailure = 2;
constexpr int kExitInputError = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const nlohmann::ordered_json& report, const std::string& out_path) {
    std::string text = report.dump(2);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        out << text << "\n";
    }
}

ChordalStrategy parse_extension(const std::string& name) {
    if (name == "maximal") return ChordalStrategy::maximal;
    if (name == "min_degree") return ChordalStrategy::min_degree;
    if (name == "min_fillin") return ChordalStrategy::min_fillin;
    throw std::runtime_error("unknown extension: " + name);
}

struct SolveArgs {
    std::string input;
    std::string out;
    int r = 0;  // 0: use r_min
    int s = 1;
    std::string mode = "cs-ts";
    std::string extension = "min_fillin";
    bool first_order_moments = false;
    bool extract_points = false;
    double tol = 1e-6;
    int max_iters = 200000;
    std::uint64_t seed = 0;
};

BlockSDP build_relaxation(const POP& pop, const SolveArgs& args, int r) {
    ChordalStrategy ext = parse_extension(args.extension);
    if (args.mode == "dense") return build_dense(pop, r);
    if (args.mode == "cs") {
        CsOptions opts;
        opts.extension = ext;
        return build_cs(pop, r, opts);
    }
    if (args.mode == "ts") return build_ts(pop, r, args.s, ext);
    if (args.mode == "cs-ts")
        return build_cs_ts(pop, r, args.s, ChordalStrategy::min_fillin, ext);
    if (args.mode == "minimal-initial")
        return minimal_initial_relaxation(pop, args.s, ChordalStrategy::min_fillin, ext);
    throw std::runtime_error("unknown mode: " + args.mode);
}

int run_solve(const SolveArgs& args, bool export_only) {
    POP pop;
    try {
        pop = pop_from_json(read_file(args.input));
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }

    int r = args.r > 0 ? args.r : pop.r_min();
    BlockSDP sdp;
    try {
        sdp = build_relaxation(pop, args, r);
        if (args.first_order_moments && !sdp.cliques.empty())
            sdp = augment_first_order(sdp, sdp.cliques);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }

    if (export_only) {
        std::string text = export_sdpa(sdp);
        if (args.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(args.out);
            out << text;
        }
        return kExitOk;
    }

    SolverOptions opts;
    opts.eps_primal = opts.eps_dual = args.tol;
    opts.max_iters = args.max_iters;
    // Structure is reported for the relaxation as built; the solve runs on
    // the ray-presolved equivalent.
    MomentSolution sol = solve(eliminate_free_diagonal_rays(sdp), opts);

    nlohmann::ordered_json report;
    report["bound"] = sol.objective;
    report["status"] = to_string(sol.status);
    auto sizes = sdp.block_sizes();
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
    report["block_sizes"] = sizes;
    if (!sdp.cliques.empty()) {
        nlohmann::ordered_json cliques = nlohmann::ordered_json::array();
        auto by_clique = sdp.block_sizes_by_clique();
        for (size_t k = 0; k < sdp.cliques.size(); ++k) {
            nlohmann::ordered_json c;
            c["variables"] = sdp.cliques[k];
            auto it = by_clique.find(static_cast<int>(k));
            std::vector<int> bs = it == by_clique.end() ? std::vector<int>{} : it->second;
            std::sort(bs.begin(), bs.end(), std::greater<int>());
            c["block_sizes"] = bs;
            cliques.push_back(c);
        }
        report["clique_blocks"] = cliques;
        nlohmann::ordered_json slots = sdp.clique_slot_counts;
        report["clique_slot_counts"] = slots;
    }
    report["num_moment_vars"] = sdp.num_moment_vars();
    report["residuals"] = {{"primal", sol.primal_residual}, {"dual", sol.dual_residual}};
    report["iterations"] = sol.iterations;

    bool solver_ok = sol.status == SolveStatus::optimal || sol.status == SolveStatus::near_optimal;

    if (args.extract_points && solver_ok) {
        try {
            ExtractedSolutions ext;
            if (!sdp.cliques.empty()) {
                ext = extract_cs(pop, sol, sdp.cliques, r, 1e-3, args.seed);
            } else {
                auto rep = flatness_rank(sol.y, pop.n, r, pop.r_min());
                nlohmann::ordered_json fl;
                nlohmann::ordered_json ranks;
                for (auto& [rp, rank] : rep.ranks) ranks[std::to_string(rp)] = rank;
                fl["ranks"] = ranks;
                if (rep.flat_at) fl["flat_at"] = *rep.flat_at;
                report["flatness"] = fl;
                int rprime = rep.flat_at ? *rep.flat_at : r;
                ext = extract(moment_matrix(sol.y, pop.n, rprime), pop.n, 1e-3, args.seed);
                double obj_tol = std::max(1e-6, 1e3 * sol.primal_residual);
                ext.certified = rep.flat_at.has_value() &&
                                certify_points(pop, ext.points, sol.objective,
                                               std::max(1e-6, 1e2 * sol.primal_residual) * 10,
                                               obj_tol * 10);
            }
            if (!ext.points.empty()) {
                report["minimizers"] = ext.points;
                report["minimizers_certified"] = ext.certified;
            }
        } catch (const OverlapMismatchError& e) {
            report["extraction_error"] = e.what();
        }
    }

    emit(report, args.out);
    return solver_ok ? kExitOk : kExitSolverFailure;
}

int run_jsr(const std::string& input, int r, int s, bool dense, double tol, int depth,
            const std::string& out) {
    MatrixSet A;
    try {
        A = matrix_set_from_json(read_file(input));
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }
    JsrOptions opts;
    opts.tol = tol;
    opts.dense = dense;
    JsrBound ub = jsr_upper(A, r, s, opts);
    double lb = jsr_lower_products(A, depth);

    nlohmann::ordered_json report;
    report["upper"] = ub.value;
    report["lower"] = lb;
    report["r"] = r;
    report["s"] = s;
    report["iterations"] = ub.bisection_steps;
    if (ub.failed) report["upper_failed"] = true;
    emit(report, out);
    return ub.failed ? kExitSolverFailure : kExitOk;
}

int run_sonc_check(const std::string& input, const std::string& out) {
    Polynomial f;
    std::vector<CircuitPolynomial> parts;
    Polynomial residual;
    try {
        sonc_decomposition_from_json(read_file(input), f, parts, residual);
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    }

    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    Polynomial sum = residual.is_zero() ? Polynomial(f.n()) : residual;
    for (size_t i = 0; i < parts.size(); ++i) {
        try {
            if (!is_nonneg_circuit(parts[i]))
                failures.push_back("part " + std::to_string(i) + " is not a nonnegative circuit");
        } catch (const std::exception&) {
            failures.push_back("part " + std::to_string(i) + " is not a valid circuit polynomial");
        }
        if (parts[i].n() == f.n()) sum = sum + parts[i].to_polynomial();
    }
    for (auto& [a, c] : residual.terms()) {
        bool even = true;
        for (int e : a) even = even && e % 2 == 0;
        if (!even || c < 0) {
            failures.push_back("residual is not a sum of monomial squares");
            break;
        }
    }
    if (!sum.equals(f, 1e-9)) failures.push_back("parts and residual do not sum to f");

    bool valid = verify_sonc_decomposition(f, parts, residual);
    nlohmann::ordered_json report;
    report["valid"] = valid;
    report["failures"] = failures;
    emit(report, out);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparsity-adapted moment relaxations, JSR bounds, and SONC certificates"};
    app.require_subcommand(1);

    SolveArgs sargs;
    auto add_solve_flags = [&](CLI::App* cmd) {
        cmd->add_option("input", sargs.input, "problem JSON file")->required();
        cmd->add_option("-r,--order", sargs.r, "relaxation order (default: minimum order)");
        cmd->add_option("-s,--sparse-order", sargs.s, "sparse order");
        cmd->add_option("--mode", sargs.mode,
                        "relaxation family: dense, cs, ts, cs-ts, minimal-initial");
        cmd->add_option("--extension", sargs.extension,
                        "chordal extension: maximal, min_degree, min_fillin");
        cmd->add_flag("--first-order-moments", sargs.first_order_moments,
                      "augment with dense first-order moment blocks");
        cmd->add_option("--tol", sargs.tol, "solver residual tolerance");
        cmd->add_option("--max-iters", sargs.max_iters, "solver iteration cap");
        cmd->add_option("--seed", sargs.seed, "seed for the extraction randomness");
        cmd->add_option("--out", sargs.out, "output path (default: stdout)");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "build and solve a moment relaxation");
    add_solve_flags(solve_cmd);
    solve_cmd->add_flag("--extract", sargs.extract_points, "attempt minimizer extraction");

    CLI::App* export_cmd = app.add_subcommand("export", "write the relaxation in SDPA sparse format");
    add_solve_flags(export_cmd);

    std::string jsr_input, jsr_out;
    int jsr_r = 1, jsr_s = 1, jsr_depth = 6;
    double jsr_tol = 1e-5;
    bool jsr_dense = false;
    CLI::App* jsr_cmd = app.add_subcommand("jsr", "bound the joint spectral radius of a matrix set");
    jsr_cmd->add_option("input", jsr_input, "matrix-set JSON file")->required();
    jsr_cmd->add_option("-r,--order", jsr_r, "relaxation order");
    jsr_cmd->add_option("-s,--sparse-order", jsr_s, "sparse order");
    jsr_cmd->add_flag("--dense", jsr_dense, "disable the term-sparsity pattern");
    jsr_cmd->add_option("--tol", jsr_tol, "bisection tolerance");
    jsr_cmd->add_option("--depth", jsr_depth, "product depth for the lower bound");
    jsr_cmd->add_option("--out", jsr_out, "output path (default: stdout)");

    std::string sonc_input, sonc_out;
    CLI::App* sonc_cmd = app.add_subcommand("sonc-check", "verify a circuit decomposition");
    sonc_cmd->add_option("input", sonc_input, "decomposition JSON file")->required();
    sonc_cmd->add_option("--out", sonc_out, "output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve_cmd->parsed()) return run_solve(sargs, false);
        if (export_cmd->parsed()) return run_solve(sargs, true);
        if (jsr_cmd->parsed()) return run_jsr(jsr_input, jsr_r, jsr_s, jsr_dense, jsr_tol, jsr_depth, jsr_out);
        if (sonc_cmd->parsed()) return run_sonc_check(sonc_input, sonc_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    }
    return kExitInputError;
}
