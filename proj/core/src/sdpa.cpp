#include "momentsos/sdpa.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace momentsos {

namespace {

// SDPA primal: min c'x s.t. X = sum_i x_i F_i - F_0, X >= 0. Our LMI
// M(y) = C + sum_i y_i A_i >= 0 maps to F_i = A_i, F_0 = -C.
void append_entry(std::string& out, int matno, int blkno, int i, int j, double v) {
    if (v == 0.0) return;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d %d %d %d %.17g\n", matno, blkno, i, j, v);
    out += buf;
}

}  // namespace

std::string export_sdpa(const BlockSDP& sdp) {
    const int nvars = sdp.num_vars();

    // Permutation: moment variables first in graded-lex order, then the rest.
    std::vector<int> order;
    order.reserve(nvars);
    std::vector<bool> used(nvars, false);
    for (auto& [a, id] : sdp.moment_index()) {
        order.push_back(id);
        used[id] = true;
    }
    for (int v = 0; v < nvars; ++v)
        if (!used[v]) order.push_back(v);
    std::vector<int> rank(nvars);
    for (int i = 0; i < nvars; ++i) rank[order[i]] = i + 1;  // SDPA is 1-based

    const int neq = static_cast<int>(sdp.equalities().size());
    const int nblocks = static_cast<int>(sdp.blocks().size()) + (neq > 0 ? 1 : 0);

    std::string out;
    out += std::to_string(nvars) + "\n";
    out += std::to_string(nblocks) + "\n";
    {
        std::string line;
        for (auto& b : sdp.blocks()) line += std::to_string(b.dim) + " ";
        if (neq > 0) line += std::to_string(-2 * neq) + " ";
        if (!line.empty()) line.pop_back();
        out += line + "\n";
    }
    {
        std::vector<double> c(nvars, 0.0);
        for (auto& [v, coef] : sdp.objective().terms) c[rank[v] - 1] = coef;
        std::string line;
        char buf[64];
        for (int i = 0; i < nvars; ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g ", c[i]);
            line += buf;
        }
        if (!line.empty()) line.pop_back();
        out += line + "\n";
    }

    for (size_t bi = 0; bi < sdp.blocks().size(); ++bi) {
        const auto& b = sdp.blocks()[bi];
        int blkno = static_cast<int>(bi) + 1;
        for (auto& [ij, f] : b.entries) {
            auto [i, j] = ij;
            append_entry(out, 0, blkno, i + 1, j + 1, -f.constant);
            for (auto& [v, coef] : f.terms) append_entry(out, rank[v], blkno, i + 1, j + 1, coef);
        }
    }
    if (neq > 0) {
        int blkno = nblocks;
        for (int e = 0; e < neq; ++e) {
            const auto& f = sdp.equalities()[e];
            int ip = 2 * e + 1, im = 2 * e + 2;  // f >= 0 and -f >= 0
            append_entry(out, 0, blkno, ip, ip, -f.constant);
            append_entry(out, 0, blkno, im, im, f.constant);
            for (auto& [v, coef] : f.terms) {
                append_entry(out, rank[v], blkno, ip, ip, coef);
                append_entry(out, rank[v], blkno, im, im, -coef);
            }
        }
    }
    return out;
}

BlockSDP parse_sdpa(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> data_lines;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == '*' || line[pos] == '"') continue;
        data_lines.push_back(line);
    }
    if (data_lines.size() < 4) throw std::invalid_argument("truncated SDPA file");

    auto parse_ints = [](const std::string& s) {
        std::istringstream is(s);
        std::vector<double> v;
        double x;
        while (is >> x) v.push_back(x);
        return v;
    };

    int m = static_cast<int>(parse_ints(data_lines[0]).at(0));
    int nblock = static_cast<int>(parse_ints(data_lines[1]).at(0));
    auto structure = parse_ints(data_lines[2]);
    if (static_cast<int>(structure.size()) != nblock)
        throw std::invalid_argument("bLOCKsTRUCT length mismatch");
    auto cvec = parse_ints(data_lines[3]);
    if (static_cast<int>(cvec.size()) != m) throw std::invalid_argument("c vector length mismatch");

    BlockSDP sdp(0);
    std::vector<VarId> vars;
    vars.reserve(m);
    for (int i = 0; i < m; ++i) vars.push_back(sdp.free_variable("x" + std::to_string(i + 1)));

    AffineForm obj;
    for (int i = 0; i < m; ++i) obj.add(vars[i], cvec[i]);
    sdp.set_objective(obj);

    // Diagonal blocks (negative size) expand to 1x1 blocks.
    struct BlockRef {
        bool diagonal;
        int dim;
        int first;  // index into sdp block list of the (i=1) sub-block
    };
    std::vector<SymbolicMatrix> mats;
    std::vector<BlockRef> refs;
    for (int b = 0; b < nblock; ++b) {
        int sz = static_cast<int>(structure[b]);
        if (sz >= 0) {
            SymbolicMatrix sm;
            sm.dim = sz;
            refs.push_back({false, sz, static_cast<int>(mats.size())});
            mats.push_back(std::move(sm));
        } else {
            refs.push_back({true, -sz, static_cast<int>(mats.size())});
            for (int k = 0; k < -sz; ++k) {
                SymbolicMatrix sm;
                sm.dim = 1;
                mats.push_back(std::move(sm));
            }
        }
    }

    for (size_t li = 4; li < data_lines.size(); ++li) {
        auto vals = parse_ints(data_lines[li]);
        if (vals.empty()) continue;
        if (vals.size() != 5) throw std::invalid_argument("bad entry line: " + data_lines[li]);
        int matno = static_cast<int>(vals[0]);
        int blkno = static_cast<int>(vals[1]) - 1;
        int i = static_cast<int>(vals[2]) - 1;
        int j = static_cast<int>(vals[3]) - 1;
        double v = vals[4];
        if (blkno < 0 || blkno >= nblock || i > j) throw std::invalid_argument("bad entry");
        const auto& ref = refs[blkno];
        SymbolicMatrix& sm = mats[ref.first + (ref.diagonal ? i : 0)];
        int ii = ref.diagonal ? 0 : i;
        int jj = ref.diagonal ? 0 : j;
        if (ref.diagonal && i != j) throw std::invalid_argument("off-diagonal entry in diagonal block");
        AffineForm f = sm.entry(ii, jj) ? *sm.entry(ii, jj) : AffineForm{};
        if (matno == 0)
            f.constant += -v;  // X = sum x_i F_i - F_0
        else if (matno >= 1 && matno <= m)
            f.add(vars[matno - 1], v);
        else
            throw std::invalid_argument("matno out of range");
        sm.set(ii, jj, std::move(f));
    }
    for (auto& sm : mats) sdp.add_block(std::move(sm));
    return sdp;
}

}  // namespace momentsos
