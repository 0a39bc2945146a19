#pragma once

#include <vector>

namespace momentsos {

// Dense two-phase simplex for the tiny LPs used by the Newton-polytope
// membership oracle and the SimSel simplex selection. Standard form:
//   max c'x  s.t.  A x = b, x >= 0.
struct LpResult {
    enum class Status { optimal, infeasible, unbounded } status;
    std::vector<double> x;
    double objective = 0.0;
};

LpResult solve_lp_max(const std::vector<double>& c,
                      const std::vector<std::vector<double>>& A,
                      const std::vector<double>& b);

// Whether {x >= 0 : A x = b} is nonempty.
bool lp_feasible(const std::vector<std::vector<double>>& A, const std::vector<double>& b);

}  // namespace momentsos
