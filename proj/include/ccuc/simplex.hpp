#pragma once

// Reference LP solver: two-phase primal simplex on a dense tableau with
// native variable bounds (no free-variable splitting, no bound rows).
// Dantzig pricing with a permanent switch to Bland's rule on stall, which
// guarantees termination. Duals are read from the objective row under the
// slack columns and reported so that, for a minimization problem,
//   y_i >= 0 for >= rows, y_i <= 0 for <= rows, free for = rows,
// i.e. b'y equals the optimal objective for programs with zero lower bounds.

#include "ccuc/milp.hpp"

namespace ccuc::milp {

/// Solves a pure LP (binary kinds are treated as their [0,1] relaxation by
/// solve_lp_relaxation; solve_lp itself rejects binaries).
SolveResult solve_lp(const LinearProgram& program, const SolverOptions& options);

/// LP relaxation solve used by branch-and-bound: binary variables are
/// treated as continuous within their current bounds.
SolveResult solve_lp_relaxation(const LinearProgram& program,
                                const SolverOptions& options,
                                const std::vector<double>& lower_override,
                                const std::vector<double>& upper_override);

}  // namespace ccuc::milp
