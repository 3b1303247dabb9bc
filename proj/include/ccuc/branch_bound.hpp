#pragma once

// Branch-and-bound MILP layer over the reference simplex.
// Branching: most-fractional binary, ties by lowest variable id.
// Node selection: best bound, ties by node id (deterministic).

#include "ccuc/milp.hpp"

namespace ccuc::milp {

SolveResult solve_milp(const MilpProgram& program,
                       const SolverOptions& options);

}  // namespace ccuc::milp
