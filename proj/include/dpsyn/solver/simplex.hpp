#pragma once

#include "dpsyn/solver/problem.hpp"

namespace dpsyn::solver {

// Reference LP solver: two-phase bounded-variable primal simplex with a
// Bland anti-cycling fallback. Returns primal values, row duals, reduced
// costs and a residual report.
SolveOutcome simplex_solve(const LinearProgram& lp);

}  // namespace dpsyn::solver
