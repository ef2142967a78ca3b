#pragma once

#include "dpsyn/solver/problem.hpp"

namespace dpsyn::solver {

// Reference MILP solver: branch and bound over the reference simplex with
// best-bound node selection and most-fractional branching, seeded by an
// initial depth-first dive.
SolveOutcome branch_and_bound_solve(const MixedIntegerProgram& mip);

}  // namespace dpsyn::solver
