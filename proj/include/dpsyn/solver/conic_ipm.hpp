#pragma once

#include "dpsyn/solver/problem.hpp"

namespace dpsyn::solver {

// Reference SOCP solver: primal-dual interior-point method with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector step, over the
// cone product (nonnegative orthant) x (second-order cones).
SolveOutcome conic_solve(const ConicProgram& cp);

}  // namespace dpsyn::solver
