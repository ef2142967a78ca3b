#include "dpsyn/solver/branch_and_bound.hpp"
#include "dpsyn/solver/conic_ipm.hpp"
#include "dpsyn/solver/problem.hpp"
#include "dpsyn/solver/simplex.hpp"

namespace dpsyn::solver {

namespace {

class ReferenceBackend final : public Backend {
 public:
  Capabilities capabilities() const override { return Capabilities{true, true, true}; }
  SolveOutcome solve_lp(const LinearProgram& lp) override { return simplex_solve(lp); }
  SolveOutcome solve_socp(const ConicProgram& cp) override { return conic_solve(cp); }
  SolveOutcome solve_milp(const MixedIntegerProgram& mip) override {
    return branch_and_bound_solve(mip);
  }
};

}  // namespace

Backend& reference_backend() {
  static ReferenceBackend backend;
  return backend;
}

}  // namespace dpsyn::solver
