#include "dpsyn/solver/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

#include "dpsyn/solver/simplex.hpp"

namespace dpsyn::solver {

namespace {

constexpr double kIntTol = 1e-6;

struct Node {
  std::map<int, int> fixings;  // binary var -> 0/1
  double bound;                // parent LP objective (lower bound)
  long id;                     // FIFO tie-break for determinism
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

class BnB {
 public:
  explicit BnB(const MixedIntegerProgram& mip) : mip_(mip) {
    mip_.core.validate();
    for (int j : mip_.binary_vars) {
      if (j < 0 || j >= mip_.core.num_vars()) throw std::invalid_argument("binary index out of range");
      if (mip_.core.lower[j] < 0.0 || mip_.core.upper[j] > 1.0) {
        throw std::invalid_argument("binary variables must have bounds within [0, 1]");
      }
    }
  }

  SolveOutcome run();

 private:
  SolveOutcome solve_relaxation(const std::map<int, int>& fixings) const;
  int most_fractional(const Eigen::VectorXd& x) const;
  bool integral(const Eigen::VectorXd& x) const;
  void offer_incumbent(const Eigen::VectorXd& x, double obj);
  void dive(const std::map<int, int>& root_fixings, const SolveOutcome& root);

  const MixedIntegerProgram& mip_;
  bool have_incumbent_ = false;
  Eigen::VectorXd incumbent_;
  double incumbent_obj_ = kInf;
  long nodes_ = 0;
  std::chrono::steady_clock::time_point deadline_;
};

SolveOutcome BnB::solve_relaxation(const std::map<int, int>& fixings) const {
  LinearProgram lp = mip_.core;
  for (const auto& [j, v] : fixings) {
    lp.lower[j] = static_cast<double>(v);
    lp.upper[j] = static_cast<double>(v);
  }
  return simplex_solve(lp);
}

int BnB::most_fractional(const Eigen::VectorXd& x) const {
  int best = -1;
  double best_frac = kIntTol;
  for (int j : mip_.binary_vars) {
    const double f = std::abs(x[j] - std::round(x[j]));
    if (f > best_frac) {
      best_frac = f;
      best = j;
    }
  }
  return best;
}

bool BnB::integral(const Eigen::VectorXd& x) const {
  for (int j : mip_.binary_vars) {
    if (std::abs(x[j] - std::round(x[j])) > kIntTol) return false;
  }
  return true;
}

void BnB::offer_incumbent(const Eigen::VectorXd& x, double obj) {
  if (!have_incumbent_ || obj < incumbent_obj_) {
    have_incumbent_ = true;
    incumbent_ = x;
    incumbent_obj_ = obj;
  }
}

// Depth-first dive rounding the most fractional binary toward its LP value;
// cheap way to get an incumbent before the best-bound search starts.
void BnB::dive(const std::map<int, int>& root_fixings, const SolveOutcome& root) {
  std::map<int, int> fixings = root_fixings;
  SolveOutcome cur = root;
  const std::size_t max_depth = mip_.binary_vars.size() + 1;
  for (std::size_t depth = 0; depth < max_depth; ++depth) {
    if (cur.status != SolveStatus::Optimal) return;
    // A dive that can no longer beat the incumbent is abandoned immediately,
    // keeping repeated dives nearly free once a good incumbent exists.
    if (have_incumbent_ && cur.objective >= incumbent_obj_ - 1e-9) return;
    if (integral(cur.x)) {
      offer_incumbent(cur.x, cur.objective);
      return;
    }
    const int j = most_fractional(cur.x);
    fixings[j] = (cur.x[j] >= 0.5) ? 1 : 0;
    ++nodes_;
    cur = solve_relaxation(fixings);
  }
}

SolveOutcome BnB::run() {
  const double limit_s = mip_.time_limit_s > 0 ? mip_.time_limit_s : 3600.0;
  deadline_ = std::chrono::steady_clock::now() +
              std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(limit_s));

  SolveOutcome root = solve_relaxation({});
  ++nodes_;
  if (root.status == SolveStatus::Infeasible || root.status == SolveStatus::Unbounded) {
    root.nodes = nodes_;
    return root;
  }

  if (mip_.initial_solution && integral(*mip_.initial_solution)) {
    // Adopt the warm start if it satisfies the LP with its binaries fixed.
    std::map<int, int> fix;
    for (int j : mip_.binary_vars) fix[j] = static_cast<int>(std::round((*mip_.initial_solution)[j]));
    SolveOutcome fixed = solve_relaxation(fix);
    ++nodes_;
    if (fixed.status == SolveStatus::Optimal) offer_incumbent(fixed.x, fixed.objective);
    if (std::getenv("DPSYN_BNB_DEBUG")) {
      std::fprintf(stderr, "[bnb] warm start status=%d obj=%.6f\n", static_cast<int>(fixed.status),
                   fixed.objective);
    }
  }
  dive({}, root);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  open.push(Node{{}, root.objective, next_id++});
  double best_bound = root.objective;

  const double abs_tol = 1e-9;
  SolveStatus final_status = SolveStatus::Optimal;

  while (!open.empty()) {
    if (nodes_ >= mip_.node_limit || std::chrono::steady_clock::now() > deadline_) {
      final_status = SolveStatus::Limit;
      break;
    }
    Node node = open.top();
    open.pop();
    best_bound = node.bound;
    if (have_incumbent_) {
      const double gap = (incumbent_obj_ - best_bound) / std::max(1.0, std::abs(incumbent_obj_));
      if (gap <= mip_.gap_tol) break;  // proven within gap tolerance
      if (node.bound >= incumbent_obj_ - abs_tol) continue;
    }

    SolveOutcome lp = solve_relaxation(node.fixings);
    ++nodes_;
    if (lp.status == SolveStatus::Infeasible) continue;
    if (lp.status != SolveStatus::Optimal) {
      final_status = SolveStatus::Limit;
      continue;
    }
    if (have_incumbent_ && lp.objective >= incumbent_obj_ - abs_tol) continue;
    if (integral(lp.x)) {
      offer_incumbent(lp.x, lp.objective);
      continue;
    }
    // Periodic dives turn promising open nodes into incumbents, tightening
    // the pruning threshold long before the bound side closes the gap.
    if (nodes_ % 128 == 0) dive(node.fixings, lp);
    const int j = most_fractional(lp.x);
    for (int v : {0, 1}) {
      Node child;
      child.fixings = node.fixings;
      child.fixings[j] = v;
      child.bound = lp.objective;
      child.id = next_id++;
      open.push(child);
    }
  }

  if (std::getenv("DPSYN_BNB_DEBUG")) {
    std::fprintf(stderr, "[bnb] nodes=%ld root=%.6f incumbent=%.6f bound=%.6f open=%zu\n", nodes_,
                 root.objective, incumbent_obj_, best_bound, open.size());
  }
  SolveOutcome out;
  out.nodes = nodes_;
  if (!have_incumbent_) {
    out.status = (final_status == SolveStatus::Limit) ? SolveStatus::Limit : SolveStatus::Infeasible;
    out.message = "no integral solution found";
    return out;
  }
  if (open.empty()) best_bound = incumbent_obj_;

  // Re-solve with the incumbent's binaries fixed for clean residuals/duals.
  std::map<int, int> fix;
  for (int jb : mip_.binary_vars) fix[jb] = static_cast<int>(std::round(incumbent_[jb]));
  SolveOutcome fixed = solve_relaxation(fix);
  out = fixed;
  out.nodes = nodes_;
  out.mip_gap = std::max(0.0, (incumbent_obj_ - best_bound) / std::max(1.0, std::abs(incumbent_obj_)));
  out.status = (final_status == SolveStatus::Limit && out.mip_gap > mip_.gap_tol) ? SolveStatus::Limit
                                                                                  : SolveStatus::Optimal;
  out.residuals.gap = out.mip_gap;
  return out;
}

}  // namespace

SolveOutcome branch_and_bound_solve(const MixedIntegerProgram& mip) {
  BnB solver(mip);
  return solver.run();
}

}  // namespace dpsyn::solver
