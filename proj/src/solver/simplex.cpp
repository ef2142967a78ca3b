#include "dpsyn/solver/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace dpsyn::solver {

namespace {

enum class VarState { Basic, AtLower, AtUpper, FreeAtZero };

// Bounded-variable primal simplex over the row-equality form
//   A [x; s] = b,  lo <= [x; s] <= hi,
// with slacks absorbing the row senses and phase-1 artificials. The basis
// inverse is kept explicitly and updated by elementary row operations, with
// periodic refactorization.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& lp) : lp_(lp) { build(); }

  SolveOutcome run();

 private:
  void build();
  void refactorize();
  void recompute_basics();
  bool price(int& entering, double& direction, bool bland);
  SolveStatus iterate_phase(int phase);
  void drive_out_artificials();
  SolveOutcome finish(SolveStatus status);

  const LinearProgram& lp_;
  int n_ = 0;       // structural variables
  int m_ = 0;       // rows
  int total_ = 0;   // structural + slack + artificial
  Eigen::MatrixXd A_;
  Eigen::VectorXd b_;
  Eigen::VectorXd lo_, hi_;
  Eigen::VectorXd cost_;        // phase-2 cost
  Eigen::VectorXd phase_cost_;  // active cost
  Eigen::VectorXd x_;
  Eigen::MatrixXd binv_;
  std::vector<int> basis_;
  std::vector<VarState> state_;
  Eigen::VectorXd duals_;
  long iterations_ = 0;
  long degenerate_streak_ = 0;
  double pivot_tol_ = 1e-9;
  double feas_tol_ = 1e-9;
  double dual_tol_ = 1e-9;
};

void SimplexSolver::build() {
  lp_.validate();
  n_ = lp_.num_vars();
  m_ = static_cast<int>(lp_.rows.size());
  total_ = n_ + 2 * m_;

  A_ = Eigen::MatrixXd::Zero(m_, total_);
  b_ = Eigen::VectorXd::Zero(m_);
  lo_ = Eigen::VectorXd::Constant(total_, -kInf);
  hi_ = Eigen::VectorXd::Constant(total_, kInf);
  cost_ = Eigen::VectorXd::Zero(total_);
  x_ = Eigen::VectorXd::Zero(total_);

  double cmax = 0.0;
  for (int j = 0; j < n_; ++j) {
    lo_[j] = lp_.lower[j];
    hi_[j] = lp_.upper[j];
    cost_[j] = lp_.objective[j];
    cmax = std::max(cmax, std::abs(cost_[j]));
  }
  dual_tol_ = 1e-9 * (1.0 + cmax);

  double bmax = 0.0;
  for (int i = 0; i < m_; ++i) {
    const auto& row = lp_.rows[i];
    for (const auto& [j, c] : row.expr.terms) A_(i, j) += c;
    b_[i] = row.rhs - row.expr.constant;
    bmax = std::max(bmax, std::abs(b_[i]));
    const int slack = n_ + i;
    A_(i, slack) = 1.0;
    switch (row.sense) {
      case RowSense::LessEqual:
        lo_[slack] = 0.0;
        break;
      case RowSense::GreaterEqual:
        hi_[slack] = 0.0;
        break;
      case RowSense::Equal:
        lo_[slack] = 0.0;
        hi_[slack] = 0.0;
        break;
    }
  }
  feas_tol_ = 1e-9 * (1.0 + bmax);

  // Nonbasic start at the finite bound nearest zero (free variables at 0).
  state_.assign(static_cast<std::size_t>(total_), VarState::AtLower);
  for (int j = 0; j < n_ + m_; ++j) {
    if (lo_[j] > -kInf && (std::abs(lo_[j]) <= std::abs(hi_[j]) || hi_[j] == kInf)) {
      x_[j] = lo_[j];
      state_[j] = VarState::AtLower;
    } else if (hi_[j] < kInf) {
      x_[j] = hi_[j];
      state_[j] = VarState::AtUpper;
    } else {
      x_[j] = 0.0;
      state_[j] = VarState::FreeAtZero;
    }
  }

  // Artificial basis absorbing the residual of the nonbasic start.
  Eigen::VectorXd r = b_;
  for (int j = 0; j < n_ + m_; ++j) {
    if (x_[j] != 0.0) r -= A_.col(j) * x_[j];
  }
  basis_.resize(m_);
  for (int i = 0; i < m_; ++i) {
    const int art = n_ + m_ + i;
    A_(i, art) = (r[i] < 0.0) ? -1.0 : 1.0;
    lo_[art] = 0.0;
    hi_[art] = kInf;
    x_[art] = std::abs(r[i]);
    basis_[i] = art;
    state_[art] = VarState::Basic;
  }
}

void SimplexSolver::refactorize() {
  Eigen::MatrixXd B(m_, m_);
  for (int i = 0; i < m_; ++i) B.col(i) = A_.col(basis_[i]);
  binv_ = B.partialPivLu().inverse();
  recompute_basics();
}

void SimplexSolver::recompute_basics() {
  Eigen::VectorXd rhs = b_;
  for (int j = 0; j < total_; ++j) {
    if (state_[j] != VarState::Basic && x_[j] != 0.0) rhs -= A_.col(j) * x_[j];
  }
  const Eigen::VectorXd xb = binv_ * rhs;
  for (int i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
}

bool SimplexSolver::price(int& entering, double& direction, bool bland) {
  Eigen::VectorXd cb(m_);
  for (int i = 0; i < m_; ++i) cb[i] = phase_cost_[basis_[i]];
  duals_ = binv_.transpose() * cb;

  entering = -1;
  direction = 0.0;
  double best = dual_tol_;
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::Basic) continue;
    if (lo_[j] == hi_[j]) continue;  // fixed, never enters
    const double d = phase_cost_[j] - duals_.dot(A_.col(j));
    double dir = 0.0;
    double violation = 0.0;
    if (state_[j] == VarState::AtLower && d < -dual_tol_) {
      dir = 1.0;
      violation = -d;
    } else if (state_[j] == VarState::AtUpper && d > dual_tol_) {
      dir = -1.0;
      violation = d;
    } else if (state_[j] == VarState::FreeAtZero && std::abs(d) > dual_tol_) {
      dir = (d < 0.0) ? 1.0 : -1.0;
      violation = std::abs(d);
    } else {
      continue;
    }
    if (bland) {
      entering = j;
      direction = dir;
      return true;
    }
    if (violation > best) {
      best = violation;
      entering = j;
      direction = dir;
    }
  }
  return entering >= 0;
}

SolveStatus SimplexSolver::iterate_phase(int phase) {
  const long max_iter = 20000L + 200L * static_cast<long>(total_);
  bool bland = false;
  refactorize();
  long since_refactor = 0;

  while (true) {
    if (++iterations_ > max_iter) return SolveStatus::Limit;
    if (since_refactor >= 100) {
      refactorize();
      since_refactor = 0;
    }

    int q = -1;
    double dir = 0.0;
    if (!price(q, dir, bland)) return SolveStatus::Optimal;

    const Eigen::VectorXd w = binv_ * A_.col(q);

    // Ratio test: entering moves by dir * t, basics move by -dir * t * w.
    double t_max = kInf;
    int leave_row = -1;
    double leave_bound = 0.0;
    // Own range.
    const double own_range = hi_[q] - lo_[q];
    if (own_range < kInf) t_max = own_range;
    for (int i = 0; i < m_; ++i) {
      const double wi = dir * w[i];
      const int bi = basis_[i];
      double t_i = kInf;
      double bound = 0.0;
      if (wi > pivot_tol_) {
        if (lo_[bi] > -kInf) {
          t_i = (x_[bi] - lo_[bi]) / wi;
          bound = lo_[bi];
        }
      } else if (wi < -pivot_tol_) {
        if (hi_[bi] < kInf) {
          t_i = (hi_[bi] - x_[bi]) / (-wi);
          bound = hi_[bi];
        }
      } else {
        continue;
      }
      if (t_i < t_max - 1e-12 ||
          (t_i < t_max + 1e-12 && leave_row >= 0 &&
           (bland ? basis_[i] < basis_[leave_row] : std::abs(w[i]) > std::abs(w[leave_row])))) {
        t_max = std::max(t_i, 0.0);
        leave_row = i;
        leave_bound = bound;
      }
    }

    if (t_max == kInf) {
      return (phase == 1) ? SolveStatus::Infeasible : SolveStatus::Unbounded;
    }

    degenerate_streak_ = (t_max <= 1e-12) ? degenerate_streak_ + 1 : 0;
    if (degenerate_streak_ > 500) bland = true;

    if (leave_row < 0) {
      // Bound flip: entering runs across its whole range.
      for (int i = 0; i < m_; ++i) x_[basis_[i]] -= dir * t_max * w[i];
      x_[q] += dir * t_max;
      state_[q] = (dir > 0.0) ? VarState::AtUpper : VarState::AtLower;
      ++since_refactor;
      continue;
    }

    // Pivot: update values, basis, and the basis inverse.
    for (int i = 0; i < m_; ++i) x_[basis_[i]] -= dir * t_max * w[i];
    x_[q] += dir * t_max;
    const int leaving = basis_[leave_row];
    x_[leaving] = leave_bound;
    state_[leaving] = (leave_bound == lo_[leaving]) ? VarState::AtLower : VarState::AtUpper;
    if (lo_[leaving] == -kInf && hi_[leaving] == kInf) state_[leaving] = VarState::FreeAtZero;
    basis_[leave_row] = q;
    state_[q] = VarState::Basic;

    const double piv = w[leave_row];
    binv_.row(leave_row) /= piv;
    for (int i = 0; i < m_; ++i) {
      if (i == leave_row) continue;
      const double f = w[i];
      if (f != 0.0) binv_.row(i) -= f * binv_.row(leave_row);
    }
    ++since_refactor;
  }
}

void SimplexSolver::drive_out_artificials() {
  for (int i = 0; i < m_; ++i) {
    const int bi = basis_[i];
    if (bi < n_ + m_) continue;  // not artificial
    // Degenerate pivot replacing the artificial by any usable column.
    int replacement = -1;
    double best = 1e-7;
    for (int j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      const double wij = binv_.row(i).dot(A_.col(j));
      if (std::abs(wij) > best) {
        best = std::abs(wij);
        replacement = j;
      }
    }
    if (replacement < 0) continue;  // redundant row; artificial stays pinned at 0
    const Eigen::VectorXd w = binv_ * A_.col(replacement);
    const double piv = w[i];
    basis_[i] = replacement;
    state_[replacement] = VarState::Basic;
    state_[bi] = VarState::AtLower;
    x_[bi] = 0.0;
    binv_.row(i) /= piv;
    for (int r = 0; r < m_; ++r) {
      if (r == i) continue;
      const double f = w[r];
      if (f != 0.0) binv_.row(r) -= f * binv_.row(i);
    }
    recompute_basics();
  }
}

SolveOutcome SimplexSolver::finish(SolveStatus status) {
  SolveOutcome out;
  out.status = status;
  out.iterations = static_cast<int>(iterations_);
  if (status != SolveStatus::Optimal && status != SolveStatus::Limit) return out;

  out.x = x_.head(n_);
  out.objective = cost_.head(n_).dot(out.x);
  out.row_duals = duals_;
  out.reduced_costs = Eigen::VectorXd(n_);
  for (int j = 0; j < n_; ++j) out.reduced_costs[j] = cost_[j] - duals_.dot(A_.col(j));

  // Residual report against the original problem statement.
  double primal = 0.0;
  for (int i = 0; i < m_; ++i) {
    const auto& row = lp_.rows[i];
    const double v = row.expr.eval(out.x);
    switch (row.sense) {
      case RowSense::LessEqual: primal = std::max(primal, v - row.rhs); break;
      case RowSense::GreaterEqual: primal = std::max(primal, row.rhs - v); break;
      case RowSense::Equal: primal = std::max(primal, std::abs(v - row.rhs)); break;
    }
  }
  for (int j = 0; j < n_; ++j) {
    if (lp_.lower[j] > -kInf) primal = std::max(primal, lp_.lower[j] - out.x[j]);
    if (lp_.upper[j] < kInf) primal = std::max(primal, out.x[j] - lp_.upper[j]);
  }
  out.residuals.primal = std::max(primal, 0.0);

  double dual = 0.0;
  double dual_obj = duals_.dot(b_);
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::Basic) continue;
    const double d = phase_cost_[j] - duals_.dot(A_.col(j));
    if (lo_[j] != hi_[j]) {
      if (state_[j] == VarState::AtLower) dual = std::max(dual, -d);
      if (state_[j] == VarState::AtUpper) dual = std::max(dual, d);
      if (state_[j] == VarState::FreeAtZero) dual = std::max(dual, std::abs(d));
    }
    dual_obj += d * x_[j];
  }
  // Row duals also price the senses: <= rows need y <= 0 under our
  // lagrangian sign convention via the slack reduced cost, already covered
  // by the loop above.
  out.residuals.dual = std::max(dual, 0.0);
  out.residuals.gap = std::abs(out.objective - dual_obj);
  return out;
}

SolveOutcome SimplexSolver::run() {
  // Phase 1: minimize the artificial mass.
  phase_cost_ = Eigen::VectorXd::Zero(total_);
  for (int j = n_ + m_; j < total_; ++j) phase_cost_[j] = 1.0;
  SolveStatus s1 = iterate_phase(1);
  if (s1 == SolveStatus::Limit) return finish(SolveStatus::Limit);
  double art_mass = 0.0;
  for (int j = n_ + m_; j < total_; ++j) art_mass += std::abs(x_[j]);
  const double bmax = (m_ > 0) ? b_.cwiseAbs().maxCoeff() : 0.0;
  if (s1 == SolveStatus::Infeasible || art_mass > 1e-7 * (1.0 + bmax)) {
    SolveOutcome out;
    out.status = SolveStatus::Infeasible;
    out.iterations = static_cast<int>(iterations_);
    return out;
  }
  drive_out_artificials();
  for (int j = n_ + m_; j < total_; ++j) {
    lo_[j] = 0.0;
    hi_[j] = 0.0;
  }

  // Phase 2: true objective.
  phase_cost_ = cost_;
  degenerate_streak_ = 0;
  SolveStatus s2 = iterate_phase(2);
  if (s2 == SolveStatus::Unbounded) {
    SolveOutcome out;
    out.status = SolveStatus::Unbounded;
    out.iterations = static_cast<int>(iterations_);
    return out;
  }
  if (s2 == SolveStatus::Optimal) {
    refactorize();  // clean inverse for duals and residuals
    int q;
    double dir;
    price(q, dir, false);  // refresh duals_ from the final basis
  }
  return finish(s2);
}

}  // namespace

SolveOutcome simplex_solve(const LinearProgram& lp) {
  SimplexSolver solver(lp);
  return solver.run();
}

}  // namespace dpsyn::solver
