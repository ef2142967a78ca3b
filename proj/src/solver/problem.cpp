#include "dpsyn/solver/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpsyn::solver {

int LinearProgram::add_var(double lo, double hi, double obj, std::string name) {
  if (lo > hi) throw std::invalid_argument("variable lower bound exceeds upper bound");
  objective.push_back(obj);
  lower.push_back(lo);
  upper.push_back(hi);
  var_names.push_back(std::move(name));
  return num_vars() - 1;
}

int LinearProgram::add_row(LinExpr expr, RowSense sense, double rhs, std::string name) {
  rows.push_back(Row{std::move(expr), sense, rhs, std::move(name)});
  return static_cast<int>(rows.size()) - 1;
}

void LinearProgram::validate() const {
  const int n = num_vars();
  for (int j = 0; j < n; ++j) {
    if (std::isnan(objective[j]) || std::isnan(lower[j]) || std::isnan(upper[j]) ||
        std::isinf(objective[j])) {
      throw std::invalid_argument("non-finite objective or NaN bound");
    }
    if (lower[j] > upper[j]) throw std::invalid_argument("inconsistent bounds");
  }
  for (const auto& row : rows) {
    if (std::isnan(row.rhs) || std::isinf(row.rhs)) throw std::invalid_argument("non-finite rhs");
    for (const auto& [j, c] : row.expr.terms) {
      if (j < 0 || j >= n) throw std::invalid_argument("row references unknown variable");
      if (std::isnan(c) || std::isinf(c)) throw std::invalid_argument("non-finite coefficient");
    }
  }
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::Limit: return "limit";
  }
  return "unknown";
}

namespace {

void write_bound(std::ostream& os, double v) {
  if (v == kInf) {
    os << "inf";
  } else if (v == -kInf) {
    os << "-inf";
  } else {
    os << v;
  }
}

void write_expr(std::ostream& os, const LinExpr& expr) {
  for (const auto& [j, c] : expr.terms) os << ' ' << c << "*x" << j;
  if (expr.constant != 0.0) os << " + " << expr.constant;
}

void write_core(std::ostream& os, const LinearProgram& lp) {
  os << "vars " << lp.num_vars() << '\n';
  for (int j = 0; j < lp.num_vars(); ++j) {
    os << "x" << j << " obj " << lp.objective[j] << " in [";
    write_bound(os, lp.lower[j]);
    os << ", ";
    write_bound(os, lp.upper[j]);
    os << "]\n";
  }
  os << "rows " << lp.rows.size() << '\n';
  for (const auto& row : lp.rows) {
    os << "row:";
    write_expr(os, row.expr);
    switch (row.sense) {
      case RowSense::LessEqual: os << " <= "; break;
      case RowSense::Equal: os << " == "; break;
      case RowSense::GreaterEqual: os << " >= "; break;
    }
    os << row.rhs << '\n';
  }
}

std::ostream& canonical_stream(std::ostringstream& os) {
  os.precision(17);
  return os;
}

}  // namespace

std::string to_canonical_text(const LinearProgram& lp) {
  std::ostringstream os;
  canonical_stream(os) << "lp\n";
  write_core(os, lp);
  return os.str();
}

std::string to_canonical_text(const ConicProgram& cp) {
  std::ostringstream os;
  canonical_stream(os) << "socp\n";
  write_core(os, cp.core);
  os << "cones " << cp.cones.size() << '\n';
  for (const auto& cone : cp.cones) {
    os << "cone t=x" << cone.t_var << " dim " << cone.rows.size() << '\n';
    for (const auto& row : cone.rows) {
      os << "  norm-row:";
      write_expr(os, row);
      os << '\n';
    }
  }
  return os.str();
}

std::string to_canonical_text(const MixedIntegerProgram& mip) {
  std::ostringstream os;
  canonical_stream(os) << "milp\n";
  write_core(os, mip.core);
  os << "binaries";
  for (int j : mip.binary_vars) os << " x" << j;
  os << '\n';
  return os.str();
}

SolveOutcome solve_lp(const LinearProgram& lp) { return reference_backend().solve_lp(lp); }
SolveOutcome solve_socp(const ConicProgram& cp) { return reference_backend().solve_socp(cp); }
SolveOutcome solve_milp(const MixedIntegerProgram& mip) { return reference_backend().solve_milp(mip); }

}  // namespace dpsyn::solver
