#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dpsyn::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };

// Sparse linear expression: sum of coeff * var plus a constant offset.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  void add(int var, double coeff) { terms.emplace_back(var, coeff); }
  double eval(const Eigen::VectorXd& x) const {
    double v = constant;
    for (const auto& [j, c] : terms) v += c * x[j];
    return v;
  }
};

// Canonical LP: minimize c'x subject to row constraints and variable bounds.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> var_names;

  struct Row {
    LinExpr expr;  // constant folded into rhs by the solvers
    RowSense sense;
    double rhs;
    std::string name;
  };
  std::vector<Row> rows;

  int num_vars() const { return static_cast<int>(objective.size()); }

  int add_var(double lo, double hi, double obj, std::string name = {});
  int add_row(LinExpr expr, RowSense sense, double rhs, std::string name = {});

  void validate() const;
};

// Second-order cone block: x[t] >= || (expr_1, ..., expr_r) ||_2.
struct SocConstraint {
  int t_var;
  std::vector<LinExpr> rows;
};

struct ConicProgram {
  LinearProgram core;
  std::vector<SocConstraint> cones;
};

struct MixedIntegerProgram {
  LinearProgram core;
  std::vector<int> binary_vars;  // bounds must be within [0, 1]
  double gap_tol = 1e-6;
  long node_limit = 2000000;
  double time_limit_s = 600.0;
  // Optional warm start; adopted as incumbent if feasible.
  std::optional<Eigen::VectorXd> initial_solution;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, Limit };

struct ResidualReport {
  double primal = 0.0;   // max constraint/bound violation
  double dual = 0.0;     // max dual feasibility violation (LP)
  double gap = 0.0;      // duality gap (LP/SOCP) or proven MIP gap
  double cone = 0.0;     // max second-order-cone violation
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Limit;
  Eigen::VectorXd x;
  Eigen::VectorXd row_duals;       // LP only; shadow prices y = c_B' B^{-1}, so
                                   // reduced costs are c - A'y and y_i = dObj/db_i
  Eigen::VectorXd reduced_costs;   // LP only
  double objective = 0.0;
  ResidualReport residuals;
  double mip_gap = 0.0;
  long nodes = 0;
  int iterations = 0;
  std::string message;
};

const char* to_string(SolveStatus status);

// Canonical text form of a problem, for golden-file fixtures. Deterministic
// for identical problem contents.
std::string to_canonical_text(const LinearProgram& lp);
std::string to_canonical_text(const ConicProgram& cp);
std::string to_canonical_text(const MixedIntegerProgram& mip);

// Pluggable backend contract: problem in, outcome out, no callbacks.
class Backend {
 public:
  struct Capabilities {
    bool lp = false;
    bool socp = false;
    bool milp = false;
  };

  virtual ~Backend() = default;
  virtual Capabilities capabilities() const = 0;
  virtual SolveOutcome solve_lp(const LinearProgram& lp) = 0;
  virtual SolveOutcome solve_socp(const ConicProgram& cp) = 0;
  virtual SolveOutcome solve_milp(const MixedIntegerProgram& mip) = 0;
};

// Self-contained reference backend (simplex / interior point / branch and
// bound), adequate for desk-scale instances.
Backend& reference_backend();

SolveOutcome solve_lp(const LinearProgram& lp);
SolveOutcome solve_socp(const ConicProgram& cp);
SolveOutcome solve_milp(const MixedIntegerProgram& mip);

}  // namespace dpsyn::solver
