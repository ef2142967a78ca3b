#include "dpsyn/wpo.hpp"

#include <algorithm>
#include <stdexcept>

#include "dpsyn/solver/problem.hpp"

namespace dpsyn {

using solver::kInf;
using solver::ConicProgram;
using solver::LinExpr;
using solver::RowSense;
using solver::SocConstraint;
using solver::SolveStatus;

void WpoConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(gamma_beta > 0.0) || !(gamma_y > 0.0)) {
    throw std::invalid_argument("gamma weights must be positive");
  }
}

Eigen::VectorXd wpo_postprocess(const Eigen::VectorXd& y0, double ell_bar,
                                const Eigen::VectorXd& beta_bar, const Eigen::MatrixXd& X,
                                double lambda, double gamma_beta, double gamma_y) {
  const int m = static_cast<int>(X.rows());
  const int p = static_cast<int>(X.cols());
  if (y0.size() != m || beta_bar.size() != p) {
    throw std::invalid_argument("post-processing input dimensions do not match X");
  }
  const Eigen::MatrixXd A = ridge_solution_map(X, lambda);  // beta = A y

  ConicProgram cp;
  std::vector<int> yv(m), bv(p);
  for (int i = 0; i < m; ++i) yv[i] = cp.core.add_var(0.0, 1.0, 0.0);
  for (int j = 0; j < p; ++j) bv[j] = cp.core.add_var(-kInf, kInf, 0.0);
  const int ell = cp.core.add_var(-kInf, kInf, 0.0, "ell");
  const int s = cp.core.add_var(0.0, kInf, 1.0, "s");         // |ell_bar - ell|
  const int tb = cp.core.add_var(-kInf, kInf, gamma_beta, "t_beta");
  const int ty = cp.core.add_var(-kInf, kInf, gamma_y, "t_y");

  // beta = A y, row by row.
  for (int j = 0; j < p; ++j) {
    LinExpr row;
    row.add(bv[j], 1.0);
    for (int i = 0; i < m; ++i) {
      if (A(j, i) != 0.0) row.add(yv[i], -A(j, i));
    }
    cp.core.add_row(row, RowSense::Equal, 0.0);
  }

  // s >= |ell_bar - ell| as two linear rows.
  {
    LinExpr up;  // s + ell >= ell_bar
    up.add(s, 1.0);
    up.add(ell, 1.0);
    cp.core.add_row(up, RowSense::GreaterEqual, ell_bar);
    LinExpr down;  // s - ell >= -ell_bar
    down.add(s, 1.0);
    down.add(ell, -1.0);
    cp.core.add_row(down, RowSense::GreaterEqual, -ell_bar);
  }

  // ell >= ||X beta - y||.
  {
    SocConstraint cone;
    cone.t_var = ell;
    for (int i = 0; i < m; ++i) {
      LinExpr expr;
      for (int j = 0; j < p; ++j) {
        if (X(i, j) != 0.0) expr.add(bv[j], X(i, j));
      }
      expr.add(yv[i], -1.0);
      cone.rows.push_back(std::move(expr));
    }
    cp.cones.push_back(std::move(cone));
  }
  // t_beta >= ||beta - beta_bar||.
  {
    SocConstraint cone;
    cone.t_var = tb;
    for (int j = 0; j < p; ++j) {
      LinExpr expr;
      expr.add(bv[j], 1.0);
      expr.constant = -beta_bar[j];
      cone.rows.push_back(std::move(expr));
    }
    cp.cones.push_back(std::move(cone));
  }
  // t_y >= ||y - y0||.
  {
    SocConstraint cone;
    cone.t_var = ty;
    for (int i = 0; i < m; ++i) {
      LinExpr expr;
      expr.add(yv[i], 1.0);
      expr.constant = -y0[i];
      cone.rows.push_back(std::move(expr));
    }
    cp.cones.push_back(std::move(cone));
  }

  const solver::SolveOutcome out = solver::solve_socp(cp);
  if (out.status != SolveStatus::Optimal) {
    throw std::runtime_error(
        "post-processing cone program did not converge (primal " +
        std::to_string(out.residuals.primal) + ", dual " + std::to_string(out.residuals.dual) +
        ", gap " + std::to_string(out.residuals.gap) + ")");
  }
  Eigen::VectorXd y_tilde(m);
  for (int i = 0; i < m; ++i) y_tilde[i] = std::clamp(out.x[yv[i]], 0.0, 1.0);
  return y_tilde;
}

Eigen::VectorXd laplace_baseline(const Eigen::VectorXd& y, double alpha, double epsilon, Rng& rng,
                                 bool noise_off) {
  if (!(alpha > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument("alpha and epsilon must be positive");
  }
  const double scale = noise_off ? 0.0 : alpha / epsilon;
  Eigen::VectorXd out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    out[i] = std::clamp(y[i] + laplace_sample(scale, rng), 0.0, 1.0);
  }
  return out;
}

SyntheticWindRelease wpo_release(const WindDataset& dataset, const FeatureSpec& spec,
                                 const WpoConfig& config) {
  config.validate();
  dataset.validate();
  const Eigen::MatrixXd X = rbf_features(dataset.speeds, spec).X;
  const SensitivityBounds bounds = sensitivity_bounds(X, config.lambda, config.alpha);
  const BudgetSplit split = split_budget_wpo(config.epsilon);

  Rng rng(config.seed);
  SyntheticWindRelease release;

  // Step 1: Laplace-initialized measurements (identity query, sensitivity alpha).
  const Eigen::VectorXd y0 =
      laplace_mechanism(dataset.power, config.alpha, split.epsilon_1, rng, release.ledger, "init",
                        config.noise_off);

  // Step 2: private loss and weight estimates.
  const RegressionResult fit = ridge_fit(X, dataset.power, config.lambda);
  Eigen::VectorXd ell_vec(1);
  ell_vec << fit.loss;
  release.ell_bar = laplace_mechanism(ell_vec, bounds.delta_ell, split.epsilon_2, rng,
                                      release.ledger, "loss", config.noise_off)[0];
  release.beta_bar = laplace_mechanism(fit.beta, bounds.delta_beta, split.epsilon_2, rng,
                                       release.ledger, "weights", config.noise_off);

  // Step 3: data-independent post-processing.
  release.y_tilde = wpo_postprocess(y0, release.ell_bar, release.beta_bar, X, config.lambda,
                                    config.gamma_beta, config.gamma_y);

  const RegressionResult refit = ridge_fit(X, release.y_tilde, config.lambda);
  release.achieved_loss = refit.loss;
  release.achieved_beta = refit.beta;
  return release;
}

}  // namespace dpsyn
