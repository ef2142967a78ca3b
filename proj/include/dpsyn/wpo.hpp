#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "dpsyn/dp.hpp"
#include "dpsyn/regression.hpp"
#include "dpsyn/rng.hpp"

namespace dpsyn {

struct WpoConfig {
  double epsilon = 1.0;
  double alpha = 0.1;        // adjacency bound, per-unit power
  double lambda = 1e-3;      // ridge regularization
  double gamma_beta = 1e-5;  // post-processing weight on the beta term
  double gamma_y = 1e-5;     // post-processing weight on the proximity term
  std::uint64_t seed = 0;
  bool noise_off = false;    // deterministic test mode; refuse in production paths

  void validate() const;
};

struct SyntheticWindRelease {
  Eigen::VectorXd y_tilde;       // synthetic measurements in [0,1]
  double ell_bar = 0.0;          // private loss estimate
  Eigen::VectorXd beta_bar;      // private weight estimate
  PrivacyLedger ledger;
  double achieved_loss = 0.0;    // regression loss refit on y_tilde
  Eigen::VectorXd achieved_beta;
};

// The full private release pipeline: Laplace-initialize the measurements,
// privately estimate the regression loss and weights, then post-process.
// Ledger is exactly [init eps/2, loss eps/4, weights eps/4].
SyntheticWindRelease wpo_release(const WindDataset& dataset, const FeatureSpec& spec,
                                 const WpoConfig& config);

// Post-processing stage. By construction this reads only already-privatized
// quantities plus public data (X, lambda, gammas) -- the raw measurements
// must never reach this function. Minimizes
//   |ell_bar - ell| + gamma_beta ||beta_bar - beta|| + gamma_y ||y0 - y||
// over 0 <= y <= 1, beta = (X'X + lambda I)^{-1} X' y, ell >= ||X beta - y||,
// as a second-order cone program.
Eigen::VectorXd wpo_postprocess(const Eigen::VectorXd& y0, double ell_bar,
                                const Eigen::VectorXd& beta_bar, const Eigen::MatrixXd& X,
                                double lambda, double gamma_beta, double gamma_y);

// Reference mechanism: add Laplace(alpha/epsilon) noise and clip to [0,1].
Eigen::VectorXd laplace_baseline(const Eigen::VectorXd& y, double alpha, double epsilon, Rng& rng,
                                 bool noise_off = false);

}  // namespace dpsyn
