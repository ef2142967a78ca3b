#pragma once

#include <string>

#include <Eigen/Dense>

namespace dpsyn {

// Wind speed/power records. Power is normalized to nameplate, so every
// measurement lives in [0, 1].
struct WindDataset {
  Eigen::VectorXd speeds;  // m/s
  Eigen::VectorXd power;   // per-unit of nameplate, in [0, 1]

  void validate() const;

  static WindDataset read_csv(const std::string& path);
  void write_csv(const std::string& path) const;
};

// Gaussian radial basis features with strictly increasing centers (m/s).
struct FeatureSpec {
  Eigen::VectorXd centers;

  void validate() const;

  // The feature setup used throughout the experiments: five centers on
  // {2.5, 5, 7.5, 10, 12.5} m/s.
  static FeatureSpec default_wind();
};

struct FeatureMatrix {
  Eigen::MatrixXd X;  // m x p, entries in (0, 1]
  FeatureSpec spec;
};

// X_ij = exp(-(0.5 * |x_i - mu_j|)^2).
FeatureMatrix rbf_features(const Eigen::VectorXd& speeds, const FeatureSpec& spec);

struct RegressionResult {
  Eigen::VectorXd beta;
  double loss;  // ||X beta - y||_2, unsquared
};

// Closed-form ridge fit: beta = (X'X + lambda I)^{-1} X' y. lambda must be
// strictly positive so the normal matrix is invertible.
RegressionResult ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda);

// The linear map y -> beta, i.e. (X'X + lambda I)^{-1} X'.
Eigen::MatrixXd ridge_solution_map(const Eigen::MatrixXd& X, double lambda);

// Worst-case sensitivity bounds over alpha-adjacent measurement vectors.
// Both depend only on X, lambda and alpha; neither reads y.
struct SensitivityBounds {
  double delta_beta;
  double delta_ell;
  double alpha;
};

// delta_beta = ||(X'X + lambda I)^{-1} X'||_1 * alpha (induced L1 norm, i.e.
// maximum absolute column sum).
double weight_sensitivity(const Eigen::MatrixXd& X, double lambda, double alpha);

// delta_ell = alpha * max_i ||(H - I) e_i||_2 with H = X (X'X + lambda I)^{-1} X',
// i.e. alpha times the largest column Euclidean norm of H - I.
double loss_sensitivity(const Eigen::MatrixXd& X, double lambda, double alpha);

SensitivityBounds sensitivity_bounds(const Eigen::MatrixXd& X, double lambda, double alpha);

}  // namespace dpsyn
