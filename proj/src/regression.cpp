#include "dpsyn/regression.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dpsyn {

void WindDataset::validate() const {
  if (speeds.size() != power.size()) throw std::invalid_argument("speed and power vectors differ in length");
  if (speeds.size() < 1) throw std::invalid_argument("dataset is empty");
  for (Eigen::Index i = 0; i < power.size(); ++i) {
    if (!(power[i] >= 0.0 && power[i] <= 1.0)) {
      throw std::invalid_argument("normalized power must lie in [0, 1]");
    }
  }
}

WindDataset WindDataset::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open wind dataset: " + path);
  std::string line;
  std::vector<double> xs, ys;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // "speed_ms,power_pu"
      continue;
    }
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
      throw std::runtime_error("malformed wind dataset row: " + line);
    }
    xs.push_back(std::stod(a));
    ys.push_back(std::stod(b));
  }
  WindDataset d;
  d.speeds = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  d.power = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  d.validate();
  return d;
}

void WindDataset::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write wind dataset: " + path);
  out.precision(17);
  out << "speed_ms,power_pu\n";
  for (Eigen::Index i = 0; i < speeds.size(); ++i) {
    out << speeds[i] << ',' << power[i] << '\n';
  }
}

void FeatureSpec::validate() const {
  if (centers.size() < 1) throw std::invalid_argument("feature spec needs at least one center");
  for (Eigen::Index j = 1; j < centers.size(); ++j) {
    if (!(centers[j] > centers[j - 1])) throw std::invalid_argument("centers must be strictly increasing");
  }
}

FeatureSpec FeatureSpec::default_wind() {
  FeatureSpec spec;
  spec.centers = Eigen::VectorXd(5);
  spec.centers << 2.5, 5.0, 7.5, 10.0, 12.5;
  return spec;
}

FeatureMatrix rbf_features(const Eigen::VectorXd& speeds, const FeatureSpec& spec) {
  spec.validate();
  const Eigen::Index m = speeds.size();
  const Eigen::Index p = spec.centers.size();
  Eigen::MatrixXd X(m, p);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const double r = 0.5 * std::abs(speeds[i] - spec.centers[j]);
      X(i, j) = std::exp(-r * r);
    }
  }
  return FeatureMatrix{std::move(X), spec};
}

namespace {

Eigen::LDLT<Eigen::MatrixXd> normal_factor(const Eigen::MatrixXd& X, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  const Eigen::Index p = X.cols();
  Eigen::MatrixXd N = X.transpose() * X;
  N.diagonal().array() += lambda;
  return Eigen::LDLT<Eigen::MatrixXd>(N);
}

}  // namespace

RegressionResult ridge_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
  if (X.rows() != y.size()) throw std::invalid_argument("X and y dimensions do not match");
  const auto ldlt = normal_factor(X, lambda);
  Eigen::VectorXd beta = ldlt.solve(X.transpose() * y);
  const double loss = (X * beta - y).norm();
  return RegressionResult{std::move(beta), loss};
}

Eigen::MatrixXd ridge_solution_map(const Eigen::MatrixXd& X, double lambda) {
  const auto ldlt = normal_factor(X, lambda);
  return ldlt.solve(X.transpose());
}

double weight_sensitivity(const Eigen::MatrixXd& X, double lambda, double alpha) {
  const Eigen::MatrixXd A = ridge_solution_map(X, lambda);
  return A.cwiseAbs().colwise().sum().maxCoeff() * alpha;
}

double loss_sensitivity(const Eigen::MatrixXd& X, double lambda, double alpha) {
  const Eigen::MatrixXd A = ridge_solution_map(X, lambda);  // p x m
  Eigen::MatrixXd H = X * A;                                // m x m
  H.diagonal().array() -= 1.0;
  return H.colwise().norm().maxCoeff() * alpha;
}

SensitivityBounds sensitivity_bounds(const Eigen::MatrixXd& X, double lambda, double alpha) {
  return SensitivityBounds{weight_sensitivity(X, lambda, alpha), loss_sensitivity(X, lambda, alpha), alpha};
}

}  // namespace dpsyn
