#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dpsyn/regression.hpp"
#include "dpsyn/rng.hpp"

using namespace dpsyn;

namespace {

// Brute-force sensitivity oracle: sample alpha-adjacent pairs (y, y') and
// track the largest observed |beta(y)-beta(y')|_1 and |l(y)-l(y')|.
struct EmpiricalSensitivity {
  double beta_l1 = 0.0;
  double loss = 0.0;
};

EmpiricalSensitivity probe_sensitivity(const Eigen::MatrixXd& X, double lambda, double alpha,
                                       int pairs, Rng& rng) {
  EmpiricalSensitivity out;
  const Eigen::Index m = X.rows();
  for (int k = 0; k < pairs; ++k) {
    Eigen::VectorXd y(m);
    for (Eigen::Index i = 0; i < m; ++i) y[i] = rng.uniform01();
    Eigen::VectorXd y2 = y;
    const auto idx = static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(m));
    y2[idx] += rng.uniform(-alpha, alpha);
    const RegressionResult a = ridge_fit(X, y, lambda);
    const RegressionResult b = ridge_fit(X, y2, lambda);
    out.beta_l1 = std::max(out.beta_l1, (a.beta - b.beta).cwiseAbs().sum());
    out.loss = std::max(out.loss, std::abs(a.loss - b.loss));
  }
  return out;
}

Eigen::MatrixXd wind_feature_matrix(int m, Rng& rng) {
  Eigen::VectorXd speeds(m);
  for (int i = 0; i < m; ++i) speeds[i] = rng.uniform(2.5, 12.5);
  return rbf_features(speeds, FeatureSpec::default_wind()).X;
}

}  // namespace

TEST_CASE("rbf features evaluate the Gaussian kernel") {
  FeatureSpec spec = FeatureSpec::default_wind();
  REQUIRE(spec.centers.size() == 5);
  Eigen::VectorXd x(3);
  x << 5.0, 7.0, 2.5;
  const FeatureMatrix fm = rbf_features(x, spec);
  CHECK(fm.X(0, 1) == 1.0);                                       // x == center
  CHECK(fm.X(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));  // |x - mu| = 2
  CHECK(fm.X(2, 0) == 1.0);
  for (Eigen::Index i = 0; i < fm.X.rows(); ++i) {
    for (Eigen::Index j = 0; j < fm.X.cols(); ++j) {
      CHECK(fm.X(i, j) > 0.0);
      CHECK(fm.X(i, j) <= 1.0);
    }
  }
}

TEST_CASE("feature spec requires increasing centers") {
  FeatureSpec bad;
  bad.centers = Eigen::VectorXd(2);
  bad.centers << 5.0, 5.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("ridge closed form on a hand-evaluated instance") {
  Eigen::MatrixXd X(2, 1);
  X << 1.0, 1.0;
  Eigen::VectorXd y(2);
  y << 1.0, 1.0;

  const RegressionResult tiny = ridge_fit(X, y, 1e-12);
  CHECK(tiny.beta[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(tiny.loss == doctest::Approx(0.0).epsilon(1e-6));

  const RegressionResult r = ridge_fit(X, y, 2.0);
  CHECK(r.beta[0] == doctest::Approx(0.5).epsilon(1e-12));  // 2 / (2 + 2)
  CHECK(r.loss == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("ridge fit satisfies the normal equations and local optimality") {
  Rng rng(5);
  const Eigen::MatrixXd X = wind_feature_matrix(200, rng);
  Eigen::VectorXd y(200);
  for (int i = 0; i < 200; ++i) y[i] = rng.uniform01();
  const double lambda = 1e-3;
  const RegressionResult r = ridge_fit(X, y, lambda);

  Eigen::MatrixXd N = X.transpose() * X;
  N.diagonal().array() += lambda;
  const Eigen::VectorXd resid = N * r.beta - X.transpose() * y;
  CHECK(resid.norm() <= 1e-9 * (1.0 + (X.transpose() * y).norm()));

  auto objective = [&](const Eigen::VectorXd& beta) {
    return (X * beta - y).squaredNorm() + lambda * beta.squaredNorm();
  };
  const double at_opt = objective(r.beta);
  for (Eigen::Index j = 0; j < r.beta.size(); ++j) {
    for (double step : {1e-3, -1e-3}) {
      Eigen::VectorXd perturbed = r.beta;
      perturbed[j] += step;
      CHECK(objective(perturbed) >= at_opt);
    }
  }
}

TEST_CASE("ridge fit rejects mismatched dimensions and lambda <= 0") {
  Eigen::MatrixXd X(2, 1);
  X << 1.0, 1.0;
  Eigen::VectorXd y(3);
  y << 1.0, 1.0, 1.0;
  CHECK_THROWS_AS(ridge_fit(X, y, 1.0), std::invalid_argument);
  Eigen::VectorXd y2(2);
  y2 << 1.0, 1.0;
  CHECK_THROWS_AS(ridge_fit(X, y2, 0.0), std::invalid_argument);
}

TEST_CASE("weight sensitivity on the identity feature matrix") {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Identity(2, 2);
  CHECK(weight_sensitivity(X, 1e-12, 0.3) == doctest::Approx(0.3).epsilon(1e-9));
  // Linearity in alpha.
  Rng rng(17);
  const Eigen::MatrixXd Xw = wind_feature_matrix(50, rng);
  const double one = weight_sensitivity(Xw, 1e-3, 0.1);
  CHECK(weight_sensitivity(Xw, 1e-3, 0.2) == doctest::Approx(2.0 * one).epsilon(1e-12));
}

TEST_CASE("loss sensitivity vanishes when the hat matrix is the identity") {
  const Eigen::MatrixXd X = Eigen::MatrixXd::Identity(3, 3);
  CHECK(loss_sensitivity(X, 1e-12, 1.0) <= 1e-6);
  Rng rng(18);
  const Eigen::MatrixXd Xw = wind_feature_matrix(50, rng);
  const double one = loss_sensitivity(Xw, 1e-3, 0.1);
  CHECK(loss_sensitivity(Xw, 1e-3, 0.2) == doctest::Approx(2.0 * one).epsilon(1e-12));
}

TEST_CASE("sensitivity bounds dominate a brute-force adjacent-pair probe") {
  Rng rng(2024);
  const Eigen::MatrixXd X = wind_feature_matrix(300, rng);
  const double lambda = 1e-3;
  for (const double alpha : {0.05, 0.3}) {
    const double db = weight_sensitivity(X, lambda, alpha);
    const double dl = loss_sensitivity(X, lambda, alpha);
    const EmpiricalSensitivity emp = probe_sensitivity(X, lambda, alpha, 1000, rng);
    CHECK(emp.beta_l1 <= db);
    CHECK(emp.loss <= dl);
    // The bound is not vacuous: the probe should get within a couple of
    // orders of magnitude.
    CHECK(emp.beta_l1 > 0.0);
    CHECK(emp.loss > 0.0);
  }
}

TEST_CASE("loss is invariant under joint row permutation") {
  Rng rng(77);
  const int m = 40;
  Eigen::MatrixXd X = wind_feature_matrix(m, rng);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) y[i] = rng.uniform01();
  const RegressionResult r = ridge_fit(X, y, 1e-3);

  Eigen::MatrixXd Xp(m, X.cols());
  Eigen::VectorXd yp(m);
  for (int i = 0; i < m; ++i) {
    Xp.row(i) = X.row(m - 1 - i);
    yp[i] = y[m - 1 - i];
  }
  const RegressionResult rp = ridge_fit(Xp, yp, 1e-3);
  CHECK(rp.loss == doctest::Approx(r.loss).epsilon(1e-10));
}

TEST_CASE("wind dataset validation and csv round trip") {
  WindDataset d;
  d.speeds = Eigen::VectorXd(2);
  d.speeds << 4.0, 8.0;
  d.power = Eigen::VectorXd(2);
  d.power << 0.25, 0.75;
  d.validate();

  const std::string path = "test_wind_roundtrip.csv";
  d.write_csv(path);
  const WindDataset back = WindDataset::read_csv(path);
  CHECK(back.speeds == d.speeds);
  CHECK(back.power == d.power);

  d.power[0] = 1.5;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}
