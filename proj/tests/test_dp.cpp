#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dpsyn/dp.hpp"

using namespace dpsyn;

TEST_CASE("laplace_sample degenerate scale returns exactly zero") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(laplace_sample(0.0, rng) == 0.0);
  CHECK_THROWS_AS(laplace_sample(-1.0, rng), std::invalid_argument);
}

TEST_CASE("laplace_sample matches analytic variance and |x| median") {
  const double scale = 2.5;
  const int n = 1000000;
  Rng rng(20240817);
  double sum = 0.0, sumsq = 0.0;
  int below_median = 0;
  const double median_abs = scale * std::log(2.0);
  for (int i = 0; i < n; ++i) {
    const double x = laplace_sample(scale, rng);
    sum += x;
    sumsq += x * x;
    if (std::abs(x) <= median_abs) ++below_median;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) <= 3.0 * scale * std::sqrt(2.0 / n));
  CHECK(std::abs(var / (2.0 * scale * scale) - 1.0) <= 0.05);
  CHECK(std::abs(static_cast<double>(below_median) / n - 0.5) <= 0.01);
}

TEST_CASE("laplace sampling is reproducible bit-for-bit from the seed") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) CHECK(laplace_sample(1.7, a) == laplace_sample(1.7, b));
}

TEST_CASE("laplace_mechanism uses scale sensitivity/epsilon and charges once") {
  PrivacyLedger ledger;
  Rng rng(7);
  Eigen::VectorXd y(3);
  y << 1.0, 2.0, 3.0;

  // Same seed, manual noise with the expected scale 10/1.
  Rng check(7);
  Eigen::VectorXd expected(3);
  for (int i = 0; i < 3; ++i) expected[i] = y[i] + laplace_sample(10.0, check);

  const Eigen::VectorXd out = laplace_mechanism(y, 10.0, Epsilon(1.0), rng, ledger, "q");
  CHECK(out == expected);
  REQUIRE(ledger.entries().size() == 1);
  CHECK(ledger.entries()[0].label == "q");
  CHECK(ledger.total() == 1.0);
}

TEST_CASE("laplace_mechanism concentrates for very large epsilon") {
  PrivacyLedger ledger;
  Rng rng(11);
  Eigen::VectorXd y(1);
  y << 0.5;
  const Eigen::VectorXd out = laplace_mechanism(y, 0.3, Epsilon(1e12), rng, ledger, "q");
  CHECK(out[0] == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("laplace_mechanism rejects bad parameters") {
  PrivacyLedger ledger;
  Rng rng(1);
  Eigen::VectorXd y(1);
  y << 0.0;
  CHECK_THROWS_AS(laplace_mechanism(y, 0.0, Epsilon(1.0), rng, ledger, "q"), std::invalid_argument);
  CHECK_THROWS_AS(Epsilon(-1.0), std::invalid_argument);
}

TEST_CASE("report_noisy_max reduces to argmax with noise off") {
  PrivacyLedger ledger;
  Rng rng(3);
  Eigen::VectorXd scores(3);
  scores << 1.0, 5.0, 3.0;
  CHECK(report_noisy_max(scores, 1.0, Epsilon(1.0), rng, ledger, "sel", true) == 1);

  Eigen::VectorXd equal = Eigen::VectorXd::Constant(5, 2.0);
  CHECK(report_noisy_max(equal, 1.0, Epsilon(1.0), rng, ledger, "sel", true) == 0);

  Eigen::VectorXd empty(0);
  CHECK_THROWS_AS(report_noisy_max(empty, 1.0, Epsilon(1.0), rng, ledger, "sel"), std::invalid_argument);
  CHECK(ledger.entries().size() == 2);  // one charge per successful selection
}

TEST_CASE("report_noisy_max selection frequencies respect the epsilon bound") {
  // Adjacent score vectors [0, delta] and [delta, 0] with sensitivity delta:
  // the probability of selecting index 1 may differ by at most exp(eps)
  // between the two. Monte-Carlo estimate with a generous statistical margin.
  const double delta = 1.0;
  const double eps = 0.7;
  const int trials = 200000;
  Eigen::VectorXd s1(2), s2(2);
  s1 << 0.0, delta;
  s2 << delta, 0.0;
  Rng rng(99);
  int hits1 = 0, hits2 = 0;
  PrivacyLedger ledger;
  for (int i = 0; i < trials; ++i) {
    if (report_noisy_max(s1, delta, Epsilon(eps), rng, ledger, "a") == 1) ++hits1;
    if (report_noisy_max(s2, delta, Epsilon(eps), rng, ledger, "b") == 1) ++hits2;
  }
  const double p1 = static_cast<double>(hits1) / trials;
  const double p2 = static_cast<double>(hits2) / trials;
  CHECK(p1 / p2 <= std::exp(eps) * 1.05);
  CHECK(p2 / p1 >= std::exp(-eps) * 0.95);
}

TEST_CASE("compose sums ledger entries") {
  PrivacyLedger ledger;
  CHECK(compose(ledger) == 0.0);
  ledger.charge("a", Epsilon(0.5));
  ledger.charge("b", Epsilon(0.25));
  ledger.charge("c", Epsilon(0.25));
  CHECK(compose(ledger) == 1.0);
}

TEST_CASE("compose closes exactly for fractional splits") {
  // One entry of eps/2 plus 2T entries of eps/(4T) must total exactly eps,
  // including T where eps/(4T) is not representable.
  for (const double eps : {1.0, 0.3, 2.7}) {
    for (const int t : {1, 3, 7, 10}) {
      const BudgetSplit split = split_budget_tco(eps, t);
      PrivacyLedger ledger;
      ledger.charge("init", split.epsilon_1);
      for (int i = 0; i < t; ++i) {
        ledger.charge("select", split.epsilon_2);
        ledger.charge("cost", split.epsilon_2);
      }
      CHECK(compose(ledger) == eps);
      CHECK(ledger.entries().size() == static_cast<std::size_t>(1 + 2 * t));
    }
  }
}

TEST_CASE("budget splits match the theorem settings") {
  const BudgetSplit wpo = split_budget_wpo(1.0);
  CHECK(wpo.epsilon_1.value() == 0.5);
  CHECK(wpo.epsilon_2.value() == 0.25);
  const BudgetSplit wpo2 = split_budget_wpo(2.0);
  CHECK(wpo2.epsilon_1.value() == 1.0);
  CHECK(wpo2.epsilon_2.value() == 0.5);

  const BudgetSplit tco = split_budget_tco(1.0, 10);
  CHECK(tco.epsilon_1.value() == 0.5);
  CHECK(tco.epsilon_2.value() == 0.025);
  const BudgetSplit tco1 = split_budget_tco(1.0, 1);
  CHECK(tco1.epsilon_2.value() == 0.25);

  CHECK_THROWS_AS(split_budget_wpo(0.0), std::invalid_argument);
  CHECK_THROWS_AS(split_budget_tco(1.0, 0), std::invalid_argument);
}

TEST_CASE("ledger serializes entries and total") {
  PrivacyLedger ledger;
  ledger.charge("init", Epsilon(0.5));
  ledger.charge("loss", Epsilon(0.25));
  const auto j = ledger.to_json();
  CHECK(j["entries"].size() == 2);
  CHECK(j["entries"][0]["label"] == "init");
  CHECK(j["entries"][0]["epsilon"] == 0.5);
  CHECK(j["total"] == 0.75);
}

TEST_CASE("derived rng streams are independent and reproducible") {
  Rng base(1234);
  Rng d1 = base.derive(1);
  Rng d2 = base.derive(1);
  CHECK(d1.next_u64() == d2.next_u64());
  CHECK(Rng(1234 ^ 2).next_u64() == base.derive(2).next_u64());
}
