#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>

#include "dpsyn/opf.hpp"

using namespace dpsyn;

namespace {

// Two buses joined by one line; generator at bus 0, 50 MW load at bus 1.
NetworkCase two_bus(double capacity, bool second_gen = false) {
  NetworkCase net;
  net.slack = 0;
  net.lines = {Line{0, 1, 1.0, capacity}};
  net.load = Eigen::VectorXd::Zero(2);
  net.load << 0.0, 50.0;
  net.cost = Eigen::VectorXd::Zero(2);
  net.cost << 10.0, second_gen ? 20.0 : 0.0;
  net.p_min = Eigen::VectorXd::Zero(2);
  net.p_max = Eigen::VectorXd::Zero(2);
  net.p_max << 100.0, second_gen ? 100.0 : 0.0;
  return net;
}

OpfModel nominal_model(const NetworkCase& net) {
  OpfModel m;
  m.c = net.cost;
  m.d = net.load;
  m.p_min = net.p_min;
  m.p_max = net.p_max;
  return m;
}

// Equal-susceptance triangle: lines 0-1, 1-2, 2-0, slack at bus 0.
NetworkCase three_bus_ring() {
  NetworkCase net;
  net.slack = 0;
  net.lines = {Line{0, 1, 1.0, 100.0}, Line{1, 2, 1.0, 100.0}, Line{2, 0, 1.0, 100.0}};
  net.load = Eigen::VectorXd::Zero(3);
  net.load << 0.0, 60.0, 30.0;
  net.cost = Eigen::VectorXd::Zero(3);
  net.cost << 10.0, 0.0, 30.0;
  net.p_min = Eigen::VectorXd::Zero(3);
  net.p_max = Eigen::VectorXd::Zero(3);
  net.p_max << 150.0, 0.0, 100.0;
  return net;
}

}  // namespace

TEST_CASE("ptdf of the 2-bus network is [0, -1]") {
  const Eigen::MatrixXd F = build_ptdf(two_bus(60.0));
  REQUIRE(F.rows() == 1);
  REQUIRE(F.cols() == 2);
  CHECK(F(0, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(F(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("ptdf of the equal-susceptance ring splits 2/3 - 1/3") {
  const Eigen::MatrixXd F = build_ptdf(three_bus_ring());
  // Injection at bus 1 (withdrawal at the slack): 2/3 on the direct line,
  // 1/3 around the long path.
  CHECK(F(0, 1) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
  CHECK(F(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(F(2, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  // Slack column is identically zero.
  CHECK(F.col(0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("ptdf rejects a disconnected network") {
  NetworkCase net = two_bus(60.0);
  net.load = Eigen::VectorXd::Zero(3);
  net.cost = Eigen::VectorXd::Zero(3);
  net.p_min = Eigen::VectorXd::Zero(3);
  net.p_max = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(build_ptdf(net), std::invalid_argument);
}

TEST_CASE("2-bus opf oracles: 500, 600, infeasible") {
  {
    const NetworkCase net = two_bus(60.0);
    const OpfSolution sol = solve_opf(build_ptdf(net), net.f_bar(), nominal_model(net));
    REQUIRE(sol.status == OpfStatus::Optimal);
    CHECK(sol.cost == doctest::Approx(500.0).epsilon(1e-9));
    CHECK(sol.flows[0] == doctest::Approx(50.0).epsilon(1e-9));
  }
  {
    const NetworkCase net = two_bus(40.0, /*second_gen=*/true);
    const OpfSolution sol = solve_opf(build_ptdf(net), net.f_bar(), nominal_model(net));
    REQUIRE(sol.status == OpfStatus::Optimal);
    CHECK(sol.p[0] == doctest::Approx(40.0).epsilon(1e-9));
    CHECK(sol.p[1] == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(sol.cost == doctest::Approx(600.0).epsilon(1e-9));
  }
  {
    const NetworkCase net = two_bus(40.0);
    const OpfSolution sol = solve_opf(build_ptdf(net), net.f_bar(), nominal_model(net));
    CHECK(sol.status == OpfStatus::Infeasible);
  }
}

TEST_CASE("relaxed opf pays the penalty for the unavoidable violation") {
  const NetworkCase net = two_bus(40.0);
  const OpfSolution sol =
      solve_relaxed_opf(build_ptdf(net), net.f_bar(), nominal_model(net), 3000.0);
  REQUIRE(sol.status == OpfStatus::Optimal);
  CHECK(sol.p[0] == doctest::Approx(50.0).epsilon(1e-9));
  CHECK(sol.v[0] == doctest::Approx(10.0).epsilon(1e-9));
  CHECK(sol.cost == doctest::Approx(30500.0).epsilon(1e-9));
}

TEST_CASE("relaxed opf matches the nominal one when capacities suffice") {
  const NetworkCase net = two_bus(60.0);
  const Eigen::MatrixXd F = build_ptdf(net);
  const OpfModel model = nominal_model(net);
  const OpfSolution nominal = solve_opf(F, net.f_bar(), model);
  const OpfSolution relaxed = solve_relaxed_opf(F, net.f_bar(), model, 3000.0);
  CHECK(relaxed.v.cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(relaxed.cost == doctest::Approx(nominal.cost).epsilon(1e-9));
}

TEST_CASE("relaxed cost is non-increasing in capacity") {
  const NetworkCase net = three_bus_ring();
  const Eigen::MatrixXd F = build_ptdf(net);
  const OpfModel model = nominal_model(net);
  Eigen::VectorXd phi = Eigen::VectorXd::Constant(3, 20.0);
  double prev = solve_relaxed_opf(F, phi, model, 3000.0).cost;
  for (int step = 0; step < 5; ++step) {
    phi.array() += 10.0;
    const double cur = solve_relaxed_opf(F, phi, model, 3000.0).cost;
    CHECK(cur <= prev + 1e-7);
    prev = cur;
  }
}

TEST_CASE("flows are consistent with an independent PTDF product") {
  const NetworkCase net = three_bus_ring();
  const Eigen::MatrixXd F = build_ptdf(net);
  const OpfModel model = nominal_model(net);
  const OpfSolution sol = solve_opf(F, net.f_bar(), model);
  REQUIRE(sol.status == OpfStatus::Optimal);
  const Eigen::VectorXd recomputed = F * (sol.p - model.d);
  CHECK((sol.flows - recomputed).cwiseAbs().maxCoeff() <= 1e-9);
  // Balance and limits.
  CHECK(std::abs(sol.p.sum() - model.d.sum()) <= 1e-6);
  for (int l = 0; l < 3; ++l) CHECK(std::abs(sol.flows[l]) <= net.f_bar()[l] + 1e-6);
}

TEST_CASE("population sampling respects bands, costs, and feasibility") {
  const NetworkCase net = three_bus_ring();
  Rng rng(7);
  const OpfPopulation pop = sample_population(net, 25, rng);
  REQUIRE(pop.size() == 25);
  const Eigen::MatrixXd F = build_ptdf(net);
  const Eigen::VectorXd fbar = net.f_bar();
  for (const auto& model : pop.models) {
    CHECK(solve_opf(F, fbar, model).status == OpfStatus::Optimal);
    for (int i = 0; i < 3; ++i) {
      CHECK(model.d[i] >= net.load[i] * 0.875 - 1e-12);
      CHECK(model.d[i] <= net.load[i] * 1.125 + 1e-12);
      CHECK(model.p_max[i] >= net.p_max[i] * 0.875 - 1e-12);
      CHECK(model.p_max[i] <= net.p_max[i] * 1.125 + 1e-12);
      if (net.p_max[i] > 0.0) {
        CHECK(model.c[i] >= 80.0);
        CHECK(model.c[i] <= 100.0);
      }
    }
  }
  CHECK(pop.c_max <= 100.0);
  CHECK(pop.c_max >= 80.0);
  CHECK_THROWS_AS(sample_population(net, 0, rng), std::invalid_argument);
}

TEST_CASE("population sampling is reproducible from the seed") {
  const NetworkCase net = three_bus_ring();
  Rng a(99), b(99);
  const OpfPopulation p1 = sample_population(net, 5, a);
  const OpfPopulation p2 = sample_population(net, 5, b);
  for (int i = 0; i < 5; ++i) {
    CHECK(p1.models[i].d == p2.models[i].d);
    CHECK(p1.models[i].c == p2.models[i].c);
    CHECK(p1.models[i].p_max == p2.models[i].p_max);
  }
}

TEST_CASE("assumption checks pass on a sampled population") {
  const NetworkCase net = three_bus_ring();
  Rng rng(11);
  const OpfPopulation pop = sample_population(net, 10, rng);
  const AssumptionReport report =
      check_assumptions(pop, net.f_bar(), /*alpha=*/5.0, /*psi=*/3000.0, /*pairs=*/100, rng);
  CHECK(report.feasible_at_fbar);
  CHECK(report.cost_lipschitz_ok);
  CHECK(report.pairs_checked > 0);
  CHECK(report.worst_ratio <= 1.0 + 1e-9);
}

TEST_CASE("case json round trip") {
  const NetworkCase net = three_bus_ring();
  const std::string path = "test_case_roundtrip.json";
  {
    std::ofstream out(path);
    out << net.to_json_text();
  }
  const NetworkCase back = NetworkCase::read_json(path);
  CHECK(back.num_buses() == 3);
  CHECK(back.num_lines() == 3);
  CHECK(back.slack == net.slack);
  CHECK(back.load == net.load);
  CHECK(back.cost == net.cost);
  CHECK(back.p_max == net.p_max);
  CHECK(back.f_bar() == net.f_bar());
}

TEST_CASE("model validation catches inconsistent data") {
  OpfModel m;
  m.c = Eigen::VectorXd::Zero(2);
  m.d = Eigen::VectorXd::Constant(2, 10.0);
  m.p_min = Eigen::VectorXd::Zero(2);
  m.p_max = Eigen::VectorXd::Constant(2, 5.0);  // total p_max < total load
  CHECK_THROWS_AS(m.validate(), std::invalid_argument);
}
