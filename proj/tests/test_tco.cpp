#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "dpsyn/opf.hpp"
#include "dpsyn/rng.hpp"
#include "dpsyn/tco.hpp"

using namespace dpsyn;

namespace {

// Two buses, one line (f_bar = 60), generator at bus 0 (cost 10), load 50 at
// bus 1. PTDF is [0, -1].
NetworkCase two_bus() {
  NetworkCase net;
  net.slack = 0;
  net.lines = {Line{0, 1, 1.0, 60.0}};
  net.load = Eigen::VectorXd::Zero(2);
  net.load << 0.0, 50.0;
  net.cost = Eigen::VectorXd::Zero(2);
  net.cost << 10.0, 0.0;
  net.p_min = Eigen::VectorXd::Zero(2);
  net.p_max = Eigen::VectorXd::Zero(2);
  net.p_max << 100.0, 0.0;
  return net;
}

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

OpfModel nominal_model(const NetworkCase& net) {
  OpfModel m;
  m.c = net.cost;
  m.d = net.load;
  m.p_min = net.p_min;
  m.p_max = net.p_max;
  return m;
}

OpfPopulation singleton_population(const NetworkCase& net) {
  OpfPopulation pop;
  pop.network = net;
  pop.models = {nominal_model(net)};
  pop.c_max = net.cost.maxCoeff();
  return pop;
}

TcoConfig base_config() {
  TcoConfig cfg;
  cfg.epsilon = 1.0;
  cfg.alpha = 5.0;
  cfg.horizon = 1;
  cfg.psi = 3000.0;
  cfg.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("population costs match the hand-computed nominal dispatch") {
  const NetworkCase net = two_bus();
  const OpfPopulation pop = singleton_population(net);
  const Eigen::MatrixXd F = build_ptdf(net);
  const Eigen::VectorXd costs = population_costs(pop, F, net.f_bar());
  REQUIRE(costs.size() == 1);
  CHECK(costs[0] == doctest::Approx(500.0).epsilon(1e-9));
}

TEST_CASE("worst-case scores vanish at the true capacities") {
  const NetworkCase net = three_bus_ring();
  Rng rng(5);
  const OpfPopulation pop = sample_population(net, 8, rng);
  const Eigen::MatrixXd F = build_ptdf(net);
  const Eigen::VectorXd base = population_costs(pop, F, net.f_bar());
  const Eigen::VectorXd scores = worst_case_scores(pop, F, base, net.f_bar(), 3000.0);
  CHECK(scores.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("worst-case score equals the hand value when a line is cut short") {
  const NetworkCase net = two_bus();
  const OpfPopulation pop = singleton_population(net);
  const Eigen::MatrixXd F = build_ptdf(net);
  const Eigen::VectorXd base = population_costs(pop, F, net.f_bar());
  Eigen::VectorXd phi_prev(1);
  phi_prev << 40.0;
  // Relaxed cost: serve the 50 MW load, pay the 10 MW violation ->
  // 10*50 + 3000*10 = 30500, so the gap to the 500 base cost is 30000.
  const Eigen::VectorXd scores = worst_case_scores(pop, F, base, phi_prev, 3000.0);
  CHECK(scores[0] == doctest::Approx(30000.0).epsilon(1e-9));
}

TEST_CASE("post-processing restores exactly the capacity the target cost needs") {
  const NetworkCase net = two_bus();
  const Eigen::MatrixXd F = build_ptdf(net);
  Eigen::VectorXd phi_prev(1);
  phi_prev << 40.0;
  // Target cost 500 requires the full 50 MW flow; moving further than 50 only
  // adds movement penalty, so the optimum is exactly 50.
  const std::vector<TcoHistoryEntry> history = {{0, 500.0}};
  const std::vector<OpfModel> models = {nominal_model(net)};
  const Eigen::VectorXd phi = tco_postprocess(history, phi_prev, models, F, base_config());
  REQUIRE(phi.size() == 1);
  CHECK(phi[0] == doctest::Approx(50.0).epsilon(1e-4));
  // The embedded dispatch claim is verifiable with an independent solve.
  const OpfSolution check = solve_opf(F, phi, models[0]);
  REQUIRE(check.status == OpfStatus::Optimal);
  CHECK(check.cost == doctest::Approx(500.0).epsilon(1e-6));
}

TEST_CASE("post-processing keeps capacities put when the target is already met") {
  const NetworkCase net = two_bus();
  const Eigen::MatrixXd F = build_ptdf(net);
  Eigen::VectorXd phi_prev(1);
  phi_prev << 60.0;
  const std::vector<TcoHistoryEntry> history = {{0, 500.0}};
  const std::vector<OpfModel> models = {nominal_model(net)};
  const Eigen::VectorXd phi = tco_postprocess(history, phi_prev, models, F, base_config());
  CHECK(phi[0] == doctest::Approx(60.0).epsilon(1e-4));
}

TEST_CASE("post-processing is a pure function of the privatized inputs") {
  const NetworkCase net = three_bus_ring();
  const Eigen::MatrixXd F = build_ptdf(net);
  const std::vector<TcoHistoryEntry> history = {{0, 700.0}};
  const std::vector<OpfModel> models = {nominal_model(net)};
  Eigen::VectorXd phi_prev(3);
  phi_prev << 50.0, 40.0, 45.0;
  const Eigen::VectorXd r1 = tco_postprocess(history, phi_prev, models, F, base_config());
  const Eigen::VectorXd r2 = tco_postprocess(history, phi_prev, models, F, base_config());
  REQUIRE(r1.size() == r2.size());
  CHECK(std::memcmp(r1.data(), r2.data(), sizeof(double) * r1.size()) == 0);
}

TEST_CASE("noise-off release reproduces the true capacities") {
  const NetworkCase net = three_bus_ring();
  Rng rng(9);
  const OpfPopulation pop = sample_population(net, 6, rng);
  TcoConfig cfg = base_config();
  cfg.noise_off = true;
  cfg.horizon = 2;
  const CapacityRelease rel = tco_release(pop, cfg);
  CHECK((rel.phi_bar - net.f_bar()).cwiseAbs().maxCoeff() <= 1e-3);
  CHECK(rel.infeasible_pct == 0.0);
  CHECK(rel.suboptimality_pct <= 1e-4);
  CHECK_FALSE(rel.flagged);
  CHECK(compose(rel.trace.ledger) == 1.0);
}

TEST_CASE("release ledger is exactly [eps/2] plus 2T charges of eps/(4T)") {
  const NetworkCase net = two_bus();
  Rng rng(21);
  const OpfPopulation pop = sample_population(net, 4, rng);
  for (double eps : {1.0, 0.3}) {
    for (int T : {1, 3}) {
      TcoConfig cfg = base_config();
      cfg.epsilon = eps;
      cfg.horizon = T;
      cfg.seed = 17;
      const CapacityRelease rel = tco_release(pop, cfg);
      const auto& entries = rel.trace.ledger.entries();
      REQUIRE(static_cast<int>(entries.size()) == 1 + 2 * T);
      CHECK(entries[0].label == "init");
      CHECK(entries[0].epsilon.value() == eps / 2.0);
      for (int t = 0; t < T; ++t) {
        CHECK(entries[1 + 2 * t].label == "select");
        CHECK(entries[2 + 2 * t].label == "cost");
      }
      CHECK(compose(rel.trace.ledger) == eps);  // exact, not approximate
      REQUIRE(static_cast<int>(rel.trace.iterations.size()) == T);
    }
  }
}

TEST_CASE("release is reproducible and keeps capacities nonnegative") {
  const NetworkCase net = three_bus_ring();
  Rng rng(33);
  const OpfPopulation pop = sample_population(net, 5, rng);
  TcoConfig cfg = base_config();
  cfg.seed = 41;
  const CapacityRelease a = tco_release(pop, cfg);
  const CapacityRelease b = tco_release(pop, cfg);
  CHECK(a.phi_bar == b.phi_bar);
  CHECK(a.phi_bar.minCoeff() >= 0.0);
  REQUIRE(a.trace.iterations.size() == b.trace.iterations.size());
  CHECK(a.trace.iterations[0].k == b.trace.iterations[0].k);
}

TEST_CASE("infeasibility metric counts models that cannot be served") {
  const NetworkCase net = two_bus();
  OpfPopulation pop;
  pop.network = net;
  pop.models = {nominal_model(net), nominal_model(net)};
  pop.models[1].d[1] = 45.0;
  pop.c_max = 10.0;
  const Eigen::MatrixXd F = build_ptdf(net);
  Eigen::VectorXd phi(1);
  phi << 47.0;  // serves the 45 MW load, not the 50 MW one
  CHECK(infeasible_fraction(pop, F, phi) == doctest::Approx(50.0).epsilon(1e-12));
  phi << 60.0;
  CHECK(infeasible_fraction(pop, F, phi) == 0.0);
  CHECK(suboptimality(pop, F, net.f_bar(), phi, 3000.0) <= 1e-9);
}

TEST_CASE("release json carries the trace, ledger, and metrics") {
  const NetworkCase net = two_bus();
  Rng rng(55);
  const OpfPopulation pop = sample_population(net, 3, rng);
  TcoConfig cfg = base_config();
  cfg.seed = 5;
  const CapacityRelease rel = tco_release(pop, cfg);
  const nlohmann::json j = rel.to_json();
  CHECK(j.contains("phi_bar"));
  CHECK(j["trace"]["iterations"].size() == 1);
  CHECK(j["ledger"]["entries"].size() == 3);
  CHECK(j["metrics"].contains("infeasible_pct"));
  CHECK(j.contains("flagged"));
}

TEST_CASE("config validation rejects bad parameters") {
  TcoConfig cfg = base_config();
  cfg.epsilon = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = base_config();
  cfg.horizon = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = base_config();
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = base_config();
  cfg.psi = -5.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
