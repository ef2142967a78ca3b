#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpsyn/rng.hpp"

namespace dpsyn {

// Transmission line, oriented from -> to.
struct Line {
  int from;            // bus index
  int to;              // bus index
  double susceptance;  // per-unit, > 0
  double capacity;     // MW, > 0 (the true capacity f_bar entry)
};

// Grid topology, true line capacities, and the nominal scenario (loads,
// generation limits, costs) all buses are indexed 0..n-1.
struct NetworkCase {
  double base_mva = 100.0;
  int slack = 0;
  std::vector<Line> lines;
  Eigen::VectorXd load;     // nominal bus loads, MW
  Eigen::VectorXd cost;     // nominal generation cost, $/MWh (0 at gen-free buses)
  Eigen::VectorXd p_min;    // MW
  Eigen::VectorXd p_max;    // MW (0 at gen-free buses)

  int num_buses() const { return static_cast<int>(load.size()); }
  int num_lines() const { return static_cast<int>(lines.size()); }
  Eigen::VectorXd f_bar() const;  // true capacities as a vector

  void validate() const;  // connectivity, positive capacities/susceptances

  // Case document: {baseMVA, buses:[{id,load_mw}], lines:[{from,to,
  // susceptance_pu,capacity_mw}], generators:[{bus,cost,p_min,p_max}], slack}.
  static NetworkCase read_json(const std::string& path);
  std::string to_json_text() const;
};

// One cost/load/limit scenario over the same network.
struct OpfModel {
  Eigen::VectorXd c;      // $/MWh
  Eigen::VectorXd d;      // MW, >= 0
  Eigen::VectorXd p_min;  // MW
  Eigen::VectorXd p_max;  // MW

  void validate() const;
};

struct OpfPopulation {
  NetworkCase network;
  std::vector<OpfModel> models;
  double c_max = 0.0;  // maximum cost coefficient over the population

  int size() const { return static_cast<int>(models.size()); }
};

enum class OpfStatus { Optimal, Infeasible };

struct OpfSolution {
  OpfStatus status = OpfStatus::Infeasible;
  Eigen::VectorXd p;      // dispatch, MW
  Eigen::VectorXd flows;  // F (p - d), MW
  Eigen::VectorXd v;      // line-limit violations (relaxed problem only)
  double cost = 0.0;      // $/h, includes the penalty term for the relaxed form
};

// Power transfer distribution factors on the slack-reduced system; the slack
// column is identically zero.
Eigen::MatrixXd build_ptdf(const NetworkCase& network);

// Nominal DC-OPF: min c'p s.t. 1'(p - d) = 0, |F (p - d)| <= phi_bar
// (elementwise), p_min <= p <= p_max. Infeasibility is a status, not an error.
OpfSolution solve_opf(const Eigen::MatrixXd& F, const Eigen::VectorXd& phi_bar,
                      const OpfModel& model);

// Relaxed DC-OPF: min c'p + psi 1'v s.t. balance, limits,
// |F (p - d)| <= phi_bar + v, v >= 0. Feasible for any phi_bar >= 0.
OpfSolution solve_relaxed_opf(const Eigen::MatrixXd& F, const Eigen::VectorXd& phi_bar,
                              const OpfModel& model, double psi);

struct PopulationOptions {
  double spread = 0.125;       // +/- band around nominal d and p_max
  double cost_lo = 80.0;       // $/MWh, uniform cost draw
  double cost_hi = 100.0;
  bool sample_p_min = false;   // also jitter p_min (off by default)
  int rejection_cap = 1000;    // max resamples per model before giving up
};

// m scenarios with demand and generation limits drawn uniformly within the
// spread and costs drawn uniformly in [cost_lo, cost_hi]; each model is
// resampled until it is feasible at the true capacities.
OpfPopulation sample_population(const NetworkCase& base, int m, Rng& rng,
                                const PopulationOptions& options = {});

struct AssumptionReport {
  bool feasible_at_fbar = true;          // every model solves at f_bar
  std::vector<int> infeasible_models;    // witnesses if not
  bool cost_lipschitz_ok = true;         // |C(phi1) - C(phi2)| <= c_max * alpha
  int pairs_checked = 0;
  double worst_ratio = 0.0;              // max observed |dC| / (c_max * alpha)
  int worst_model = -1;
};

// Checks feasibility of the whole population at f_bar and probes the cost
// Lipschitz property on random alpha-adjacent capacity pairs.
AssumptionReport check_assumptions(const OpfPopulation& population, const Eigen::VectorXd& f_bar,
                                   double alpha, double psi, int pairs, Rng& rng);

}  // namespace dpsyn
