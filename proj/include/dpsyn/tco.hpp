#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dpsyn/dp.hpp"
#include "dpsyn/opf.hpp"
#include "dpsyn/rng.hpp"

namespace dpsyn {

struct TcoConfig {
  double epsilon = 1.0;
  double alpha = 5.0;     // adjacency bound, MW
  int horizon = 1;        // number of restore iterations T
  double psi = 3e3;       // relaxed-OPF penalty, must exceed the population c_max
  std::uint64_t seed = 0;
  bool noise_off = false;
  double mip_gap = 1e-6;
  double mip_time_limit_s = 300.0;
  long mip_node_limit = 2000000;
  double big_m_inflation = 1.0;   // capacity-cap headroom factor (1 is exact)
  int big_m_escalations = 6;      // re-solves allowed when a dual cap binds

  void validate() const;
};

struct TcoIteration {
  int t = 0;
  int k = -1;              // worst-case model index selected this iteration
  double cost_bar = 0.0;   // private worst-case cost estimate
  bool failed = false;     // post-processing failed; previous capacities kept
};

struct TcoTrace {
  std::vector<TcoIteration> iterations;
  PrivacyLedger ledger;
};

struct CapacityRelease {
  Eigen::VectorXd phi_bar;       // synthetic capacities, MW, >= 0
  TcoTrace trace;
  double infeasible_pct = 0.0;   // population share infeasible at phi_bar
  double suboptimality_pct = 0.0;
  bool flagged = false;          // some iteration failed

  nlohmann::json to_json() const;
};

// Nominal OPF costs C_i(f_bar) for every model; computed once and reused
// across iterations and metrics.
Eigen::VectorXd population_costs(const OpfPopulation& population, const Eigen::MatrixXd& F,
                                 const Eigen::VectorXd& f_bar);

// Selection scores |C_i(f_bar) - C_i^R(phi_prev)| for report-noisy-max.
// base_costs must come from population_costs at the true capacities.
Eigen::VectorXd worst_case_scores(const OpfPopulation& population, const Eigen::MatrixXd& F,
                                  const Eigen::VectorXd& base_costs,
                                  const Eigen::VectorXd& phi_prev, double psi);

// One history entry feeding the post-processing MILP: the selected model
// index and the private cost estimate for it.
struct TcoHistoryEntry {
  int k = -1;
  double cost_bar = 0.0;
};

// Post-processing: choose capacities minimizing
//   sum_tau |cost_bar_tau - c_k'p_tau| + ||phi - phi_prev||_1
// where each p_tau is constrained to be DC-OPF-optimal for model k_tau at the
// chosen capacities, enforced through the KKT system with big-M
// complementarity. Reads only privatized quantities and public model data.
Eigen::VectorXd tco_postprocess(const std::vector<TcoHistoryEntry>& history,
                                const Eigen::VectorXd& phi_prev,
                                const std::vector<OpfModel>& models, const Eigen::MatrixXd& F,
                                const TcoConfig& config);

// Post-processing with solution diagnostics, for soundness audits: the
// dispatch cost embedded in each history entry's optimality block, the worst
// complementarity residual, and whether any multiplier sat at its cap.
struct TcoPostprocessDiag {
  Eigen::VectorXd phi;
  std::vector<double> embedded_costs;  // c_k'p_k per history entry
  double max_complementarity = 0.0;    // worst min(dual, slack)/(1 + max(...))
  bool dual_cap_binding = false;
  double mip_gap = 0.0;
};

TcoPostprocessDiag tco_postprocess_diag(const std::vector<TcoHistoryEntry>& history,
                                        const Eigen::VectorXd& phi_prev,
                                        const std::vector<OpfModel>& models,
                                        const Eigen::MatrixXd& F, const TcoConfig& config);

// Population-mean relative cost gap, in percent (uses the relaxed cost at
// the synthetic capacities).
double suboptimality(const OpfPopulation& population, const Eigen::MatrixXd& F,
                     const Eigen::VectorXd& f_bar, const Eigen::VectorXd& phi_bar, double psi);

// Share of models infeasible at the synthetic capacities, in percent.
double infeasible_fraction(const OpfPopulation& population, const Eigen::MatrixXd& F,
                           const Eigen::VectorXd& phi_bar);

// The full private release pipeline: Laplace-initialize capacities, then T
// rounds of noisy worst-case selection, private cost estimation, and KKT
// post-processing. Ledger is [init eps/2] + T x [select eps/(4T),
// cost eps/(4T)].
CapacityRelease tco_release(const OpfPopulation& population, const TcoConfig& config);

}  // namespace dpsyn
