#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpsyn/opf.hpp"
#include "dpsyn/regression.hpp"

namespace dpsyn {

// Library/artifact version embedded in every output file.
inline constexpr const char* kVersion = "1.0.0";

// FNV-1a 64-bit hash of the canonical (compact, sorted-key) JSON dump; stamps
// outputs so a result file can be matched to the exact configuration.
std::string config_hash(const nlohmann::json& config);

// Mean, standard deviation and linear-interpolation percentiles of a sample.
struct SummaryStats {
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double p05 = 0.0;
  double p95 = 0.0;
};

SummaryStats summarize(std::vector<double> values);

// Runs replications 0..n-1 on up to `jobs` worker threads. The callable must
// write only to its own replication's slot; results are index-addressed so
// the output order never depends on scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& body);

// ---------------------------------------------------------------------------
// gen-wind: synthetic turbine measurement dataset.

struct GenWindConfig {
  int m = 1000;
  double speed_lo = 2.5;   // m/s
  double speed_hi = 12.5;  // m/s
  double noise_sd = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
  nlohmann::json to_json() const;
  static GenWindConfig from_json(const nlohmann::json& j);
};

// Writes the dataset CSV (with config hash/seed/version comment header) and
// returns it.
WindDataset run_gen_wind(const GenWindConfig& config, const std::string& out_path);

// ---------------------------------------------------------------------------
// run-wpo: loss comparison of the private release against the Laplace
// baseline over an alpha grid.

struct WpoExperimentConfig {
  std::string dataset_path;  // empty: synthesize a fresh dataset from `seed`
  std::vector<double> alphas{0.05, 0.15, 0.30};  // per-unit of nameplate
  double epsilon = 1.0;
  double lambda = 1e-3;
  double gamma_beta = 1e-5;
  double gamma_y = 1e-5;
  int replications = 50;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool noise_off = false;

  void validate() const;
  nlohmann::json to_json() const;
  static WpoExperimentConfig from_json(const nlohmann::json& j);
};

struct WpoRunRow {
  double alpha = 0.0;
  std::string method;  // "wpo" or "laplace"
  std::uint64_t seed = 0;
  double loss = 0.0;
  bool failed = false;
  std::string error;
};

struct WpoExperimentResult {
  double real_loss = 0.0;  // regression loss on the raw dataset
  std::vector<WpoRunRow> runs;
  nlohmann::json config;  // echo of the exact configuration
};

WpoExperimentResult run_wpo_experiment(const WpoExperimentConfig& config);

// Writes wpo_runs.csv and wpo_summary.csv (one row per (alpha, method) plus a
// real-loss reference row) into out_dir.
void write_wpo_outputs(const WpoExperimentResult& result, const std::string& out_dir);

// ---------------------------------------------------------------------------
// run-tco: feasibility/cost restoration over alpha and horizon grids.

struct TcoExperimentConfig {
  std::string case_path;
  double capacity_factor = 0.6;  // applied to every line before the run
  std::vector<double> alphas{5.0, 15.0, 30.0};  // MW
  std::vector<int> horizons{1, 5};
  double epsilon = 1.0;
  double psi = 3e3;
  int population = 100;  // scenarios per run
  int replications = 30;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool noise_off = false;
  bool full_scale = false;  // lifts desk-scale defaults (m=1000, 300 reps)
  double mip_time_limit_s = 60.0;

  void validate() const;
  nlohmann::json to_json() const;
  static TcoExperimentConfig from_json(const nlohmann::json& j);
};

struct TcoRunRow {
  double alpha = 0.0;
  int horizon = 0;
  std::uint64_t seed = 0;
  double infeasible_pct = 0.0;
  double suboptimality_pct = 0.0;
  bool flagged = false;
  Eigen::VectorXd phi_bar;  // released capacities, for distribution plots
  bool failed = false;
  std::string error;
};

struct TcoExperimentResult {
  std::vector<TcoRunRow> runs;
  std::vector<std::string> line_names;  // "from-to" per line
  nlohmann::json config;
};

TcoExperimentResult run_tco_experiment(const TcoExperimentConfig& config);

// Writes tco_runs.csv, tco_summary.csv (row per (alpha, T)) and
// tco_capacities.csv (row per (alpha, T, seed, line)) into out_dir.
void write_tco_outputs(const TcoExperimentResult& result, const std::string& out_dir);

}  // namespace dpsyn
