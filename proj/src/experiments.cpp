#include "dpsyn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "dpsyn/tco.hpp"
#include "dpsyn/wind_curve.hpp"
#include "dpsyn/wpo.hpp"

namespace dpsyn {

using nlohmann::json;

std::string config_hash(const json& config) {
  // nlohmann::json::dump on an object emits keys in sorted order, so the
  // compact dump is already canonical.
  const std::string text = config.dump();
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64-bit
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

SummaryStats summarize(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  SummaryStats s;
  s.n = static_cast<int>(values.size());
  double acc = 0.0;
  for (const double v : values) acc += v;
  s.mean = acc / s.n;
  double sq = 0.0;
  for (const double v : values) sq += (v - s.mean) * (v - s.mean);
  s.sd = s.n > 1 ? std::sqrt(sq / (s.n - 1)) : 0.0;
  std::sort(values.begin(), values.end());
  const auto percentile = [&](double q) {
    const double pos = q * (s.n - 1);
    const int lo = static_cast<int>(std::floor(pos));
    const int hi = static_cast<int>(std::ceil(pos));
    const double w = pos - lo;
    return (1.0 - w) * values[lo] + w * values[hi];
  };
  s.p05 = percentile(0.05);
  s.p95 = percentile(0.95);
  return s;
}

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  if (n <= 0) return;
  const int workers = std::max(1, std::min(jobs, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::ofstream open_output(const std::string& path, const json& config) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << "# config_hash=" << config_hash(config) << "\n";
  out << "# seed=" << config.value("seed", std::uint64_t{0}) << "\n";
  out << "# version=" << kVersion << "\n";
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// gen-wind

void GenWindConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(speed_lo < speed_hi)) throw std::invalid_argument("speed range must be nonempty");
  if (!(noise_sd >= 0.0)) throw std::invalid_argument("noise sd must be nonnegative");
}

json GenWindConfig::to_json() const {
  return json{{"m", m},
              {"speed_lo", speed_lo},
              {"speed_hi", speed_hi},
              {"noise_sd", noise_sd},
              {"seed", seed}};
}

GenWindConfig GenWindConfig::from_json(const json& j) {
  GenWindConfig c;
  c.m = j.value("m", c.m);
  c.speed_lo = j.value("speed_lo", c.speed_lo);
  c.speed_hi = j.value("speed_hi", c.speed_hi);
  c.noise_sd = j.value("noise_sd", c.noise_sd);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

WindDataset run_gen_wind(const GenWindConfig& config, const std::string& out_path) {
  config.validate();
  Rng rng(config.seed);
  const WindDataset data =
      generate_wind_dataset(config.m, config.speed_lo, config.speed_hi, config.noise_sd, rng);
  std::ofstream out = open_output(out_path, config.to_json());
  out << "speed_ms,power_pu\n";
  for (Eigen::Index i = 0; i < data.speeds.size(); ++i) {
    out << fmt(data.speeds[i]) << ',' << fmt(data.power[i]) << '\n';
  }
  return data;
}

// ---------------------------------------------------------------------------
// run-wpo

void WpoExperimentConfig::validate() const {
  if (alphas.empty()) throw std::invalid_argument("alpha grid must be nonempty");
  for (const double a : alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("alphas must be positive");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
}

json WpoExperimentConfig::to_json() const {
  return json{{"dataset_path", dataset_path},
              {"alphas", alphas},
              {"epsilon", epsilon},
              {"lambda", lambda},
              {"gamma_beta", gamma_beta},
              {"gamma_y", gamma_y},
              {"replications", replications},
              {"seed", seed},
              {"jobs", jobs},
              {"noise_off", noise_off}};
}

WpoExperimentConfig WpoExperimentConfig::from_json(const json& j) {
  WpoExperimentConfig c;
  c.dataset_path = j.value("dataset_path", c.dataset_path);
  if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
  c.epsilon = j.value("epsilon", c.epsilon);
  c.lambda = j.value("lambda", c.lambda);
  c.gamma_beta = j.value("gamma_beta", c.gamma_beta);
  c.gamma_y = j.value("gamma_y", c.gamma_y);
  c.replications = j.value("replications", c.replications);
  c.seed = j.value("seed", c.seed);
  c.jobs = j.value("jobs", c.jobs);
  c.noise_off = j.value("noise_off", c.noise_off);
  c.validate();
  return c;
}

WpoExperimentResult run_wpo_experiment(const WpoExperimentConfig& config) {
  config.validate();
  WindDataset data;
  if (config.dataset_path.empty()) {
    Rng rng(config.seed);
    data = generate_wind_dataset(1000, 2.5, 12.5, 0.1, rng);
  } else {
    data = WindDataset::read_csv(config.dataset_path);
  }
  const FeatureSpec spec = FeatureSpec::default_wind();
  const FeatureMatrix features = rbf_features(data.speeds, spec);

  WpoExperimentResult result;
  result.config = config.to_json();
  result.real_loss = ridge_fit(features.X, data.power, config.lambda).loss;

  const int cells = static_cast<int>(config.alphas.size()) * config.replications;
  result.runs.resize(2 * static_cast<std::size_t>(cells));
  const Rng base(config.seed);
  parallel_for(cells, config.jobs, [&](int cell) {
    const int a_idx = cell / config.replications;
    const int rep = cell % config.replications;
    const double alpha = config.alphas[a_idx];

    WpoRunRow& wpo_row = result.runs[2 * static_cast<std::size_t>(cell)];
    WpoRunRow& lap_row = result.runs[2 * static_cast<std::size_t>(cell) + 1];
    // Even/odd run indices keep the two methods on independent noise streams.
    const std::uint64_t run_index = 2 * static_cast<std::uint64_t>(cell) + 1;
    wpo_row = {alpha, "wpo", base.derive(run_index).seed(), 0.0, false, ""};
    lap_row = {alpha, "laplace", base.derive(run_index + 1).seed(), 0.0, false, ""};

    try {
      WpoConfig run;
      run.epsilon = config.epsilon;
      run.alpha = alpha;
      run.lambda = config.lambda;
      run.gamma_beta = config.gamma_beta;
      run.gamma_y = config.gamma_y;
      run.seed = wpo_row.seed;
      run.noise_off = config.noise_off;
      wpo_row.loss = wpo_release(data, spec, run).achieved_loss;
    } catch (const std::exception& e) {
      wpo_row.failed = true;
      wpo_row.error = e.what();
    }
    try {
      Rng rng(lap_row.seed);
      const Eigen::VectorXd noisy =
          laplace_baseline(data.power, alpha, config.epsilon, rng, config.noise_off);
      lap_row.loss = ridge_fit(features.X, noisy, config.lambda).loss;
    } catch (const std::exception& e) {
      lap_row.failed = true;
      lap_row.error = e.what();
    }
  });
  return result;
}

void write_wpo_outputs(const WpoExperimentResult& result, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out = open_output((dir / "wpo_runs.csv").string(), result.config);
    out << "alpha,method,seed,loss,failed,error\n";
    for (const auto& row : result.runs) {
      out << fmt(row.alpha) << ',' << row.method << ',' << row.seed << ',' << fmt(row.loss) << ','
          << (row.failed ? 1 : 0) << ',' << row.error << '\n';
    }
  }
  std::ofstream out = open_output((dir / "wpo_summary.csv").string(), result.config);
  out << "alpha,method,mean_loss,p05,p95\n";
  out << "0,real," << fmt(result.real_loss) << ',' << fmt(result.real_loss) << ','
      << fmt(result.real_loss) << '\n';
  std::vector<double> alphas;
  for (const auto& row : result.runs) {
    if (std::find(alphas.begin(), alphas.end(), row.alpha) == alphas.end()) {
      alphas.push_back(row.alpha);
    }
  }
  for (const double alpha : alphas) {
    for (const std::string method : {"laplace", "wpo"}) {
      std::vector<double> losses;
      for (const auto& row : result.runs) {
        if (row.alpha == alpha && row.method == method && !row.failed) losses.push_back(row.loss);
      }
      if (losses.empty()) continue;
      const SummaryStats s = summarize(std::move(losses));
      out << fmt(alpha) << ',' << method << ',' << fmt(s.mean) << ',' << fmt(s.p05) << ','
          << fmt(s.p95) << '\n';
    }
  }
}

// ---------------------------------------------------------------------------
// run-tco

void TcoExperimentConfig::validate() const {
  if (case_path.empty()) throw std::invalid_argument("case path is required");
  if (!(capacity_factor > 0.0 && capacity_factor <= 1.0)) {
    throw std::invalid_argument("capacity factor must be in (0, 1]");
  }
  if (alphas.empty()) throw std::invalid_argument("alpha grid must be nonempty");
  for (const double a : alphas) {
    if (!(a > 0.0)) throw std::invalid_argument("alphas must be positive");
  }
  if (horizons.empty()) throw std::invalid_argument("horizon grid must be nonempty");
  for (const int t : horizons) {
    if (t < 1) throw std::invalid_argument("horizons must be at least 1");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(psi > 0.0)) throw std::invalid_argument("psi must be positive");
  if (population < 1) throw std::invalid_argument("population must be at least 1");
  if (replications < 1) throw std::invalid_argument("replications must be at least 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
}

json TcoExperimentConfig::to_json() const {
  return json{{"case_path", case_path},
              {"capacity_factor", capacity_factor},
              {"alphas", alphas},
              {"horizons", horizons},
              {"epsilon", epsilon},
              {"psi", psi},
              {"population", population},
              {"replications", replications},
              {"seed", seed},
              {"jobs", jobs},
              {"noise_off", noise_off},
              {"full_scale", full_scale},
              {"mip_time_limit_s", mip_time_limit_s}};
}

TcoExperimentConfig TcoExperimentConfig::from_json(const json& j) {
  TcoExperimentConfig c;
  c.case_path = j.value("case_path", c.case_path);
  c.capacity_factor = j.value("capacity_factor", c.capacity_factor);
  if (j.contains("alphas")) c.alphas = j.at("alphas").get<std::vector<double>>();
  if (j.contains("horizons")) c.horizons = j.at("horizons").get<std::vector<int>>();
  c.epsilon = j.value("epsilon", c.epsilon);
  c.psi = j.value("psi", c.psi);
  c.population = j.value("population", c.population);
  c.replications = j.value("replications", c.replications);
  c.seed = j.value("seed", c.seed);
  c.jobs = j.value("jobs", c.jobs);
  c.noise_off = j.value("noise_off", c.noise_off);
  c.full_scale = j.value("full_scale", c.full_scale);
  c.mip_time_limit_s = j.value("mip_time_limit_s", c.mip_time_limit_s);
  c.validate();
  return c;
}

TcoExperimentResult run_tco_experiment(const TcoExperimentConfig& config) {
  config.validate();
  TcoExperimentConfig effective = config;
  if (config.full_scale) {
    effective.population = 1000;
    effective.replications = 300;
  }

  NetworkCase net = NetworkCase::read_json(effective.case_path);
  for (auto& line : net.lines) line.capacity *= effective.capacity_factor;
  net.validate();

  Rng pop_rng(effective.seed);
  const OpfPopulation population = sample_population(net, effective.population, pop_rng);

  TcoExperimentResult result;
  result.config = effective.to_json();
  for (const auto& line : net.lines) {
    result.line_names.push_back(std::to_string(line.from + 1) + "-" + std::to_string(line.to + 1));
  }

  const int grid = static_cast<int>(effective.alphas.size() * effective.horizons.size());
  const int cells = grid * effective.replications;
  result.runs.resize(static_cast<std::size_t>(cells));
  const Rng base(effective.seed);
  parallel_for(cells, effective.jobs, [&](int cell) {
    const int rep = cell % effective.replications;
    const int g = cell / effective.replications;
    const int t_idx = g % static_cast<int>(effective.horizons.size());
    const int a_idx = g / static_cast<int>(effective.horizons.size());

    TcoRunRow& row = result.runs[static_cast<std::size_t>(cell)];
    row.alpha = effective.alphas[a_idx];
    row.horizon = effective.horizons[t_idx];
    // The run seed depends on (alpha, replication) but not on the horizon, so
    // every horizon repairs the *same* Laplace initialization (common random
    // numbers): across-horizon comparisons are paired, which removes the
    // initialization draw from their variance.
    const std::uint64_t pair_index =
        static_cast<std::uint64_t>(a_idx) * static_cast<std::uint64_t>(effective.replications) +
        static_cast<std::uint64_t>(rep);
    row.seed = base.derive(pair_index + 1).seed();
    try {
      TcoConfig run;
      run.epsilon = effective.epsilon;
      run.alpha = row.alpha;
      run.horizon = row.horizon;
      run.psi = effective.psi;
      run.seed = row.seed;
      run.noise_off = effective.noise_off;
      run.mip_time_limit_s = effective.mip_time_limit_s;
      const CapacityRelease release = tco_release(population, run);
      row.infeasible_pct = release.infeasible_pct;
      row.suboptimality_pct = release.suboptimality_pct;
      row.flagged = release.flagged;
      row.phi_bar = release.phi_bar;
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  });
  return result;
}

void write_tco_outputs(const TcoExperimentResult& result, const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  {
    std::ofstream out = open_output((dir / "tco_runs.csv").string(), result.config);
    out << "alpha,T,seed,infeasible_pct,suboptimality_pct,flagged,failed,error\n";
    for (const auto& row : result.runs) {
      out << fmt(row.alpha) << ',' << row.horizon << ',' << row.seed << ','
          << fmt(row.infeasible_pct) << ',' << fmt(row.suboptimality_pct) << ','
          << (row.flagged ? 1 : 0) << ',' << (row.failed ? 1 : 0) << ',' << row.error << '\n';
    }
  }
  {
    std::ofstream out = open_output((dir / "tco_capacities.csv").string(), result.config);
    out << "alpha,T,seed,line,capacity_mw\n";
    for (const auto& row : result.runs) {
      if (row.failed) continue;
      for (Eigen::Index l = 0; l < row.phi_bar.size(); ++l) {
        out << fmt(row.alpha) << ',' << row.horizon << ',' << row.seed << ','
            << result.line_names[static_cast<std::size_t>(l)] << ',' << fmt(row.phi_bar[l])
            << '\n';
      }
    }
  }
  std::ofstream out = open_output((dir / "tco_summary.csv").string(), result.config);
  out << "alpha,T,n,inf_mean,inf_sd,inf_p05,inf_p95,sub_mean,sub_sd,sub_p05,sub_p95\n";
  std::vector<std::pair<double, int>> groups;
  for (const auto& row : result.runs) {
    const std::pair<double, int> key{row.alpha, row.horizon};
    if (std::find(groups.begin(), groups.end(), key) == groups.end()) groups.push_back(key);
  }
  for (const auto& [alpha, horizon] : groups) {
    std::vector<double> inf, sub;
    for (const auto& row : result.runs) {
      if (row.alpha == alpha && row.horizon == horizon && !row.failed) {
        inf.push_back(row.infeasible_pct);
        sub.push_back(row.suboptimality_pct);
      }
    }
    if (inf.empty()) continue;
    const SummaryStats si = summarize(std::move(inf));
    const SummaryStats ss = summarize(std::move(sub));
    out << fmt(alpha) << ',' << horizon << ',' << si.n << ',' << fmt(si.mean) << ',' << fmt(si.sd)
        << ',' << fmt(si.p05) << ',' << fmt(si.p95) << ',' << fmt(ss.mean) << ',' << fmt(ss.sd)
        << ',' << fmt(ss.p05) << ',' << fmt(ss.p95) << '\n';
  }
}

}  // namespace dpsyn
