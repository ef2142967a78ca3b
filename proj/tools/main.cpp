// CLI entry point. Subcommands are implemented in the library's experiments
// and verify modules; this translation unit only parses arguments and maps
// results to exit codes (0 success, 1 run failure, 2 configuration error).
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dpsyn/experiments.hpp"
#include "dpsyn/verify.hpp"

namespace {

// Configuration problems (bad file, bad schema, refused unsafe mode) exit
// with code 2; anything thrown later is a run failure and exits with 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
}

// Common per-subcommand flags; CLI values override the config file.
struct CommonFlags {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool unsafe_noise_off = false;

  CLI::Option* seed_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;

  void attach(CLI::App& cmd, bool with_noise_off) {
    cmd.add_option("--config", config_path, "JSON config file (see README for the schema)");
    cmd.add_option("--out", out_dir, "output directory")->capture_default_str();
    seed_opt = cmd.add_option("--seed", seed, "base seed (overrides the config)");
    jobs_opt = cmd.add_option("--jobs", jobs, "worker threads (overrides the config)");
    if (with_noise_off) {
      cmd.add_flag("--unsafe-noise-off", unsafe_noise_off,
                   "allow the deterministic noise-off test mode (destroys privacy)");
    }
  }

  // Applies flag overrides and enforces the noise-off policy.
  nlohmann::json merged() const {
    nlohmann::json j = load_config(config_path);
    if (seed_opt->count() > 0) j["seed"] = seed;
    if (jobs_opt->count() > 0) j["jobs"] = jobs;
    if (j.value("noise_off", false) && !unsafe_noise_off) {
      throw ConfigError("config requests noise_off; pass --unsafe-noise-off to confirm");
    }
    return j;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"differentially private synthetic power-system datasets"};
  app.require_subcommand(1);

  CLI::App* gen = app.add_subcommand("gen-wind", "synthesize a turbine measurement dataset");
  CommonFlags gen_flags;
  gen_flags.attach(*gen, /*with_noise_off=*/false);

  CLI::App* wpo = app.add_subcommand("run-wpo", "wind-power release loss experiment");
  CommonFlags wpo_flags;
  wpo_flags.attach(*wpo, /*with_noise_off=*/true);

  CLI::App* tco = app.add_subcommand("run-tco", "transmission-capacity release experiment");
  CommonFlags tco_flags;
  tco_flags.attach(*tco, /*with_noise_off=*/true);
  bool full_scale = false;
  tco->add_flag("--full-scale", full_scale,
                "paper-scale population and replication counts (slow; an external MILP "
                "backend is recommended)");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  CommonFlags verify_flags;
  verify_flags.attach(*verify, /*with_noise_off=*/false);
  std::string case_path = "data/case4star.json";
  bool quick = false;
  verify->add_option("--case", case_path, "network case for the restoration-trend criterion")
      ->capture_default_str();
  verify->add_flag("--quick", quick, "reduced replication counts (smoke run, not the gate)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      nlohmann::json j;
      try {
        j = gen_flags.merged();
      } catch (const ConfigError&) {
        throw;
      }
      dpsyn::GenWindConfig cfg;
      try {
        cfg = dpsyn::GenWindConfig::from_json(j);
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      const auto path = std::filesystem::path(gen_flags.out_dir) / "wind.csv";
      dpsyn::run_gen_wind(cfg, path.string());
      std::cout << "wrote " << path.string() << " (" << cfg.m << " rows)\n";
      return 0;
    }
    if (wpo->parsed()) {
      dpsyn::WpoExperimentConfig cfg;
      try {
        cfg = dpsyn::WpoExperimentConfig::from_json(wpo_flags.merged());
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      const dpsyn::WpoExperimentResult result = dpsyn::run_wpo_experiment(cfg);
      dpsyn::write_wpo_outputs(result, wpo_flags.out_dir);
      int failed = 0;
      for (const auto& row : result.runs) failed += row.failed ? 1 : 0;
      std::cout << "wrote wpo_runs.csv and wpo_summary.csv to " << wpo_flags.out_dir << " ("
                << result.runs.size() << " runs, " << failed << " failed)\n";
      return failed == 0 ? 0 : 1;
    }
    if (tco->parsed()) {
      dpsyn::TcoExperimentConfig cfg;
      try {
        cfg = dpsyn::TcoExperimentConfig::from_json(tco_flags.merged());
        if (full_scale) cfg.full_scale = true;
        cfg.validate();
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
      const dpsyn::TcoExperimentResult result = dpsyn::run_tco_experiment(cfg);
      dpsyn::write_tco_outputs(result, tco_flags.out_dir);
      int failed = 0;
      for (const auto& row : result.runs) failed += row.failed ? 1 : 0;
      std::cout << "wrote tco_runs.csv, tco_summary.csv and tco_capacities.csv to "
                << tco_flags.out_dir << " (" << result.runs.size() << " runs, " << failed
                << " failed)\n";
      return failed == 0 ? 0 : 1;
    }
    if (verify->parsed()) {
      nlohmann::json j = verify_flags.merged();
      dpsyn::VerifyOptions options;
      options.case_path = j.value("case_path", case_path);
      options.seed = j.value("seed", std::uint64_t{0});
      options.jobs = j.value("jobs", 1);
      options.quick = quick || j.value("quick", false);
      const auto results = dpsyn::run_acceptance(options, [](const dpsyn::CriterionResult& r) {
        std::cout << dpsyn::format_criterion(r) << std::endl;
      });
      bool all = true;
      for (const auto& r : results) all = all && r.passed;
      std::filesystem::create_directories(verify_flags.out_dir);
      const auto report_path = std::filesystem::path(verify_flags.out_dir) / "verify_report.json";
      std::ofstream out(report_path);
      out << dpsyn::verify_report_json(results).dump(2) << "\n";
      std::cout << (all ? "all criteria passed" : "some criteria FAILED") << "; report at "
                << report_path.string() << "\n";
      return all ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
