#include "dpsyn/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "dpsyn/dp.hpp"
#include "dpsyn/experiments.hpp"
#include "dpsyn/opf.hpp"
#include "dpsyn/regression.hpp"
#include "dpsyn/tco.hpp"
#include "dpsyn/wind_curve.hpp"
#include "dpsyn/wpo.hpp"

namespace dpsyn {

namespace {

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

// --- tiny hand-solvable networks (same instances as the unit oracles) ------

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

// Post-processing objective with the loss slack eliminated analytically: the
// optimal ell is max(fit, ell_bar), so |ell_bar - ell| = max(fit - ell_bar, 0).
double postprocess_objective(const Eigen::VectorXd& y, const Eigen::VectorXd& y0, double ell_bar,
                             const Eigen::VectorXd& beta_bar, const Eigen::MatrixXd& X,
                             const Eigen::MatrixXd& A, double gamma_beta, double gamma_y) {
  const Eigen::VectorXd beta = A * y;
  const double fit = (X * beta - y).norm();
  return std::max(fit - ell_bar, 0.0) + gamma_beta * (beta - beta_bar).norm() +
         gamma_y * (y - y0).norm();
}

// State shared between criteria (4 produces the releases 5 audits).
struct SharedState {
  Eigen::MatrixXd X;
  Eigen::MatrixXd A;
  std::vector<SyntheticWindRelease> releases;
};

bool ledger_equals(const PrivacyLedger& ledger, const std::vector<Epsilon>& expected,
                   double total) {
  if (ledger.entries().size() != expected.size()) return false;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (ledger.entries()[i].epsilon.value() != expected[i].value()) return false;
  }
  return compose(ledger) == total;
}

// --- criterion 1: budget exactness ------------------------------------------

CriterionResult criterion_budget_exactness(const VerifyOptions&) {
  CriterionResult r{1, "budget exactness over randomized configurations"};
  Rng rng(101);
  Rng data_rng(5);
  const WindDataset tiny = generate_wind_dataset(8, 2.5, 12.5, 0.1, data_rng);
  const FeatureSpec spec = FeatureSpec::default_wind();

  Rng pop_rng(6);
  const OpfPopulation micro = sample_population(two_bus(60.0, true), 2, pop_rng);

  int bad = 0;
  const int configs = 100;
  for (int i = 0; i < configs; ++i) {
    const double eps = rng.uniform(0.1, 5.0);
    const int horizon = 1 + i % 10;

    WpoConfig wc;
    wc.epsilon = eps;
    wc.alpha = rng.uniform(0.02, 0.3);
    wc.seed = static_cast<std::uint64_t>(i);
    const SyntheticWindRelease wr = wpo_release(tiny, spec, wc);
    if (!ledger_equals(wr.ledger,
                       {Epsilon(eps, 1, 2), Epsilon(eps, 1, 4), Epsilon(eps, 1, 4)}, eps)) {
      ++bad;
    }

    TcoConfig tc;
    tc.epsilon = eps;
    tc.alpha = rng.uniform(0.2, 2.0);
    tc.horizon = horizon;
    tc.seed = static_cast<std::uint64_t>(i);
    const CapacityRelease cr = tco_release(micro, tc);
    std::vector<Epsilon> want{Epsilon(eps, 1, 2)};
    for (int t = 0; t < 2 * horizon; ++t) {
      want.emplace_back(eps, 1, 4 * static_cast<std::uint64_t>(horizon));
    }
    if (!ledger_equals(cr.trace.ledger, want, eps)) ++bad;
  }

  // Negative control: a tampered ledger must fail the same check.
  PrivacyLedger tampered;
  tampered.charge("init", Epsilon(1.0, 1, 2));
  tampered.charge("loss", Epsilon(1.0, 1, 4));
  tampered.charge("weights", Epsilon(1.0, 1, 8));
  const bool control_fails = !ledger_equals(
      tampered, {Epsilon(1.0, 1, 2), Epsilon(1.0, 1, 4), Epsilon(1.0, 1, 4)}, 1.0);

  r.passed = bad == 0 && control_fails;
  r.measured = std::to_string(bad) + "/" + std::to_string(configs) +
               " configs with wrong ledgers; tampered control " +
               (control_fails ? "rejected" : "accepted");
  r.expected = "0 wrong ledgers (exact entries and totals); tampered control rejected";
  return r;
}

// --- criterion 2: sensitivity-bound domination -------------------------------

CriterionResult criterion_sensitivity_domination(const VerifyOptions&) {
  CriterionResult r{2, "sensitivity bounds dominate empirical adjacent deviations"};
  Rng data_rng(42);
  const WindDataset data = generate_wind_dataset(1000, 2.5, 12.5, 0.1, data_rng);
  const FeatureMatrix fm = rbf_features(data.speeds, FeatureSpec::default_wind());
  const Eigen::MatrixXd A = ridge_solution_map(fm.X, 1e-3);
  const int m = static_cast<int>(fm.X.rows());

  Rng rng(7);
  int violations = 0;
  double worst_beta = 0.0, worst_loss = 0.0;
  for (const double alpha : {0.05, 0.15, 0.30}) {
    const SensitivityBounds bounds = sensitivity_bounds(fm.X, 1e-3, alpha);
    for (int t = 0; t < 1000; ++t) {
      Eigen::VectorXd y(m);
      for (int i = 0; i < m; ++i) y[i] = rng.uniform01();
      const int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(m));
      Eigen::VectorXd y2 = y;
      y2[j] += rng.uniform(-alpha, alpha);

      const Eigen::VectorXd b1 = A * y, b2 = A * y2;
      const double dbeta = (b1 - b2).lpNorm<1>();
      const double dloss =
          std::abs((fm.X * b1 - y).norm() - (fm.X * b2 - y2).norm());
      worst_beta = std::max(worst_beta, dbeta / bounds.delta_beta);
      worst_loss = std::max(worst_loss, dloss / bounds.delta_ell);
      if (dbeta > bounds.delta_beta || dloss > bounds.delta_ell) ++violations;
    }
  }
  r.passed = violations == 0;
  r.measured = std::to_string(violations) + " violations in 3000 pairs; worst beta ratio " +
               fmt(worst_beta) + ", worst loss ratio " + fmt(worst_loss);
  r.expected = "0 violations (ratios <= 1)";
  return r;
}

// --- criterion 3: post-processing immunity -----------------------------------

CriterionResult criterion_postprocess_immunity(const VerifyOptions&) {
  CriterionResult r{3, "post-processing is a pure function of privatized inputs"};
  // WPO: the post-processing signature admits only privatized quantities and
  // public data; with those held fixed the output must be bitwise stable no
  // matter which adjacent raw dataset is in scope.
  Rng data_rng(17);
  const WindDataset data = generate_wind_dataset(40, 2.5, 12.5, 0.1, data_rng);
  WindDataset adjacent = data;
  adjacent.power[3] = std::clamp(adjacent.power[3] + 0.1, 0.0, 1.0);
  const FeatureMatrix fm = rbf_features(data.speeds, FeatureSpec::default_wind());
  Eigen::VectorXd y0 = data.power;
  y0[0] = std::min(1.0, y0[0] + 0.05);
  const Eigen::VectorXd beta_bar = Eigen::VectorXd::Constant(5, 0.5);
  const Eigen::VectorXd w1 = wpo_postprocess(y0, 0.4, beta_bar, fm.X, 1e-3, 1e-5, 1e-5);
  const Eigen::VectorXd w2 = wpo_postprocess(y0, 0.4, beta_bar, fm.X, 1e-3, 1e-5, 1e-5);
  const bool wpo_ok = w1.size() == w2.size() &&
                      std::memcmp(w1.data(), w2.data(), sizeof(double) * w1.size()) == 0;

  // TCO: same property for the capacity post-processing; the true capacities
  // are not an argument, so adjacent raw inputs cannot influence the result.
  const NetworkCase net = two_bus(60.0, true);
  const Eigen::MatrixXd F = build_ptdf(net);
  const OpfModel model = nominal_model(net);
  Eigen::VectorXd phi_prev(1);
  phi_prev << 40.0;
  TcoConfig cfg;
  const std::vector<TcoHistoryEntry> history{{0, 520.0}};
  const Eigen::VectorXd t1 = tco_postprocess(history, phi_prev, {model}, F, cfg);
  const Eigen::VectorXd t2 = tco_postprocess(history, phi_prev, {model}, F, cfg);
  const bool tco_ok = t1.size() == t2.size() &&
                      std::memcmp(t1.data(), t2.data(), sizeof(double) * t1.size()) == 0;

  r.passed = wpo_ok && tco_ok;
  r.measured = std::string("wpo ") + (wpo_ok ? "bitwise identical" : "diverged") + ", tco " +
               (tco_ok ? "bitwise identical" : "diverged");
  r.expected = "bitwise identical outputs for fixed privatized inputs";
  return r;
}

// --- criteria 4 & 5: WPO trend and feasibility --------------------------------

CriterionResult criterion_wpo_trend(const VerifyOptions& options, SharedState& shared) {
  CriterionResult r{4, "private release tracks the real regression loss better than the baseline"};
  Rng data_rng(7);
  const WindDataset data = generate_wind_dataset(1000, 2.5, 12.5, 0.1, data_rng);
  const FeatureSpec spec = FeatureSpec::default_wind();
  const FeatureMatrix fm = rbf_features(data.speeds, spec);
  shared.X = fm.X;
  shared.A = ridge_solution_map(fm.X, 1e-3);
  const double real_loss = ridge_fit(fm.X, data.power, 1e-3).loss;

  const int reps = options.quick ? 5 : 50;
  const std::vector<double> alphas{0.15, 0.30};
  struct Cell {
    std::vector<double> wpo, laplace;
  };
  std::vector<Cell> cells(alphas.size());
  shared.releases.resize(alphas.size() * static_cast<std::size_t>(reps));

  std::vector<std::string> errors;
  const int total = static_cast<int>(alphas.size()) * reps;
  std::vector<double> wpo_loss(total, -1.0), lap_loss(total, -1.0);
  parallel_for(total, options.jobs, [&](int idx) {
    const int a_idx = idx / reps;
    const int rep = idx % reps;
    WpoConfig cfg;
    cfg.epsilon = 1.0;
    cfg.alpha = alphas[static_cast<std::size_t>(a_idx)];
    // Criterion-specific salt keeps this stream disjoint from the other
    // criteria's seed derivations.
    constexpr std::uint64_t kSalt = 0x9e3779b97f4a7c15ull;
    cfg.seed = (options.seed ^ kSalt) + static_cast<std::uint64_t>(idx) * 2 + 1;
    const SyntheticWindRelease release = wpo_release(data, spec, cfg);
    shared.releases[static_cast<std::size_t>(idx)] = release;
    wpo_loss[idx] = release.achieved_loss;
    Rng rng((options.seed ^ kSalt) + static_cast<std::uint64_t>(idx) * 2 + 2);
    const Eigen::VectorXd noisy = laplace_baseline(data.power, cfg.alpha, cfg.epsilon, rng);
    lap_loss[idx] = ridge_fit(fm.X, noisy, 1e-3).loss;
  });
  for (int idx = 0; idx < total; ++idx) {
    cells[static_cast<std::size_t>(idx / reps)].wpo.push_back(wpo_loss[idx]);
    cells[static_cast<std::size_t>(idx / reps)].laplace.push_back(lap_loss[idx]);
  }

  bool trend_ok = true;
  std::ostringstream measured;
  measured.precision(4);
  double rel_dev_30 = 0.0;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const SummaryStats sw = summarize(cells[a].wpo);
    const SummaryStats sl = summarize(cells[a].laplace);
    const double dev_w = std::abs(sw.mean - real_loss);
    const double dev_l = std::abs(sl.mean - real_loss);
    if (!(dev_w < dev_l)) trend_ok = false;
    measured << "alpha=" << alphas[a] << ": |wpo-real|=" << dev_w << " |lap-real|=" << dev_l
             << "; ";
    // Relative deviation of the *mean* loss: per-replication losses scatter
    // with the privatized loss estimate's noise scale, but the mean is
    // unbiased and concentrates with the replication count.
    if (alphas[a] == 0.30) rel_dev_30 = dev_w / real_loss;
  }
  measured << "rel dev of mean at 30%: " << rel_dev_30;
  // Quick mode shrinks the replication count below what the statistical bars
  // need; it exercises the pipeline without enforcing them.
  r.passed = options.quick || (trend_ok && rel_dev_30 <= 0.10);
  r.measured = measured.str();
  r.expected = options.quick
                   ? "pipeline completes (statistical bars not enforced in quick mode)"
                   : "wpo mean closer to real than baseline mean at each alpha; "
                     "rel dev of mean at 30% <= 0.10";
  return r;
}

CriterionResult criterion_wpo_feasibility(const SharedState& shared) {
  CriterionResult r{5, "every release is a feasible point of the post-processing program"};
  int bad = 0;
  double worst_res = 0.0;
  for (const auto& release : shared.releases) {
    const Eigen::VectorXd& y = release.y_tilde;
    if (y.minCoeff() < 0.0 || y.maxCoeff() > 1.0) {
      ++bad;
      continue;
    }
    const Eigen::VectorXd beta = shared.A * y;
    const double beta_res = (beta - release.achieved_beta).lpNorm<Eigen::Infinity>();
    const double loss_res =
        std::abs((shared.X * release.achieved_beta - y).norm() - release.achieved_loss);
    worst_res = std::max({worst_res, beta_res, loss_res});
    if (beta_res > 1e-6 || loss_res > 1e-6) ++bad;
  }
  r.passed = bad == 0 && !shared.releases.empty();
  r.measured = std::to_string(bad) + "/" + std::to_string(shared.releases.size()) +
               " infeasible releases; worst residual " + fmt(worst_res);
  r.expected = "0 infeasible (bounds exact, residuals <= 1e-6)";
  return r;
}

// --- criterion 6: KKT soundness ----------------------------------------------

CriterionResult criterion_kkt_soundness(const VerifyOptions&) {
  CriterionResult r{6, "embedded dispatch blocks certify truly optimal costs"};
  Rng rng(202);
  int bad = 0;
  double worst_rel = 0.0, worst_comp = 0.0;
  int cap_bindings = 0;
  const int cases = 50;
  for (int i = 0; i < cases; ++i) {
    const NetworkCase base = (i % 2 == 0) ? two_bus(60.0, true) : three_bus_ring();
    const int m = (i % 4 < 2) ? 1 : 2;
    const OpfPopulation pop = sample_population(base, m, rng);
    const Eigen::MatrixXd F = build_ptdf(pop.network);
    const Eigen::VectorXd f_bar = pop.network.f_bar();

    Eigen::VectorXd phi_prev(f_bar.size());
    for (Eigen::Index l = 0; l < f_bar.size(); ++l) phi_prev[l] = f_bar[l] * rng.uniform(0.6, 1.2);

    std::vector<TcoHistoryEntry> history;
    for (int k = 0; k < m; ++k) {
      const OpfSolution sol = solve_opf(F, f_bar, pop.models[static_cast<std::size_t>(k)]);
      history.push_back({k, sol.cost * rng.uniform(0.7, 1.4)});
    }

    TcoConfig cfg;
    cfg.alpha = 5.0;
    const TcoPostprocessDiag diag =
        tco_postprocess_diag(history, phi_prev, pop.models, F, cfg);
    worst_comp = std::max(worst_comp, diag.max_complementarity);
    if (diag.dual_cap_binding) ++cap_bindings;
    bool ok = diag.max_complementarity <= 1e-6 && !diag.dual_cap_binding;
    for (std::size_t t = 0; t < history.size(); ++t) {
      const OpfSolution ind =
          solve_opf(F, diag.phi, pop.models[static_cast<std::size_t>(history[t].k)]);
      if (ind.status != OpfStatus::Optimal) {
        ok = false;
        continue;
      }
      const double rel = std::abs(diag.embedded_costs[t] - ind.cost) /
                         std::max(1.0, std::abs(ind.cost));
      worst_rel = std::max(worst_rel, rel);
      if (rel > 1e-6) ok = false;
    }
    if (!ok) ++bad;
  }
  r.passed = bad == 0;
  r.measured = std::to_string(bad) + "/" + std::to_string(cases) + " unsound solves; worst rel " +
               fmt(worst_rel) + ", worst complementarity " + fmt(worst_comp) + ", " +
               std::to_string(cap_bindings) + " cap bindings";
  r.expected = "0 unsound (rel <= 1e-6, complementarity <= 1e-6, no cap binding)";
  return r;
}

// --- criterion 7: TCO restoration trend ---------------------------------------

CriterionResult criterion_tco_trend(const VerifyOptions& options) {
  CriterionResult r{7, "more restore iterations do not hurt feasibility or cost"};
  TcoExperimentConfig cfg;
  cfg.case_path = options.case_path;
  cfg.alphas = {5.0, 15.0, 30.0};
  cfg.horizons = {1, 5};
  cfg.replications = options.quick ? 3 : 30;
  cfg.population = 100;
  // Criterion-specific salt keeps this stream disjoint from the other
  // criteria's seed derivations.
  cfg.seed = options.seed ^ 0xbf58476d1ce4e5b9ull;
  cfg.jobs = options.jobs;
  // Per-iteration budget for the post-processing MILP; time-limited solves
  // still return exact-KKT incumbents, so this trades objective quality for
  // a bounded criterion runtime.
  cfg.mip_time_limit_s = 20.0;
  const TcoExperimentResult result = run_tco_experiment(cfg);

  int failures = 0;
  const auto mean_of = [&](double alpha, int horizon, bool infeasible) {
    double acc = 0.0;
    int n = 0;
    for (const auto& row : result.runs) {
      if (row.alpha != alpha || row.horizon != horizon || row.failed) continue;
      acc += infeasible ? row.infeasible_pct : row.suboptimality_pct;
      ++n;
    }
    return n > 0 ? acc / n : std::numeric_limits<double>::quiet_NaN();
  };
  for (const auto& row : result.runs) {
    if (row.failed) ++failures;
  }

  bool ok = failures == 0;
  std::ostringstream measured;
  measured.precision(4);
  double inf5_at_alpha5 = std::numeric_limits<double>::quiet_NaN();
  for (const double alpha : cfg.alphas) {
    const double inf1 = mean_of(alpha, 1, true), inf5 = mean_of(alpha, 5, true);
    const double sub1 = mean_of(alpha, 1, false), sub5 = mean_of(alpha, 5, false);
    // The trend bars need the full replication count; quick mode only smokes
    // the pipeline (zero failed runs).
    if (!options.quick && (!(inf5 <= inf1 + 1e-9) || !(sub5 <= sub1 + 1e-9))) ok = false;
    if (alpha == 5.0) inf5_at_alpha5 = inf5;
    measured << "alpha=" << alpha << ": inf " << inf1 << "->" << inf5 << "%, sub " << sub1 << "->"
             << sub5 << "%; ";
  }
  if (!options.quick && !(inf5_at_alpha5 <= 5.0)) ok = false;
  measured << failures << " failed runs";
  r.passed = ok;
  r.measured = measured.str();
  r.expected = options.quick
                   ? "0 failed runs (trend bars not enforced in quick mode)"
                   : "T=5 means <= T=1 means per alpha; inf at (alpha=5, T=5) <= 5%; 0 failed runs";
  return r;
}

// --- criterion 8: mechanism statistics ----------------------------------------

CriterionResult criterion_mechanism_statistics(const VerifyOptions&) {
  CriterionResult r{8, "noise mechanisms match their analytic distributions"};
  const double scale = 1.3;
  const int n = 1000000;
  Rng rng(303);
  double sum = 0.0, sumsq = 0.0;
  int within_median = 0;
  const double median_abs = scale * std::log(2.0);
  for (int i = 0; i < n; ++i) {
    const double x = laplace_sample(scale, rng);
    sum += x;
    sumsq += x * x;
    if (std::abs(x) <= median_abs) ++within_median;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  const double mean_bound = 3.0 * scale * std::sqrt(2.0 / n);
  const double var_rel = std::abs(var / (2.0 * scale * scale) - 1.0);
  const double med_dev = std::abs(static_cast<double>(within_median) / n - 0.5);

  // Noise-off selection must be a deterministic argmax with lowest-index ties.
  int argmax_bad = 0;
  PrivacyLedger scratch;
  for (int t = 0; t < 1000; ++t) {
    const int len = 1 + static_cast<int>(rng.next_u64() % 16);
    Eigen::VectorXd scores(len);
    for (int i = 0; i < len; ++i) {
      scores[i] = static_cast<double>(rng.next_u64() % 5);  // small grid forces ties
    }
    std::size_t want = 0;
    for (int i = 1; i < len; ++i) {
      if (scores[i] > scores[static_cast<int>(want)]) want = static_cast<std::size_t>(i);
    }
    const std::size_t got =
        report_noisy_max(scores, 1.0, Epsilon(1.0), rng, scratch, "probe", /*noise_off=*/true);
    if (got != want) ++argmax_bad;
  }

  r.passed = std::abs(mean) <= mean_bound && var_rel <= 0.05 && med_dev <= 0.005 &&
             argmax_bad == 0;
  r.measured = "|mean|=" + fmt(std::abs(mean)) + " (bound " + fmt(mean_bound) +
               "), var rel err=" + fmt(var_rel) + ", median dev=" + fmt(med_dev) + ", " +
               std::to_string(argmax_bad) + " argmax mismatches";
  r.expected = "|mean| within bound, var within 5%, median within 1%, 0 mismatches";
  return r;
}

// --- criterion 9: oracle equivalence ------------------------------------------

CriterionResult criterion_oracle_equivalence(const VerifyOptions&) {
  CriterionResult r{9, "solvers reproduce hand-computed oracles"};
  double worst = 0.0;
  const auto track = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
  };

  {
    const NetworkCase net = two_bus(60.0);
    const Eigen::MatrixXd F = build_ptdf(net);
    track(F(0, 0), 0.0);
    track(F(0, 1), -1.0);
    track(solve_opf(F, net.f_bar(), nominal_model(net)).cost, 500.0);
  }
  {
    const NetworkCase net = two_bus(40.0, true);
    track(solve_opf(build_ptdf(net), net.f_bar(), nominal_model(net)).cost, 600.0);
  }
  {
    const NetworkCase net = two_bus(40.0);
    track(solve_relaxed_opf(build_ptdf(net), net.f_bar(), nominal_model(net), 3000.0).cost,
          30500.0);
  }
  {
    const Eigen::MatrixXd F = build_ptdf(three_bus_ring());
    track(F(0, 1), -2.0 / 3.0);
    track(F(1, 1), 1.0 / 3.0);
    track(F(2, 1), 1.0 / 3.0);
  }
  const bool lp_ok = worst <= 1e-9;

  // Tiny post-processing instance against a brute-force grid scan.
  Eigen::VectorXd speeds(4);
  speeds << 4.0, 6.0, 8.0, 10.0;
  FeatureSpec spec;
  spec.centers = Eigen::VectorXd::Constant(1, 7.0);
  const FeatureMatrix fm = rbf_features(speeds, spec);
  const Eigen::MatrixXd A = ridge_solution_map(fm.X, 1e-3);
  Eigen::VectorXd y0(4);
  y0 << 0.1, 0.35, 0.7, 0.95;
  Eigen::VectorXd beta_bar(1);
  beta_bar << 0.8;
  const double ell_bar = 0.25, gb = 1e-2, gy = 1e-2;
  const Eigen::VectorXd y_tilde = wpo_postprocess(y0, ell_bar, beta_bar, fm.X, 1e-3, gb, gy);
  const double solver_obj = postprocess_objective(y_tilde, y0, ell_bar, beta_bar, fm.X, A, gb, gy);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd y(4);
  for (int i0 = 0; i0 <= 100; ++i0) {
    y[0] = i0 / 100.0;
    for (int i1 = 0; i1 <= 100; ++i1) {
      y[1] = i1 / 100.0;
      for (int i2 = 0; i2 <= 100; ++i2) {
        y[2] = i2 / 100.0;
        for (int i3 = 0; i3 <= 100; ++i3) {
          y[3] = i3 / 100.0;
          best = std::min(best, postprocess_objective(y, y0, ell_bar, beta_bar, fm.X, A, gb, gy));
        }
      }
    }
  }
  const double gap = solver_obj - best;
  r.passed = lp_ok && gap <= 1e-2;
  r.measured = "worst OPF/PTDF deviation " + fmt(worst) + "; grid objective gap " + fmt(gap);
  r.expected = "deviation <= 1e-9; gap <= 1e-2";
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(
    const VerifyOptions& options,
    const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> results;
  SharedState shared;
  const auto timed = [&](auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = fn();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    results.push_back(std::move(r));
  };
  timed([&] { return criterion_budget_exactness(options); });
  timed([&] { return criterion_sensitivity_domination(options); });
  timed([&] { return criterion_postprocess_immunity(options); });
  timed([&] { return criterion_wpo_trend(options, shared); });
  timed([&] { return criterion_wpo_feasibility(shared); });
  timed([&] { return criterion_kkt_soundness(options); });
  timed([&] { return criterion_tco_trend(options); });
  timed([&] { return criterion_mechanism_statistics(options); });
  timed([&] { return criterion_oracle_equivalence(options); });
  return results;
}

std::string format_criterion(const CriterionResult& result) {
  std::ostringstream out;
  out << "criterion " << result.id << ": " << (result.passed ? "PASS" : "FAIL") << " - "
      << result.name << " (measured: " << result.measured << "; expected: " << result.expected
      << ") [" << fmt(result.seconds) << "s]";
  return out.str();
}

nlohmann::json verify_report_json(const std::vector<CriterionResult>& results) {
  nlohmann::json criteria = nlohmann::json::array();
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    criteria.push_back({{"id", r.id},
                        {"name", r.name},
                        {"passed", r.passed},
                        {"measured", r.measured},
                        {"expected", r.expected},
                        {"seconds", r.seconds}});
  }
  return nlohmann::json{{"criteria", criteria}, {"all_passed", all}};
}

}  // namespace dpsyn
