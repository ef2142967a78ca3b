#include "dpsyn/opf.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "dpsyn/solver/problem.hpp"

namespace dpsyn {

using nlohmann::json;
using solver::kInf;
using solver::LinearProgram;
using solver::LinExpr;
using solver::RowSense;
using solver::SolveStatus;

Eigen::VectorXd NetworkCase::f_bar() const {
  Eigen::VectorXd f(num_lines());
  for (int l = 0; l < num_lines(); ++l) f[l] = lines[l].capacity;
  return f;
}

void NetworkCase::validate() const {
  const int n = num_buses();
  if (n < 1) throw std::invalid_argument("case has no buses");
  if (slack < 0 || slack >= n) throw std::invalid_argument("slack bus out of range");
  if (load.size() != n || cost.size() != n || p_min.size() != n || p_max.size() != n) {
    throw std::invalid_argument("bus vectors have inconsistent lengths");
  }
  for (const auto& line : lines) {
    if (line.from < 0 || line.from >= n || line.to < 0 || line.to >= n || line.from == line.to) {
      throw std::invalid_argument("line references invalid buses");
    }
    if (!(line.susceptance > 0.0)) throw std::invalid_argument("line susceptance must be positive");
    if (!(line.capacity > 0.0)) throw std::invalid_argument("line capacity must be positive");
  }
  for (int i = 0; i < n; ++i) {
    if (load[i] < 0.0) throw std::invalid_argument("negative load");
    if (p_min[i] > p_max[i]) throw std::invalid_argument("p_min exceeds p_max");
  }
  // Connectivity by union-find over the lines.
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& line : lines) parent[find(line.from)] = find(line.to);
  for (int i = 0; i < n; ++i) {
    if (find(i) != find(slack)) throw std::invalid_argument("network is not connected");
  }
}

NetworkCase NetworkCase::read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open case file: " + path);
  json doc = json::parse(in);

  NetworkCase net;
  net.base_mva = doc.value("baseMVA", 100.0);

  std::map<long long, int> bus_index;  // external id -> dense index
  const auto& buses = doc.at("buses");
  const int n = static_cast<int>(buses.size());
  net.load = Eigen::VectorXd::Zero(n);
  net.cost = Eigen::VectorXd::Zero(n);
  net.p_min = Eigen::VectorXd::Zero(n);
  net.p_max = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    const auto& bus = buses[i];
    bus_index[bus.at("id").get<long long>()] = i;
    net.load[i] = bus.at("load_mw").get<double>();
  }
  auto lookup = [&](long long id) {
    const auto it = bus_index.find(id);
    if (it == bus_index.end()) throw std::runtime_error("case references unknown bus id");
    return it->second;
  };

  for (const auto& line : doc.at("lines")) {
    net.lines.push_back(Line{lookup(line.at("from").get<long long>()),
                             lookup(line.at("to").get<long long>()),
                             line.at("susceptance_pu").get<double>(),
                             line.at("capacity_mw").get<double>()});
  }
  for (const auto& gen : doc.at("generators")) {
    const int b = lookup(gen.at("bus").get<long long>());
    net.cost[b] = gen.at("cost").get<double>();
    net.p_min[b] += gen.at("p_min").get<double>();
    net.p_max[b] += gen.at("p_max").get<double>();
  }
  net.slack = lookup(doc.at("slack").get<long long>());
  net.validate();
  return net;
}

std::string NetworkCase::to_json_text() const {
  json doc;
  doc["baseMVA"] = base_mva;
  doc["slack"] = slack + 1;
  doc["buses"] = json::array();
  for (int i = 0; i < num_buses(); ++i) {
    doc["buses"].push_back({{"id", i + 1}, {"load_mw", load[i]}});
  }
  doc["lines"] = json::array();
  for (const auto& line : lines) {
    doc["lines"].push_back({{"from", line.from + 1},
                            {"to", line.to + 1},
                            {"susceptance_pu", line.susceptance},
                            {"capacity_mw", line.capacity}});
  }
  doc["generators"] = json::array();
  for (int i = 0; i < num_buses(); ++i) {
    if (p_max[i] > 0.0 || p_min[i] != 0.0) {
      doc["generators"].push_back(
          {{"bus", i + 1}, {"cost", cost[i]}, {"p_min", p_min[i]}, {"p_max", p_max[i]}});
    }
  }
  return doc.dump(2);
}

void OpfModel::validate() const {
  const auto n = c.size();
  if (d.size() != n || p_min.size() != n || p_max.size() != n) {
    throw std::invalid_argument("model vectors have inconsistent lengths");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (d[i] < 0.0) throw std::invalid_argument("negative load");
    if (p_min[i] > p_max[i]) throw std::invalid_argument("p_min exceeds p_max");
  }
  if (p_max.sum() < d.sum()) throw std::invalid_argument("aggregate generation below total load");
}

Eigen::MatrixXd build_ptdf(const NetworkCase& network) {
  network.validate();
  const int n = network.num_buses();
  const int e = network.num_lines();

  // Nodal and line susceptance matrices from the oriented incidence.
  Eigen::MatrixXd bbus = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd bf = Eigen::MatrixXd::Zero(e, n);
  for (int l = 0; l < e; ++l) {
    const auto& line = network.lines[l];
    const double b = line.susceptance;
    bbus(line.from, line.from) += b;
    bbus(line.to, line.to) += b;
    bbus(line.from, line.to) -= b;
    bbus(line.to, line.from) -= b;
    bf(l, line.from) = b;
    bf(l, line.to) = -b;
  }

  // Drop the slack row/column, invert, re-insert a zero slack column.
  std::vector<int> keep;
  keep.reserve(n - 1);
  for (int i = 0; i < n; ++i) {
    if (i != network.slack) keep.push_back(i);
  }
  Eigen::MatrixXd bred(n - 1, n - 1);
  Eigen::MatrixXd bfred(e, n - 1);
  for (int i = 0; i < n - 1; ++i) {
    for (int j = 0; j < n - 1; ++j) bred(i, j) = bbus(keep[i], keep[j]);
    bfred.col(i) = bf.col(keep[i]);
  }
  const Eigen::MatrixXd fred = bfred * bred.ldlt().solve(Eigen::MatrixXd::Identity(n - 1, n - 1));

  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(e, n);
  for (int j = 0; j < n - 1; ++j) F.col(keep[j]) = fred.col(j);
  return F;
}

namespace {

// Shared LP assembly for the nominal and relaxed problems; psi < 0 means
// nominal (hard line limits, no violation variables).
OpfSolution solve_dcopf(const Eigen::MatrixXd& F, const Eigen::VectorXd& phi_bar,
                        const OpfModel& model, double psi) {
  model.validate();
  const int n = static_cast<int>(model.c.size());
  const int e = static_cast<int>(F.rows());
  if (F.cols() != n) throw std::invalid_argument("PTDF width does not match the model");
  if (phi_bar.size() != e) throw std::invalid_argument("capacity vector length mismatch");
  const bool relaxed = psi >= 0.0;

  LinearProgram lp;
  std::vector<int> pv(n);
  for (int i = 0; i < n; ++i) {
    pv[i] = lp.add_var(model.p_min[i], model.p_max[i], model.c[i]);
  }
  std::vector<int> vv;
  if (relaxed) {
    vv.resize(e);
    for (int l = 0; l < e; ++l) vv[l] = lp.add_var(0.0, kInf, psi);
  }

  LinExpr balance;
  for (int i = 0; i < n; ++i) balance.add(pv[i], 1.0);
  lp.add_row(balance, RowSense::Equal, model.d.sum(), "balance");

  for (int l = 0; l < e; ++l) {
    const double fd = F.row(l).dot(model.d);
    LinExpr up, down;
    for (int i = 0; i < n; ++i) {
      const double fli = F(l, i);
      if (fli != 0.0) {
        up.add(pv[i], fli);
        down.add(pv[i], -fli);
      }
    }
    if (relaxed) {
      up.add(vv[l], -1.0);
      down.add(vv[l], -1.0);
    }
    lp.add_row(up, RowSense::LessEqual, phi_bar[l] + fd);
    lp.add_row(down, RowSense::LessEqual, phi_bar[l] - fd);
  }

  const solver::SolveOutcome res = solver::solve_lp(lp);
  OpfSolution out;
  if (res.status == SolveStatus::Infeasible) {
    out.status = OpfStatus::Infeasible;
    return out;
  }
  if (res.status != SolveStatus::Optimal) {
    throw std::runtime_error("DC-OPF solve did not terminate optimally");
  }
  out.status = OpfStatus::Optimal;
  out.p = res.x.head(n);
  out.flows = F * (out.p - model.d);
  if (relaxed) out.v = res.x.segment(n, e);
  out.cost = res.objective;
  return out;
}

OpfModel jitter_model(const NetworkCase& base, Rng& rng, const PopulationOptions& opt) {
  const int n = base.num_buses();
  OpfModel m;
  m.c = Eigen::VectorXd::Zero(n);
  m.d = Eigen::VectorXd::Zero(n);
  m.p_min = base.p_min;
  m.p_max = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    m.d[i] = base.load[i] * rng.uniform(1.0 - opt.spread, 1.0 + opt.spread);
    m.p_max[i] = base.p_max[i] * rng.uniform(1.0 - opt.spread, 1.0 + opt.spread);
    if (opt.sample_p_min) {
      m.p_min[i] = base.p_min[i] * rng.uniform(1.0 - opt.spread, 1.0 + opt.spread);
    }
    if (base.p_max[i] > 0.0) m.c[i] = rng.uniform(opt.cost_lo, opt.cost_hi);
    m.p_min[i] = std::min(m.p_min[i], m.p_max[i]);
  }
  return m;
}

}  // namespace

OpfSolution solve_opf(const Eigen::MatrixXd& F, const Eigen::VectorXd& phi_bar,
                      const OpfModel& model) {
  if ((phi_bar.array() < 0.0).any()) throw std::invalid_argument("capacities must be nonnegative");
  return solve_dcopf(F, phi_bar, model, -1.0);
}

OpfSolution solve_relaxed_opf(const Eigen::MatrixXd& F, const Eigen::VectorXd& phi_bar,
                              const OpfModel& model, double psi) {
  if (!(psi > model.c.maxCoeff())) {
    throw std::invalid_argument("penalty must exceed the maximum cost coefficient");
  }
  return solve_dcopf(F, phi_bar, model, psi);
}

OpfPopulation sample_population(const NetworkCase& base, int m, Rng& rng,
                                const PopulationOptions& options) {
  if (m < 1) throw std::invalid_argument("population size must be at least 1");
  base.validate();
  const Eigen::MatrixXd F = build_ptdf(base);
  const Eigen::VectorXd fbar = base.f_bar();

  OpfPopulation pop;
  pop.network = base;
  pop.models.reserve(m);
  pop.c_max = 0.0;
  for (int i = 0; i < m; ++i) {
    bool accepted = false;
    for (int attempt = 0; attempt < options.rejection_cap; ++attempt) {
      OpfModel candidate = jitter_model(base, rng, options);
      if (candidate.p_max.sum() < candidate.d.sum()) continue;
      if (solve_opf(F, fbar, candidate).status != OpfStatus::Optimal) continue;
      pop.c_max = std::max(pop.c_max, candidate.c.maxCoeff());
      pop.models.push_back(std::move(candidate));
      accepted = true;
      break;
    }
    if (!accepted) {
      throw std::runtime_error(
          "population sampling exceeded the rejection cap; review line capacities and "
          "generation limits of the base case");
    }
  }
  return pop;
}

AssumptionReport check_assumptions(const OpfPopulation& population, const Eigen::VectorXd& f_bar,
                                   double alpha, double psi, int pairs, Rng& rng) {
  AssumptionReport report;
  const Eigen::MatrixXd F = build_ptdf(population.network);
  for (int i = 0; i < population.size(); ++i) {
    if (solve_opf(F, f_bar, population.models[i]).status != OpfStatus::Optimal) {
      report.feasible_at_fbar = false;
      report.infeasible_models.push_back(i);
    }
  }

  (void)psi;
  const int e = static_cast<int>(f_bar.size());
  for (int k = 0; k < pairs; ++k) {
    // Random alpha-adjacent pair around f_bar: one coordinate differs by at
    // most alpha between phi1 and phi2.
    Eigen::VectorXd phi1 = f_bar;
    const int coord = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(e));
    Eigen::VectorXd phi2 = phi1;
    phi2[coord] = std::max(0.0, phi2[coord] + rng.uniform(-alpha, alpha));
    const int i = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(population.size()));
    const OpfSolution s1 = solve_opf(F, phi1, population.models[i]);
    const OpfSolution s2 = solve_opf(F, phi2, population.models[i]);
    if (s1.status != OpfStatus::Optimal || s2.status != OpfStatus::Optimal) continue;
    const double adj = std::abs(phi1[coord] - phi2[coord]);
    if (adj == 0.0) continue;
    const double diff = std::abs(s1.cost - s2.cost);
    const double ratio = diff / (population.c_max * adj);
    ++report.pairs_checked;
    if (ratio > report.worst_ratio) {
      report.worst_ratio = ratio;
      report.worst_model = i;
    }
    if (ratio > 1.0 + 1e-9) report.cost_lipschitz_ok = false;
  }
  return report;
}

}  // namespace dpsyn
