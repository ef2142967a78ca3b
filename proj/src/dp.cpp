#include "dpsyn/dp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpsyn {

AdjacencyParam::AdjacencyParam(double a) : alpha(a) {
  if (!(a > 0.0)) throw std::invalid_argument("adjacency parameter alpha must be > 0");
}

Epsilon::Epsilon(double value) : base(value), num(1), den(1) {
  if (!(value > 0.0)) throw std::invalid_argument("epsilon must be > 0");
}

Epsilon::Epsilon(double base_eps, std::uint64_t n, std::uint64_t d) : base(base_eps), num(n), den(d) {
  if (!(base_eps > 0.0) || n == 0 || d == 0) throw std::invalid_argument("invalid epsilon fraction");
}

void PrivacyLedger::charge(const std::string& label, const Epsilon& epsilon) {
  entries_.push_back(Entry{label, epsilon});
}

double PrivacyLedger::total() const { return compose(*this); }

nlohmann::json PrivacyLedger::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : entries_) {
    entries.push_back({{"label", e.label}, {"epsilon", e.epsilon.value()}});
  }
  return {{"entries", entries}, {"total", total()}};
}

namespace {

// Exact fraction accumulator per base budget.
struct FractionSum {
  double base;
  unsigned long long num;
  unsigned long long den;
};

}  // namespace

double compose(const PrivacyLedger& ledger) {
  std::vector<FractionSum> groups;
  for (const auto& e : ledger.entries()) {
    FractionSum* g = nullptr;
    for (auto& cand : groups) {
      if (cand.base == e.epsilon.base) {
        g = &cand;
        break;
      }
    }
    if (g == nullptr) {
      groups.push_back(FractionSum{e.epsilon.base, 0, 1});
      g = &groups.back();
    }
    // g->num/g->den += e.num/e.den, reduced to keep the integers small.
    const unsigned long long gcd_d = std::gcd(g->den, static_cast<unsigned long long>(e.epsilon.den));
    const unsigned long long lhs_scale = e.epsilon.den / gcd_d;
    const unsigned long long rhs_scale = g->den / gcd_d;
    g->num = g->num * lhs_scale + e.epsilon.num * rhs_scale;
    g->den = g->den * lhs_scale;
    const unsigned long long gcd_r = std::gcd(g->num, g->den);
    if (gcd_r > 1) {
      g->num /= gcd_r;
      g->den /= gcd_r;
    }
  }
  double total = 0.0;
  for (const auto& g : groups) {
    if (g.den == 1) {
      total += g.base * static_cast<double>(g.num);
    } else {
      total += g.base * (static_cast<double>(g.num) / static_cast<double>(g.den));
    }
  }
  return total;
}

double laplace_sample(double scale, Rng& rng) {
  if (scale < 0.0) throw std::invalid_argument("laplace scale must be >= 0");
  if (scale == 0.0) return 0.0;
  // Inverse CDF: u uniform on (-1/2, 1/2), x = -scale * sgn(u) * log(1 - 2|u|).
  double u = rng.uniform01() - 0.5;
  while (u == -0.5) u = rng.uniform01() - 0.5;
  const double sign = (u < 0.0) ? -1.0 : 1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(u));
}

Eigen::VectorXd laplace_mechanism(const Eigen::VectorXd& values, double sensitivity,
                                  const Epsilon& epsilon, Rng& rng, PrivacyLedger& ledger,
                                  const std::string& label, bool noise_off) {
  if (!(sensitivity > 0.0)) throw std::invalid_argument("sensitivity must be > 0");
  if (!(epsilon.value() > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double scale = noise_off ? 0.0 : sensitivity / epsilon.value();
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    out[i] = values[i] + laplace_sample(scale, rng);
  }
  ledger.charge(label, epsilon);
  return out;
}

std::size_t report_noisy_max(const Eigen::VectorXd& scores, double sensitivity,
                             const Epsilon& epsilon, Rng& rng, PrivacyLedger& ledger,
                             const std::string& label, bool noise_off) {
  if (scores.size() < 1) throw std::invalid_argument("report_noisy_max needs at least one score");
  if (!(sensitivity > 0.0)) throw std::invalid_argument("sensitivity must be > 0");
  if (!(epsilon.value() > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  const double scale = noise_off ? 0.0 : sensitivity / epsilon.value();
  std::size_t best = 0;
  double best_score = scores[0] + laplace_sample(scale, rng);
  for (Eigen::Index i = 1; i < scores.size(); ++i) {
    const double noisy = scores[i] + laplace_sample(scale, rng);
    if (noisy > best_score) {
      best_score = noisy;
      best = static_cast<std::size_t>(i);
    }
  }
  // One charge for the whole selection: the noisy argmax is a single
  // exponential-mechanism query, not one query per candidate.
  ledger.charge(label, epsilon);
  return best;
}

BudgetSplit split_budget_wpo(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  return BudgetSplit{Epsilon(epsilon, 1, 2), Epsilon(epsilon, 1, 4)};
}

BudgetSplit split_budget_tco(double epsilon, int horizon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  if (horizon < 1) throw std::invalid_argument("iteration limit T must be >= 1");
  return BudgetSplit{Epsilon(epsilon, 1, 2), Epsilon(epsilon, 1, 4ull * static_cast<std::uint64_t>(horizon))};
}

}  // namespace dpsyn
