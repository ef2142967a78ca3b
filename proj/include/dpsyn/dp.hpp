#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "dpsyn/rng.hpp"

namespace dpsyn {

// Adjacency parameter alpha of Definition 1: two datasets are adjacent when
// they differ in a single coordinate by at most alpha (> 0).
struct AdjacencyParam {
  double alpha;
  explicit AdjacencyParam(double a);
};

// A privacy charge, kept as base * num / den. Budget splits produce charges
// like eps/2 or eps/(4T); storing the fraction exactly lets the ledger total
// close to exactly eps instead of accumulating float rounding across 2T+1
// additions.
struct Epsilon {
  double base = 0.0;
  std::uint64_t num = 1;
  std::uint64_t den = 1;

  Epsilon() = default;
  Epsilon(double value);  // NOLINT: plain epsilon values convert implicitly
  Epsilon(double base_eps, std::uint64_t num, std::uint64_t den);

  double value() const { return base * (static_cast<double>(num) / static_cast<double>(den)); }
};

// Append-only record of per-query privacy losses (sequential composition
// made executable). Entries cannot be removed or edited.
class PrivacyLedger {
 public:
  struct Entry {
    std::string label;
    Epsilon epsilon;
  };

  void charge(const std::string& label, const Epsilon& epsilon);
  const std::vector<Entry>& entries() const { return entries_; }
  double total() const;

  nlohmann::json to_json() const;

 private:
  std::vector<Entry> entries_;
};

// Sum of all logged privacy losses (Theorem 1). Charges sharing a base
// budget are summed as exact fractions first.
double compose(const PrivacyLedger& ledger);

// One draw from the zero-mean Laplace distribution with the given scale,
// via inverse CDF on a uniform draw. scale == 0 returns exactly 0 (the
// noise-off test mode); scale < 0 is a parameter error.
double laplace_sample(double scale, Rng& rng);

// Laplace mechanism: values + i.i.d. Laplace(sensitivity / epsilon) noise,
// charging epsilon to the ledger once. noise_off forces the scale to zero
// while still charging the budget; callers gate it behind an unsafe flag.
Eigen::VectorXd laplace_mechanism(const Eigen::VectorXd& values, double sensitivity,
                                  const Epsilon& epsilon, Rng& rng, PrivacyLedger& ledger,
                                  const std::string& label, bool noise_off = false);

// Report-noisy-max: adds i.i.d. Laplace(sensitivity / epsilon) noise to each
// score and returns the argmax index, ties broken by lowest index. Charges
// epsilon once for the whole selection regardless of the number of scores.
std::size_t report_noisy_max(const Eigen::VectorXd& scores, double sensitivity,
                             const Epsilon& epsilon, Rng& rng, PrivacyLedger& ledger,
                             const std::string& label, bool noise_off = false);

struct BudgetSplit {
  Epsilon epsilon_1;  // initialization budget
  Epsilon epsilon_2;  // per-estimate budget
};

// WPO split: eps_1 = eps/2, eps_2 = eps/4, so eps_1 + 2*eps_2 == eps.
BudgetSplit split_budget_wpo(double epsilon);

// TCO split over T iterations: eps_1 = eps/2, eps_2 = eps/(4T), so
// eps_1 + 2*T*eps_2 == eps.
BudgetSplit split_budget_tco(double epsilon, int horizon);

}  // namespace dpsyn
