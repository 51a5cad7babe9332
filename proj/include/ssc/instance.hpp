#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ssc/subrealization.hpp"
#include "ssc/utility.hpp"
#include "ssc/validation.hpp"

namespace ssc {

/// Items with independent state distributions, positive costs and a utility
/// oracle. Immutable after construction and cheap to copy (the utility model
/// is shared).
class Instance {
 public:
  /// Throws InvalidInstance when dimensions disagree. Value checks (positive
  /// costs, marginals summing to one) are left to validate_instance so that
  /// malformed fixtures can still be built and inspected.
  Instance(std::vector<double> costs, std::vector<std::vector<double>> probs,
           UtilityModel utility, bool integer_valued,
           std::optional<double> declared_eta = std::nullopt);

  std::size_t item_count() const { return costs_.size(); }
  std::size_t state_count() const { return state_count_; }

  double cost(ItemId e) const { return costs_[e]; }
  std::span<const double> costs() const { return costs_; }
  double prob(ItemId e, StateId o) const { return probs_[e][o]; }
  std::span<const double> probs(ItemId e) const { return probs_[e]; }
  const std::vector<std::vector<double>>& prob_table() const { return probs_; }

  /// States of e with positive probability, ascending.
  std::span<const StateId> support(ItemId e) const { return support_[e]; }

  const UtilityModel& utility() const { return *utility_; }
  bool integer_valued() const { return integer_valued_; }
  std::optional<double> declared_eta() const { return declared_eta_; }

  /// Q as carried by the utility model.
  double goal() const { return goal_; }

  double f(const Subrealization& psi) const { return utility_->evaluate(psi); }
  bool is_cover(double value) const { return value >= goal_ - cover_slack_; }
  bool is_cover(const Subrealization& psi) const { return is_cover(f(psi)); }

  Subrealization empty_subrealization() const { return Subrealization(item_count()); }

 private:
  std::vector<double> costs_;
  std::vector<std::vector<double>> probs_;
  std::vector<std::vector<StateId>> support_;
  std::shared_ptr<const UtilityModel> utility_;
  std::size_t state_count_ = 0;
  bool integer_valued_ = false;
  std::optional<double> declared_eta_;
  double goal_ = 0.0;
  double cover_slack_ = 0.0;
};

struct WeightedRealization {
  Realization realization;
  double probability = 0.0;
};

double realization_probability(const Instance& inst, const Realization& phi);

/// Number of positive-probability realizations (saturating).
std::size_t realization_count(const Instance& inst);

/// Calls `visit` for every positive-probability realization in item-major
/// lexicographic order. Throws BudgetExceeded when the count exceeds budget.
void for_each_realization(const Instance& inst, std::size_t budget,
                          const std::function<void(const Realization&, double)>& visit);

std::vector<WeightedRealization> enumerate_realizations(const Instance& inst,
                                                        std::size_t budget = kDefaultBudget);

/// Engine for one Monte Carlo trial; a pure function of (seed, trial).
std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial);

Realization sample_realization(const Instance& inst, std::mt19937_64& stream);
Realization sample_realization(const Instance& inst, std::uint64_t seed, std::uint64_t trial);

Violations validate_instance(const Instance& inst);

}  // namespace ssc
