#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string_view>
#include <variant>
#include <vector>

#include "ssc/subrealization.hpp"
#include "ssc/validation.hpp"

namespace ssc {

class Instance;

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// f(psi) = total weight of the union of coversets(e, psi(e)) over dom(psi).
struct StochasticCoverage {
  std::vector<double> weights;  // one per ground element
  // coversets[e][o] lists ground elements covered by item e in state o.
  std::vector<std::vector<std::vector<std::uint32_t>>> coversets;

  std::size_t element_count() const { return weights.size(); }
};

/// f(psi) = min(goal, sum of gains[e][psi(e)]).
struct TruncatedAdditive {
  double goal = 0.0;
  std::vector<std::vector<double>> gains;
};

/// f given pointwise on canonical relations; lookups of unlisted relations
/// are errors.
struct ExplicitTable {
  double goal = 0.0;
  std::map<std::vector<Assignment>, double> entries;
};

class UtilityModel {
 public:
  using Variant = std::variant<StochasticCoverage, TruncatedAdditive, ExplicitTable>;

  /// Throws InvalidInstance on malformed data (negative weights or gains,
  /// element indices out of range, non-positive goal).
  explicit UtilityModel(Variant model);

  std::string_view kind() const;
  const Variant& model() const { return model_; }

  double evaluate(const Subrealization& psi) const;

  /// f(psi ∪ {(e,o)}) - f(psi).
  double marginal(const Subrealization& psi, ItemId e, StateId o) const;

  /// Goal value carried by the model itself: the total weight for coverage,
  /// the declared Q for the other two families.
  double declared_goal() const;

 private:
  Variant model_;
};

struct GoalGap {
  double goal = 0.0;
  double eta = 0.0;
  bool eta_is_exact = false;
};

/// Mixed-radix index over every subrealization built from positive-probability
/// states. Digit 0 of an item means "unassigned", digit j means its j-th
/// supported state.
class LatticeIndex {
 public:
  /// Throws BudgetExceeded when the lattice has more than `budget` points.
  LatticeIndex(const Instance& inst, std::size_t budget);

  std::size_t size() const { return size_; }
  std::size_t encode(const Subrealization& psi) const;
  Subrealization decode(std::size_t code) const;

 private:
  std::vector<std::vector<StateId>> support_;
  std::vector<std::vector<std::size_t>> digit_of_state_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 1;
};

/// f over the whole lattice, indexed by LatticeIndex::encode.
struct UtilityTable {
  LatticeIndex index;
  std::vector<double> values;

  double at(const Subrealization& psi) const { return values[index.encode(psi)]; }
};

UtilityTable tabulate(const Instance& inst, std::size_t budget = kDefaultBudget);

double expected_marginal(const Instance& inst, const Subrealization& psi, ItemId e);

/// Q, cross-checked against f on every enumerable realization. Throws
/// NotCoverable when some realization misses the goal.
double goal_value(const Instance& inst, std::size_t budget = kDefaultBudget);

/// Exact eta when the subrealization lattice fits the budget, otherwise the
/// declared eta, otherwise 1 for integer-valued utilities.
GoalGap compute_eta(const Instance& inst, std::size_t budget = kDefaultBudget);

/// Normalization, monotonicity and submodularity over every realization and
/// every pair psi ⊆ psi' ⊆ phi with an extra item outside dom(psi').
Violations validate_polymatroid(const Instance& inst, std::size_t budget = kDefaultBudget);

/// Assumption that every realization reaches Q. Exact when enumerable;
/// otherwise a sufficient certificate or an Unverified entry.
Violations validate_coverability(const Instance& inst, std::size_t budget = kDefaultBudget);

/// Evaluates random subrealizations built through shuffled extension orders
/// and reports any order-dependent value.
Violations validate_sufficiency(const Instance& inst, std::size_t samples, std::uint64_t seed);

}  // namespace ssc
