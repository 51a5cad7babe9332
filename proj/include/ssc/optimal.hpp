#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "ssc/instance.hpp"
#include "ssc/policy.hpp"
#include "ssc/utility.hpp"

namespace ssc {

/// Memo of V(psi) and the minimizing item over the subrealization lattice.
/// Only entries reached from the empty subrealization are filled.
class ValueTable {
 public:
  struct Entry {
    double value = 0.0;
    std::optional<ItemId> item;  // nullopt at covers
  };

  std::optional<Entry> lookup(const Subrealization& psi) const;
  /// Throws DomainError when psi was never reached by the recursion.
  const Entry& at(const Subrealization& psi) const;

  /// Every filled entry, in lattice-code order.
  std::vector<std::pair<Subrealization, Entry>> entries() const;
  std::size_t filled() const;

 private:
  friend class OptimalSolver;

  explicit ValueTable(LatticeIndex index);

  LatticeIndex index_;
  std::vector<Entry> entries_;
  std::vector<char> known_;
};

struct OptimalSolution {
  double value = 0.0;
  ValueTable table;
};

/// E[C(pi*)] by V(psi) = min_e [c(e) + sum_o P(e,o) V(psi + (e,o))], ties to
/// the lowest item. Throws BudgetExceeded when the lattice exceeds `budget`
/// and NoProgressPossible when a reachable branch cannot reach Q.
OptimalSolution optimal_value(const Instance& inst, std::size_t budget = kDefaultBudget);

/// Reads the table; the table is shared with the returned policy.
Policy optimal_policy(const OptimalSolution& solution);
Policy optimal_policy(const Instance& inst, std::size_t budget = kDefaultBudget);

}  // namespace ssc
