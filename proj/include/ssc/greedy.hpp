#pragma once

#include <cstddef>
#include <vector>

#include "ssc/instance.hpp"
#include "ssc/policy.hpp"

namespace ssc {

/// c(e) / E[F_psi(e)], with an explicit infinite state for a zero expected
/// marginal.
class UnitPrice {
 public:
  static UnitPrice infinite() { return UnitPrice(); }
  static UnitPrice finite(double value) { return UnitPrice(value); }

  bool is_infinite() const { return infinite_; }
  /// Only meaningful when finite.
  double value() const { return value_; }
  /// +inf for the infinite sentinel; for reporting.
  double as_double() const;

  friend bool operator<(const UnitPrice& a, const UnitPrice& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator==(const UnitPrice&, const UnitPrice&) = default;

 private:
  UnitPrice() = default;
  explicit UnitPrice(double value) : value_(value), infinite_(false) {}

  double value_ = 0.0;
  bool infinite_ = true;
};

UnitPrice unit_price(const Instance& inst, const Subrealization& psi, ItemId e);

struct Selector {
  enum class Kind { kExact, kApproxAdversarial };

  Kind kind = Kind::kExact;
  double alpha = 1.0;

  static Selector exact() { return {}; }
  /// Picks the most expensive item whose price is within alpha of the
  /// minimum. Requires alpha >= 1.
  static Selector adversarial(double alpha);
};

/// Throws NoProgressPossible when every unobserved item has infinite price.
ItemId greedy_select(const Instance& inst, const Subrealization& psi, const Selector& sel);

Policy greedy_policy(const Instance& inst, const Selector& sel);

struct GreedyAuditEntry {
  std::size_t node = 0;
  double chosen_price = 0.0;
  double min_price = 0.0;
  bool ok = false;  // chosen <= alpha * min, 1e-12 relative slack
};

/// One entry per non-leaf node of T(sigma), in breadth-first order.
std::vector<GreedyAuditEntry> audit_greedy_choices(const Instance& inst, const PolicyTree& tree,
                                                   double alpha);

}  // namespace ssc
