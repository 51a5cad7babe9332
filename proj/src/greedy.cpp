#include "ssc/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "ssc/error.hpp"
#include "ssc/utility.hpp"

namespace ssc {
namespace {

struct PriceScan {
  std::vector<std::pair<ItemId, UnitPrice>> prices;
  std::optional<UnitPrice> min;
};

PriceScan scan_prices(const Instance& inst, const Subrealization& psi) {
  PriceScan scan;
  for (ItemId e = 0; e < inst.item_count(); ++e) {
    if (psi.contains(e)) continue;
    const UnitPrice p = unit_price(inst, psi, e);
    scan.prices.emplace_back(e, p);
    if (!scan.min || p < *scan.min) scan.min = p;
  }
  return scan;
}

}  // namespace

double UnitPrice::as_double() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

UnitPrice unit_price(const Instance& inst, const Subrealization& psi, ItemId e) {
  const double gain = expected_marginal(inst, psi, e);
  if (!(gain > 0.0)) return UnitPrice::infinite();
  return UnitPrice::finite(inst.cost(e) / gain);
}

Selector Selector::adversarial(double alpha) {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::kDomainError, "alpha must be a finite real >= 1");
  }
  return {Kind::kApproxAdversarial, alpha};
}

ItemId greedy_select(const Instance& inst, const Subrealization& psi, const Selector& sel) {
  const PriceScan scan = scan_prices(inst, psi);
  if (!scan.min || scan.min->is_infinite()) {
    fail(ErrorCode::kNoProgressPossible,
         "every unobserved item has zero expected marginal at " + psi.to_string());
  }
  const double min = scan.min->value();

  if (sel.kind == Selector::Kind::kExact) {
    for (const auto& [e, p] : scan.prices) {
      if (p == *scan.min) return e;
    }
  }

  const double ceiling = sel.alpha * min;
  std::optional<ItemId> worst;
  double worst_price = -1.0;
  for (const auto& [e, p] : scan.prices) {
    if (p.is_infinite() || p.value() > ceiling) continue;
    if (p.value() > worst_price) {
      worst = e;
      worst_price = p.value();
    }
  }
  return *worst;
}

Policy greedy_policy(const Instance& inst, const Selector& sel) {
  std::string name = sel.kind == Selector::Kind::kExact
                         ? std::string("greedy")
                         : "greedy-adversarial(" + std::to_string(sel.alpha) + ")";
  return Policy(std::move(name), [inst, sel](const Subrealization& psi) -> std::optional<ItemId> {
    return greedy_select(inst, psi, sel);
  });
}

std::vector<GreedyAuditEntry> audit_greedy_choices(const Instance& inst, const PolicyTree& tree,
                                                   double alpha) {
  std::vector<GreedyAuditEntry> out;
  for (std::size_t id : tree.internal_nodes()) {
    const auto& node = tree.node(id);
    const PriceScan scan = scan_prices(inst, node.psi);
    const UnitPrice chosen = unit_price(inst, node.psi, *node.item);
    const double min = scan.min->as_double();
    const bool ok = !chosen.is_infinite() && !scan.min->is_infinite() &&
                    chosen.value() <= alpha * min + 1e-12 * std::max(1.0, alpha * min);
    out.push_back({id, chosen.as_double(), min, ok});
  }
  return out;
}

}  // namespace ssc
