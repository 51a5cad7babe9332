#include "ssc/optimal.hpp"

#include <memory>
#include <string>

#include "ssc/error.hpp"

namespace ssc {

ValueTable::ValueTable(LatticeIndex index)
    : index_(std::move(index)), entries_(index_.size()), known_(index_.size(), 0) {}

std::optional<ValueTable::Entry> ValueTable::lookup(const Subrealization& psi) const {
  const std::size_t code = index_.encode(psi);
  if (!known_[code]) return std::nullopt;
  return entries_[code];
}

const ValueTable::Entry& ValueTable::at(const Subrealization& psi) const {
  const std::size_t code = index_.encode(psi);
  if (!known_[code]) {
    fail(ErrorCode::kDomainError, psi.to_string() + " is not reachable by the optimal policy");
  }
  return entries_[code];
}

std::vector<std::pair<Subrealization, ValueTable::Entry>> ValueTable::entries() const {
  std::vector<std::pair<Subrealization, Entry>> out;
  for (std::size_t code = 0; code < entries_.size(); ++code) {
    if (known_[code]) out.emplace_back(index_.decode(code), entries_[code]);
  }
  return out;
}

std::size_t ValueTable::filled() const {
  std::size_t count = 0;
  for (char k : known_) count += k ? 1 : 0;
  return count;
}

class OptimalSolver {
 public:
  OptimalSolver(const Instance& inst, std::size_t budget)
      : inst_(inst), table_(LatticeIndex(inst, budget)) {}

  OptimalSolution run() {
    const double value = solve(inst_.empty_subrealization());
    return {value, std::move(table_)};
  }

 private:
  double solve(const Subrealization& psi) {
    const std::size_t code = table_.index_.encode(psi);
    if (table_.known_[code]) return table_.entries_[code].value;

    ValueTable::Entry entry;
    if (!inst_.is_cover(psi)) {
      double best = std::numeric_limits<double>::infinity();
      for (ItemId e = 0; e < inst_.item_count(); ++e) {
        if (psi.contains(e)) continue;
        double v = inst_.cost(e);
        for (StateId o : inst_.support(e)) v += inst_.prob(e, o) * solve(psi.extend(e, o));
        if (v < best) {
          best = v;
          entry.item = e;
        }
      }
      if (!entry.item) {
        fail(ErrorCode::kNoProgressPossible,
             psi.to_string() + " observes every item without reaching Q");
      }
      entry.value = best;
    }
    table_.entries_[code] = entry;
    table_.known_[code] = 1;
    return entry.value;
  }

  const Instance& inst_;
  ValueTable table_;
};

OptimalSolution optimal_value(const Instance& inst, std::size_t budget) {
  return OptimalSolver(inst, budget).run();
}

Policy optimal_policy(const OptimalSolution& solution) {
  auto table = std::make_shared<const ValueTable>(solution.table);
  return Policy("optimal", [table](const Subrealization& psi) -> std::optional<ItemId> {
    const auto entry = table->lookup(psi);
    if (!entry) return std::nullopt;
    return entry->item;
  });
}

Policy optimal_policy(const Instance& inst, std::size_t budget) {
  return optimal_policy(optimal_value(inst, budget));
}

}  // namespace ssc
