#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ssc {

using ItemId = std::uint32_t;
using StateId = std::uint32_t;
using Assignment = std::pair<ItemId, StateId>;

inline constexpr StateId kUnassigned = std::numeric_limits<StateId>::max();

/// Partial assignment of observed states to items.
///
/// Stored densely (one slot per item, `kUnassigned` for items outside the
/// domain), so two subrealizations compare equal exactly when their
/// (item, state) relations are equal. This makes the type usable directly as
/// a memoization key.
class Subrealization {
 public:
  Subrealization() = default;
  explicit Subrealization(std::size_t item_count)
      : states_(item_count, kUnassigned) {}

  /// Builds from explicit pairs in any order. Throws ItemAlreadyAssigned on a
  /// repeated item and DomainError on an item outside [0, item_count).
  static Subrealization from_pairs(std::size_t item_count,
                                   std::span<const Assignment> pairs);

  std::size_t item_count() const { return states_.size(); }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool contains(ItemId e) const {
    return e < states_.size() && states_[e] != kUnassigned;
  }
  std::optional<StateId> state_of(ItemId e) const {
    if (!contains(e)) return std::nullopt;
    return states_[e];
  }

  /// psi ∪ {(e, o)}; throws ItemAlreadyAssigned when e is already observed.
  Subrealization extend(ItemId e, StateId o) const;
  void assign(ItemId e, StateId o);

  /// Canonical form: pairs sorted by item.
  std::vector<Assignment> pairs() const;

  bool is_subset_of(const Subrealization& other) const;
  bool is_proper_subset_of(const Subrealization& other) const {
    return size_ < other.size_ && is_subset_of(other);
  }

  std::span<const StateId> raw() const { return states_; }
  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const Subrealization&, const Subrealization&) = default;

 private:
  std::vector<StateId> states_;
  std::size_t size_ = 0;
};

struct SubrealizationHash {
  std::size_t operator()(const Subrealization& psi) const { return psi.hash(); }
};

/// Total assignment of states to items.
struct Realization {
  std::vector<StateId> states;

  std::size_t item_count() const { return states.size(); }
  StateId operator[](ItemId e) const { return states[e]; }

  /// True when psi agrees with this realization on dom(psi).
  bool extends(const Subrealization& psi) const;
  Subrealization as_subrealization() const;
  std::string to_string() const;

  friend bool operator==(const Realization&, const Realization&) = default;
};

}  // namespace ssc
