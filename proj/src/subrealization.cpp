#include "ssc/subrealization.hpp"

#include <sstream>

#include "ssc/error.hpp"

namespace ssc {

Subrealization Subrealization::from_pairs(std::size_t item_count,
                                          std::span<const Assignment> pairs) {
  Subrealization psi(item_count);
  for (const auto& [e, o] : pairs) {
    if (e >= item_count) {
      fail(ErrorCode::kDomainError, "item " + std::to_string(e) + " out of range");
    }
    psi.assign(e, o);
  }
  return psi;
}

Subrealization Subrealization::extend(ItemId e, StateId o) const {
  Subrealization next = *this;
  next.assign(e, o);
  return next;
}

void Subrealization::assign(ItemId e, StateId o) {
  if (e >= states_.size()) {
    fail(ErrorCode::kDomainError, "item " + std::to_string(e) + " out of range");
  }
  if (o == kUnassigned) fail(ErrorCode::kDomainError, "invalid state");
  if (states_[e] != kUnassigned) {
    fail(ErrorCode::kItemAlreadyAssigned,
         "item " + std::to_string(e) + " already observed in " + to_string());
  }
  states_[e] = o;
  ++size_;
}

std::vector<Assignment> Subrealization::pairs() const {
  std::vector<Assignment> out;
  out.reserve(size_);
  for (ItemId e = 0; e < states_.size(); ++e) {
    if (states_[e] != kUnassigned) out.emplace_back(e, states_[e]);
  }
  return out;
}

bool Subrealization::is_subset_of(const Subrealization& other) const {
  if (states_.size() != other.states_.size() || size_ > other.size_) return false;
  for (std::size_t e = 0; e < states_.size(); ++e) {
    if (states_[e] != kUnassigned && states_[e] != other.states_[e]) return false;
  }
  return true;
}

std::size_t Subrealization::hash() const {
  // FNV-1a over the dense state vector.
  std::uint64_t h = 1469598103934665603ull;
  for (StateId s : states_) {
    h ^= static_cast<std::uint64_t>(s) + 1;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::string Subrealization::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [e, o] : pairs()) {
    if (!first) os << ',';
    os << '(' << e << ',' << o << ')';
    first = false;
  }
  os << '}';
  return os.str();
}

bool Realization::extends(const Subrealization& psi) const {
  if (psi.item_count() != states.size()) return false;
  for (const auto& [e, o] : psi.pairs()) {
    if (states[e] != o) return false;
  }
  return true;
}

Subrealization Realization::as_subrealization() const {
  Subrealization psi(states.size());
  for (ItemId e = 0; e < states.size(); ++e) psi.assign(e, states[e]);
  return psi;
}

std::string Realization::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t e = 0; e < states.size(); ++e) {
    if (e) os << ',';
    os << states[e];
  }
  os << ')';
  return os.str();
}

}  // namespace ssc
