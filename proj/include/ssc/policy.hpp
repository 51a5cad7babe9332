#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ssc/instance.hpp"
#include "ssc/subrealization.hpp"

namespace ssc {

/// Adaptive covering policy: maps a subrealization to the next item to
/// select. The rule may return nullopt where the policy is undefined.
class Policy {
 public:
  using Rule = std::function<std::optional<ItemId>(const Subrealization&)>;

  Policy(std::string name, Rule rule) : name_(std::move(name)), rule_(std::move(rule)) {}

  std::optional<ItemId> next(const Subrealization& psi) const { return rule_(psi); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  Rule rule_;
};

/// Policy defined by an explicit lookup table; undefined elsewhere.
Policy table_policy(std::string name,
                    std::vector<std::pair<Subrealization, ItemId>> choices);

struct TreeNode {
  Subrealization psi;
  double utility = 0.0;
  double reach_probability = 0.0;
  double path_cost = 0.0;
  std::optional<ItemId> item;  // nullopt at leaves
  std::vector<std::pair<StateId, std::size_t>> children;
  std::optional<std::size_t> parent;
  std::size_t depth = 0;

  bool is_leaf() const { return !item.has_value(); }
};

/// Decision tree T(pi). Nodes are stored in breadth-first discovery order,
/// children in ascending state order; node 0 is the root.
class PolicyTree {
 public:
  static constexpr std::size_t kNoNode = std::numeric_limits<std::size_t>::max();

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(std::size_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

  std::optional<std::size_t> find(const Subrealization& psi) const;
  std::size_t child(std::size_t id, StateId o) const;

  /// N(pi) in breadth-first order.
  std::vector<std::size_t> internal_nodes() const;
  std::vector<std::size_t> leaves() const;

  /// Node ids visited when executing on phi, root first, leaf last.
  std::vector<std::size_t> path(const Realization& phi) const;

 private:
  friend PolicyTree materialize_tree(const Instance&, const Policy&, std::size_t);

  std::vector<TreeNode> nodes_;
  std::unordered_map<Subrealization, std::size_t, SubrealizationHash> lookup_;
};

inline constexpr std::size_t kDefaultNodeBudget = 100'000;

/// Throws PolicyIncomplete, NonCoveringPolicy, ItemAlreadyAssigned (a rule
/// re-selecting an observed item) or BudgetExceeded.
PolicyTree materialize_tree(const Instance& inst, const Policy& policy,
                            std::size_t node_budget = kDefaultNodeBudget);

struct ExecutionTrace {
  std::vector<Subrealization> visited;  // psi_1 = empty ... psi_k = cover
  std::vector<double> utilities;        // f(psi_j)
  std::vector<ItemId> selected;         // in selection order
  double cost = 0.0;

  const Subrealization& cover() const { return visited.back(); }
};

ExecutionTrace execute(const Instance& inst, const Policy& policy, const Realization& phi);
ExecutionTrace execute(const Instance& inst, const PolicyTree& tree, const Realization& phi);

/// Sum over leaves of reach probability times path cost. The node form (sum
/// over N(pi) of reach probability times the selected cost) is computed as
/// well; disagreement beyond 1e-12 relative raises an Internal error.
double expected_cost_exact(const Instance& inst, const PolicyTree& tree);

struct McEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t trials = 0;
};

McEstimate expected_cost_mc(const Instance& inst, const Policy& policy, std::size_t trials,
                            std::uint64_t seed);
McEstimate expected_cost_mc(const Instance& inst, const PolicyTree& tree, std::size_t trials,
                            std::uint64_t seed);

}  // namespace ssc
