#include "ssc/policy.hpp"

#include <cmath>
#include <deque>
#include <memory>
#include <sstream>

#include "ssc/error.hpp"

namespace ssc {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Running mean and variance about the first sample, which keeps constant
// streams exact (mean equals the sample, error zero).
class ShiftedMoments {
 public:
  void add(double x) {
    if (count_ == 0) shift_ = x;
    const double d = x - shift_;
    sum_ += d;
    sum_sq_ += d * d;
    ++count_;
  }

  McEstimate estimate() const {
    McEstimate out;
    out.trials = count_;
    if (count_ == 0) return out;
    const double n = static_cast<double>(count_);
    out.mean = shift_ + sum_ / n;
    if (count_ < 2) {
      out.standard_error = std::nan("");
      return out;
    }
    const double variance = std::max(0.0, (sum_sq_ - sum_ * sum_ / n) / (n - 1.0));
    out.standard_error = std::sqrt(variance / n);
    return out;
  }

 private:
  std::size_t count_ = 0;
  double shift_ = 0.0;
  double sum_ = 0.0;
  double sum_sq_ = 0.0;
};

}  // namespace

Policy table_policy(std::string name, std::vector<std::pair<Subrealization, ItemId>> choices) {
  auto table = std::make_shared<std::unordered_map<Subrealization, ItemId, SubrealizationHash>>();
  for (auto& [psi, e] : choices) table->emplace(std::move(psi), e);
  return Policy(std::move(name), [table](const Subrealization& psi) -> std::optional<ItemId> {
    const auto it = table->find(psi);
    if (it == table->end()) return std::nullopt;
    return it->second;
  });
}

std::optional<std::size_t> PolicyTree::find(const Subrealization& psi) const {
  const auto it = lookup_.find(psi);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t PolicyTree::child(std::size_t id, StateId o) const {
  for (const auto& [state, next] : nodes_[id].children) {
    if (state == o) return next;
  }
  return kNoNode;
}

std::vector<std::size_t> PolicyTree::internal_nodes() const {
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (!nodes_[id].is_leaf()) out.push_back(id);
  }
  return out;
}

std::vector<std::size_t> PolicyTree::leaves() const {
  std::vector<std::size_t> out;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    if (nodes_[id].is_leaf()) out.push_back(id);
  }
  return out;
}

std::vector<std::size_t> PolicyTree::path(const Realization& phi) const {
  std::vector<std::size_t> out{0};
  std::size_t id = 0;
  while (!nodes_[id].is_leaf()) {
    const ItemId e = *nodes_[id].item;
    id = child(id, phi[e]);
    if (id == kNoNode) {
      fail(ErrorCode::kDomainError, "realization " + phi.to_string() +
                                        " takes a zero-probability branch at item " +
                                        std::to_string(e));
    }
    out.push_back(id);
  }
  return out;
}

PolicyTree materialize_tree(const Instance& inst, const Policy& policy, std::size_t node_budget) {
  PolicyTree tree;
  const std::size_t n = inst.item_count();

  TreeNode root;
  root.psi = inst.empty_subrealization();
  root.reach_probability = 1.0;
  tree.nodes_.push_back(std::move(root));
  tree.lookup_.emplace(tree.nodes_[0].psi, 0);

  for (std::size_t id = 0; id < tree.nodes_.size(); ++id) {
    // Copy: the node vector grows below.
    const Subrealization psi = tree.nodes_[id].psi;
    const double value = inst.f(psi);
    tree.nodes_[id].utility = value;
    if (inst.is_cover(value)) continue;
    if (psi.size() == n) {
      fail(ErrorCode::kNonCoveringPolicy,
           "branch " + psi.to_string() + " selects every item but stops at f = " + fmt(value) +
               " < Q = " + fmt(inst.goal()));
    }
    const auto choice = policy.next(psi);
    if (!choice) {
      fail(ErrorCode::kPolicyIncomplete,
           "policy '" + policy.name() + "' is undefined at " + psi.to_string());
    }
    const ItemId e = *choice;
    if (e >= n) fail(ErrorCode::kDomainError, "policy selected unknown item " + std::to_string(e));
    if (psi.contains(e)) {
      fail(ErrorCode::kItemAlreadyAssigned, "policy '" + policy.name() + "' re-selects item " +
                                                std::to_string(e) + " at " + psi.to_string());
    }
    tree.nodes_[id].item = e;
    const double reach = tree.nodes_[id].reach_probability;
    const double cost = tree.nodes_[id].path_cost + inst.cost(e);
    const std::size_t depth = tree.nodes_[id].depth + 1;
    for (StateId o : inst.support(e)) {
      if (tree.nodes_.size() >= node_budget) {
        fail(ErrorCode::kBudgetExceeded,
             "policy tree exceeds the node budget of " + std::to_string(node_budget));
      }
      TreeNode child;
      child.psi = psi.extend(e, o);
      child.reach_probability = reach * inst.prob(e, o);
      child.path_cost = cost;
      child.parent = id;
      child.depth = depth;
      const std::size_t child_id = tree.nodes_.size();
      tree.lookup_.emplace(child.psi, child_id);
      tree.nodes_.push_back(std::move(child));
      tree.nodes_[id].children.emplace_back(o, child_id);
    }
  }
  return tree;
}

ExecutionTrace execute(const Instance& inst, const Policy& policy, const Realization& phi) {
  const std::size_t n = inst.item_count();
  ExecutionTrace trace;
  Subrealization psi = inst.empty_subrealization();
  double value = inst.f(psi);
  while (true) {
    trace.visited.push_back(psi);
    trace.utilities.push_back(value);
    if (inst.is_cover(value)) break;
    if (psi.size() == n) {
      fail(ErrorCode::kNonCoveringPolicy, "execution on " + phi.to_string() +
                                              " exhausts all items below Q");
    }
    const auto choice = policy.next(psi);
    if (!choice) {
      fail(ErrorCode::kPolicyIncomplete,
           "policy '" + policy.name() + "' is undefined at " + psi.to_string());
    }
    const ItemId e = *choice;
    if (inst.prob(e, phi[e]) <= 0.0) {
      fail(ErrorCode::kDomainError, "realization " + phi.to_string() +
                                        " assigns a zero-probability state");
    }
    psi = psi.extend(e, phi[e]);
    value = inst.f(psi);
    trace.selected.push_back(e);
    trace.cost += inst.cost(e);
  }
  return trace;
}

ExecutionTrace execute(const Instance& inst, const PolicyTree& tree, const Realization& phi) {
  ExecutionTrace trace;
  const auto ids = tree.path(phi);
  for (std::size_t id : ids) {
    const auto& node = tree.node(id);
    trace.visited.push_back(node.psi);
    trace.utilities.push_back(node.utility);
    if (node.item) {
      trace.selected.push_back(*node.item);
      trace.cost += inst.cost(*node.item);
    }
  }
  return trace;
}

double expected_cost_exact(const Instance& inst, const PolicyTree& tree) {
  double leaf_form = 0.0;
  double node_form = 0.0;
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) {
      leaf_form += node.reach_probability * node.path_cost;
    } else {
      node_form += node.reach_probability * inst.cost(*node.item);
    }
  }
  if (!(std::abs(leaf_form - node_form) <= 1e-12 * std::max(1.0, std::abs(leaf_form)))) {
    fail(ErrorCode::kInternal, "leaf-sum " + fmt(leaf_form) + " and node-sum " +
                                   fmt(node_form) + " expected costs disagree");
  }
  return leaf_form;
}

McEstimate expected_cost_mc(const Instance& inst, const Policy& policy, std::size_t trials,
                            std::uint64_t seed) {
  if (trials == 0) fail(ErrorCode::kDomainError, "at least one trial is required");
  ShiftedMoments moments;
  for (std::size_t t = 0; t < trials; ++t) {
    moments.add(execute(inst, policy, sample_realization(inst, seed, t)).cost);
  }
  return moments.estimate();
}

McEstimate expected_cost_mc(const Instance& inst, const PolicyTree& tree, std::size_t trials,
                            std::uint64_t seed) {
  if (trials == 0) fail(ErrorCode::kDomainError, "at least one trial is required");
  ShiftedMoments moments;
  for (std::size_t t = 0; t < trials; ++t) {
    const Realization phi = sample_realization(inst, seed, t);
    std::size_t id = 0;
    while (!tree.node(id).is_leaf()) id = tree.child(id, phi[*tree.node(id).item]);
    moments.add(tree.node(id).path_cost);
  }
  return moments.estimate();
}

}  // namespace ssc
