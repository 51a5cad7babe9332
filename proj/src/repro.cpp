#include <cmath>
#include <map>
#include <sstream>
#include <string>

#include "ssc/error.hpp"
#include "ssc/greedy.hpp"
#include "ssc/harness.hpp"
#include "ssc/optimal.hpp"

namespace ssc {
namespace {

// Accumulates literal comparisons and raises once with every mismatch.
class Pins {
 public:
  template <typename T>
  void expect(const std::string& what, const T& got, const T& want) {
    if (!(got == want)) mismatches_.push_back(what);
  }
  void expect_near(const std::string& what, double got, double want) {
    if (!(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)))) {
      mismatches_.push_back(what);
    }
  }
  void raise_if_any(const std::string& example) const {
    if (mismatches_.empty()) return;
    std::string msg = example + " drifted from its pinned values:";
    for (const auto& m : mismatches_) msg += " " + m + ";";
    fail(ErrorCode::kReferenceMismatch, msg);
  }

 private:
  std::vector<std::string> mismatches_;
};

Subrealization rel(std::initializer_list<Assignment> pairs, std::size_t n) {
  const std::vector<Assignment> v(pairs);
  return Subrealization::from_pairs(n, v);
}

}  // namespace

// Three items. Item 0 is a fair coin; items 1 and 2 are deterministic. The
// values are the weights (1, 2, 7) of the elements {x, y, z} covered:
// item 0 covers {x, y} or {x}, item 1 covers everything, item 2 covers {x}.
Instance worked_example_instance() {
  ExplicitTable table;
  table.goal = 10.0;
  table.entries = {
      {{}, 0.0},
      {{{0, 0}}, 3.0},
      {{{0, 1}}, 1.0},
      {{{1, 0}}, 10.0},
      {{{2, 0}}, 1.0},
      {{{0, 0}, {1, 0}}, 10.0},
      {{{0, 1}, {1, 0}}, 10.0},
      {{{0, 0}, {2, 0}}, 3.0},
      {{{0, 1}, {2, 0}}, 1.0},
      {{{1, 0}, {2, 0}}, 10.0},
      {{{0, 0}, {1, 0}, {2, 0}}, 10.0},
      {{{0, 1}, {1, 0}, {2, 0}}, 10.0},
  };
  return Instance({1.0, 1.0, 1.0}, {{0.5, 0.5}, {1.0, 0.0}, {1.0, 0.0}},
                  UtilityModel(std::move(table)), true);
}

Policy worked_example_policy(const Instance& inst) {
  const std::size_t n = inst.item_count();
  return table_policy("worked-example", {{rel({}, n), 0},
                                         {rel({{0, 0}}, n), 1},
                                         {rel({{0, 1}}, n), 2},
                                         {rel({{0, 1}, {2, 0}}, n), 1}});
}

Json reproduce_worked_example() {
  const Instance inst = worked_example_instance();
  const std::size_t n = inst.item_count();
  const PolicyTree tree = materialize_tree(inst, worked_example_policy(inst));
  Pins pins;

  // psi_1..psi_6 in the order the example names them; breadth-first
  // discovery visits psi_5 before psi_4.
  const std::vector<Subrealization> named = {
      rel({}, n),
      rel({{0, 0}}, n),
      rel({{0, 1}}, n),
      rel({{0, 1}, {2, 0}}, n),
      rel({{0, 0}, {1, 0}}, n),
      rel({{0, 1}, {1, 0}, {2, 0}}, n),
  };
  std::map<std::size_t, std::string> name_of;
  for (std::size_t i = 0; i < named.size(); ++i) {
    const auto id = tree.find(named[i]);
    if (!id) {
      pins.expect("node psi" + std::to_string(i + 1) + " present", false, true);
      continue;
    }
    name_of[*id] = "psi" + std::to_string(i + 1);
  }
  pins.expect("tree size", tree.size(), std::size_t{6});
  pins.raise_if_any("worked example");

  Json utilities;
  for (std::size_t i = 0; i < 4; ++i) {
    utilities["psi" + std::to_string(i + 1)] = tree.node(*tree.find(named[i])).utility;
  }
  pins.expect("f(psi1..psi4)",
              std::vector<double>{utilities["psi1"], utilities["psi2"], utilities["psi3"],
                                  utilities["psi4"]},
              std::vector<double>{0, 3, 1, 1});
  pins.expect("|N(pi)|", tree.internal_nodes().size(), std::size_t{4});
  const double q = goal_value(inst);
  pins.expect_near("Q", q, 10.0);

  const MarkerSequence ms = build_markers(inst, tree);
  std::vector<std::string> marker_names;
  for (std::size_t id : ms.nodes) marker_names.push_back(name_of[id]);
  const std::vector<double> positions(ms.positions.begin(), ms.positions.end() - 1);
  double gap_sum = 0.0;
  for (double g : ms.gaps) gap_sum += g;
  pins.expect("marker nodes", marker_names,
              std::vector<std::string>{"psi1", "psi3", "psi4", "psi2"});
  pins.expect("marker positions", positions, std::vector<double>{0, 1, 1, 3});
  pins.expect("extra marker", ms.positions.back(), 10.0);
  pins.expect("gaps", ms.gaps, std::vector<double>{1, 0, 2, 7});
  pins.expect_near("sum of gaps", gap_sum, 10.0);

  // Termination at psi5 (item 0 in state 0) and at psi6 (item 0 in state 1).
  Json runs;
  const std::vector<std::pair<std::string, Realization>> endings = {
      {"psi5", Realization{{0, 0, 0}}}, {"psi6", Realization{{1, 0, 0}}}};
  std::map<std::string, std::map<std::string, std::vector<std::size_t>>> patterns;
  for (const auto& [leaf, phi] : endings) {
    const auto path = tree.path(phi);
    const ExecutionTrace trace = execute(inst, tree, phi);
    std::vector<std::string> visited;
    for (std::size_t id : path) visited.push_back(name_of[id]);
    std::vector<double> increments;
    for (std::size_t j = 1; j < trace.utilities.size(); ++j) {
      increments.push_back(trace.utilities[j] - trace.utilities[j - 1]);
    }
    Json pattern = Json::object();
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const std::string who = name_of[path[leadsto(trace, ms, i)]];
      patterns[leaf][who].push_back(i + 1);
    }
    for (const auto& [who, markers] : patterns[leaf]) pattern[who] = markers;
    runs[leaf] = {{"visited", visited}, {"increments", increments}, {"leadsto", pattern}};
    pins.expect("cover " + leaf, visited.back(), leaf);
  }
  using Pattern = std::map<std::string, std::vector<std::size_t>>;
  pins.expect("leadsto at psi5", patterns["psi5"], Pattern{{"psi1", {1, 2, 3}}, {"psi2", {4}}});
  pins.expect("leadsto at psi6", patterns["psi6"], Pattern{{"psi1", {1}}, {"psi4", {2, 3, 4}}});
  pins.expect("visited to psi5", runs["psi5"]["visited"].get<std::vector<std::string>>(),
              std::vector<std::string>{"psi1", "psi2", "psi5"});
  pins.expect("visited to psi6", runs["psi6"]["visited"].get<std::vector<std::string>>(),
              std::vector<std::string>{"psi1", "psi3", "psi4", "psi6"});
  pins.expect("increments to psi5", runs["psi5"]["increments"].get<std::vector<double>>(),
              std::vector<double>{3, 7});

  const SumBoundReport bound = verify_sum_bound(ms, q, 1.0, true);
  pins.raise_if_any("worked example");

  return {{"example", "worked"},
          {"Q", q},
          {"node_utilities", utilities},
          {"internal_nodes", tree.internal_nodes().size()},
          {"markers", marker_names},
          {"marker_positions", positions},
          {"extra_marker", ms.positions.back()},
          {"gaps", ms.gaps},
          {"gap_sum", gap_sum},
          {"runs", runs},
          {"sum_bound",
           {{"sum", bound.sum},
            {"real_bound", bound.real_bound},
            {"harmonic_bound", *bound.harmonic_bound},
            {"holds", bound.holds}}},
          {"matches", true}};
}

// Sets over elements e1..e6 (stored 0-based): S1 = {1,2,3,6}, S2 = {3,4,6},
// S3 = {1,2,5}; unit costs, one certain state each.
Instance charging_example_instance() {
  StochasticCoverage model;
  model.weights.assign(6, 1.0);
  model.coversets = {{{0, 1, 2, 5}}, {{2, 3, 5}}, {{0, 1, 4}}};
  return Instance({1.0, 1.0, 1.0}, {{1.0}, {1.0}, {1.0}}, UtilityModel(std::move(model)), true);
}

Json reproduce_charging_example() {
  const Instance inst = charging_example_instance();
  const std::size_t n = inst.item_count();
  const std::size_t m = 6;
  const Realization phi{{0, 0, 0}};
  const auto& coversets = std::get<StochasticCoverage>(inst.utility().model()).coversets;
  Pins pins;

  // The greedy run as written: S1, S3, S2. The tie between S2 and S3 after
  // S1 is broken toward S3 here, so check each step is a minimum-price pick.
  const std::vector<ItemId> order = {0, 2, 1};
  Subrealization psi = inst.empty_subrealization();
  bool valid_greedy = true;
  Json steps = Json::array();
  std::vector<std::size_t> first_cover(m, n);  // item that first covers each element
  std::vector<std::uint32_t> covered_order;
  for (ItemId e : order) {
    const UnitPrice chosen = unit_price(inst, psi, e);
    UnitPrice best = chosen;
    for (ItemId other = 0; other < n; ++other) {
      if (!psi.contains(other)) best = std::min(best, unit_price(inst, psi, other));
    }
    valid_greedy = valid_greedy && chosen == best;
    std::vector<std::uint32_t> fresh;
    for (auto d : coversets[e][0]) {
      if (first_cover[d] == n) {
        first_cover[d] = e;
        fresh.push_back(d + 1);
      }
    }
    covered_order.insert(covered_order.end(), fresh.begin(), fresh.end());
    steps.push_back({{"set", "S" + std::to_string(e + 1)},
                     {"price", chosen.as_double()},
                     {"new_elements", fresh}});
    psi = psi.extend(e, phi[e]);
  }
  pins.expect("literal order is a greedy order", valid_greedy, true);
  pins.expect("covered order", covered_order, std::vector<std::uint32_t>{1, 2, 3, 6, 5, 4});

  const ItemId first = greedy_select(inst, inst.empty_subrealization(), Selector::exact());
  const double first_price =
      unit_price(inst, inst.empty_subrealization(), first).as_double();
  pins.expect("first greedy pick", first, ItemId{0});
  pins.expect_near("first greedy price", first_price, 0.25);

  const OptimalSolution opt = optimal_value(inst);
  const ExecutionTrace opt_trace = execute(inst, optimal_policy(opt), phi);
  std::vector<ItemId> opt_sets = opt_trace.selected;
  std::sort(opt_sets.begin(), opt_sets.end());
  pins.expect_near("optimal cost", opt.value, 2.0);
  pins.expect("optimal sets", opt_sets, std::vector<ItemId>{1, 2});

  // Charging identity at j = 1: M_last holds the m - j + 1 elements still
  // uncovered before greedy covers its j-th element.
  const std::size_t j = 1;
  std::vector<std::uint32_t> m_last(covered_order.begin() + (j - 1), covered_order.end());
  const std::vector<ItemId> upsilon = {1, 2};
  Json cov;
  double rhs = 0.0;
  for (ItemId s : upsilon) {
    std::size_t count = 0;
    for (auto d : m_last) count += first_cover[d - 1] == s ? 1 : 0;
    cov["S" + std::to_string(s + 1)] = count;
    rhs += static_cast<double>(count);
  }
  // Every set is in psi, so the optcov sum over the unselected sets is empty.
  std::vector<std::string> unselected;
  for (ItemId s = 0; s < n; ++s) {
    if (!psi.contains(s)) unselected.push_back("S" + std::to_string(s + 1));
  }
  const double lhs = static_cast<double>(m - j + 1);
  pins.expect("|M_last|", m_last.size(), std::size_t{6});
  pins.expect("cov(S2)", cov["S2"].get<std::size_t>(), std::size_t{1});
  pins.expect("cov(S3)", cov["S3"].get<std::size_t>(), std::size_t{1});
  pins.expect("unselected sets", unselected.empty(), true);
  pins.expect_near("LHS", lhs, 6.0);
  pins.expect_near("RHS", rhs, 2.0);
  pins.raise_if_any("charging example");

  return {{"example", "charging"},
          {"sets", {{"S1", {1, 2, 3, 6}}, {"S2", {3, 4, 6}}, {"S3", {1, 2, 5}}}},
          {"greedy_steps", steps},
          {"literal_order_is_greedy", valid_greedy},
          {"covered_order", covered_order},
          {"first_greedy_pick", "S" + std::to_string(first + 1)},
          {"first_greedy_price", first_price},
          {"optimal_cost", opt.value},
          {"optimal_sets", {"S2", "S3"}},
          {"j", j},
          {"M_last", m_last},
          {"upsilon", {"S2", "S3"}},
          {"cov", cov},
          {"unselected_sets", unselected},
          {"identity", "m - j + 1 = sum cov(S in upsilon) + sum optcov(S not selected)"},
          {"lhs", lhs},
          {"rhs", rhs},
          {"identity_holds", lhs == rhs},
          {"shortfall", lhs - rhs},
          {"matches", true}};
}

}  // namespace ssc
