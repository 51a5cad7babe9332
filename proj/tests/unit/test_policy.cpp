#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssc/error.hpp"
#include "ssc/greedy.hpp"
#include "ssc/harness.hpp"
#include "ssc/policy.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace ssc;
using fixture::rel;

namespace {

Policy in_order(const Instance& inst) {
  const std::size_t n = inst.item_count();
  return Policy("in-order", [n](const Subrealization& psi) -> std::optional<ItemId> {
    for (ItemId e = 0; e < n; ++e) {
      if (!psi.contains(e)) return e;
    }
    return std::nullopt;
  });
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ssc::Error");
  return ErrorCode::kInternal;
}

}  // namespace

TEST_CASE("tree shapes") {
  SUBCASE("one item covering in both states") {
    const auto inst = fixture::additive({2.0}, {{0.5, 0.5}}, {{3, 3}}, 3);
    const auto tree = materialize_tree(inst, in_order(inst));
    CHECK(tree.size() == 3);
    CHECK(tree.internal_nodes() == std::vector<std::size_t>{0});
    CHECK(tree.leaves() == std::vector<std::size_t>{1, 2});
  }
  SUBCASE("deterministic items form a path") {
    const auto inst = fixture::additive({1, 1, 1}, {{1.0}, {1.0}, {1.0}}, {{1}, {1}, {1}}, 3);
    const auto tree = materialize_tree(inst, in_order(inst));
    CHECK(tree.size() == 4);
    for (const auto& node : tree.nodes()) CHECK(node.children.size() <= 1);
    CHECK(tree.node(3).depth == 3);
    CHECK(tree.node(3).path_cost == 3.0);
  }
  SUBCASE("worked example") {
    const auto inst = worked_example_instance();
    const auto tree = materialize_tree(inst, worked_example_policy(inst));
    const auto internal = tree.internal_nodes();
    REQUIRE(internal.size() == 4);
    CHECK(tree.node(internal[0]).psi == rel(3, {}));
    CHECK(tree.node(internal[1]).psi == rel(3, {{0, 0}}));
    CHECK(tree.node(internal[2]).psi == rel(3, {{0, 1}}));
    CHECK(tree.node(internal[3]).psi == rel(3, {{0, 1}, {2, 0}}));
    CHECK(tree.find(rel(3, {{0, 1}, {2, 0}})) == internal[3]);
    CHECK_FALSE(tree.find(rel(3, {{2, 0}})).has_value());
    double reach = 0.0;
    for (auto id : tree.leaves()) reach += tree.node(id).reach_probability;
    CHECK(reach == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("materialize errors") {
  const auto inst = worked_example_instance();
  CHECK(code_of([&] {
          (void)materialize_tree(inst, table_policy("partial", {{rel(3, {}), 0}}));
        }) == ErrorCode::kPolicyIncomplete);
  CHECK(code_of([&] {
          (void)materialize_tree(inst, table_policy("repeat", {{rel(3, {}), 0},
                                                              {rel(3, {{0, 0}}), 0},
                                                              {rel(3, {{0, 1}}), 0}}));
        }) == ErrorCode::kItemAlreadyAssigned);

  const auto short_goal = fixture::additive({1, 1}, {{1.0}, {1.0}}, {{1}, {1}}, 3);
  CHECK(code_of([&] { (void)materialize_tree(short_goal, in_order(short_goal)); }) ==
        ErrorCode::kNonCoveringPolicy);

  std::vector<std::vector<double>> probs(8, {0.5, 0.5});
  std::vector<std::vector<double>> gains(8, {1, 1});
  const auto wide = fixture::additive(std::vector<double>(8, 1.0), probs, gains, 8);
  CHECK(code_of([&] { (void)materialize_tree(wide, in_order(wide), 50); }) ==
        ErrorCode::kBudgetExceeded);
}

TEST_CASE("execution traces on the worked example") {
  const auto inst = worked_example_instance();
  const auto policy = worked_example_policy(inst);
  const auto tree = materialize_tree(inst, policy);

  const Realization to_psi5{{0, 0, 0}};
  for (const auto& trace : {execute(inst, policy, to_psi5), execute(inst, tree, to_psi5)}) {
    REQUIRE(trace.visited.size() == 3);
    CHECK(trace.visited[0] == rel(3, {}));
    CHECK(trace.visited[1] == rel(3, {{0, 0}}));
    CHECK(trace.utilities[1] - trace.utilities[0] == 3.0);
    CHECK(trace.utilities[2] - trace.utilities[1] == 7.0);
    CHECK(trace.cost == 2.0);
  }

  const Realization to_psi6{{1, 0, 0}};
  for (const auto& trace : {execute(inst, policy, to_psi6), execute(inst, tree, to_psi6)}) {
    REQUIRE(trace.visited.size() == 4);
    CHECK(trace.visited[1] == rel(3, {{0, 1}}));
    CHECK(trace.visited[2] == rel(3, {{0, 1}, {2, 0}}));
    CHECK(trace.selected == std::vector<ItemId>{0, 2, 1});
    CHECK(trace.cost == 3.0);
  }

  CHECK(code_of([&] { (void)tree.path(Realization{{0, 1, 0}}); }) == ErrorCode::kDomainError);
}

TEST_CASE("k = 1 trace") {
  const auto inst = fixture::additive({1.5, 2.5, 4}, {{1.0}, {1.0}, {1.0}}, {{1}, {1}, {1}}, 3);
  const auto trace = execute(inst, in_order(inst), Realization{{0, 0, 0}});
  CHECK(trace.selected == std::vector<ItemId>{0, 1, 2});
  CHECK(trace.cost == 8.0);
}

TEST_CASE("exact expected cost") {
  const auto single = fixture::additive({5.0}, {{0.5, 0.5}}, {{1, 1}}, 1);
  CHECK(expected_cost_exact(single, materialize_tree(single, in_order(single))) == 5.0);

  const auto branches = fixture::additive({2, 2}, {{0.5, 0.5}, {1.0, 0.0}}, {{2, 0}, {2, 2}}, 2);
  CHECK(expected_cost_exact(branches, materialize_tree(branches, in_order(branches))) == 3.0);

  SUBCASE("agrees with the enumeration oracle") {
    CorpusConfig cc;
    cc.count = 40;
    cc.seed = 21;
    for (const auto& entry : generate_corpus(cc)) {
      const auto& inst = entry.instance;
      for (const auto& policy :
           {greedy_policy(inst, Selector::exact()), in_order(inst), oracle::random_policy(inst, 9)}) {
        const double exact = expected_cost_exact(inst, materialize_tree(inst, policy));
        const double brute = oracle::expected_cost(inst, policy);
        CHECK(std::abs(exact - brute) <= 1e-9 * std::max(1.0, brute));
      }
    }
  }
}

TEST_CASE("Monte Carlo estimate") {
  SUBCASE("deterministic instance") {
    const auto inst = fixture::additive({1.25, 2}, {{1.0}, {1.0}}, {{1}, {1}}, 2);
    const auto est = expected_cost_mc(inst, in_order(inst), 1000, 4);
    CHECK(est.mean == 3.25);
    CHECK(est.standard_error == 0.0);
  }
  SUBCASE("single trial has no error estimate") {
    const auto inst = fixture::additive({1.0}, {{1.0}}, {{1}}, 1);
    CHECK(std::isnan(expected_cost_mc(inst, in_order(inst), 1, 0).standard_error));
  }
  SUBCASE("within three standard errors of the exact value") {
    GeneratorConfig cfg;
    cfg.kind = Family::kCoverage;
    cfg.n = 4;
    cfg.k = 3;
    cfg.seed = 17;
    const auto inst = gen_instance(cfg);
    const auto policy = greedy_policy(inst, Selector::exact());
    const auto tree = materialize_tree(inst, policy);
    const double exact = expected_cost_exact(inst, tree);
    const auto est = expected_cost_mc(inst, tree, 100000, 99);
    CHECK(est.trials == 100000);
    CHECK(std::abs(est.mean - exact) <= 3.0 * est.standard_error);
  }
  SUBCASE("same seed, same bits; tree and rule agree") {
    GeneratorConfig cfg;
    cfg.kind = Family::kTruncatedAdditive;
    cfg.seed = 5;
    const auto inst = gen_instance(cfg);
    const auto policy = greedy_policy(inst, Selector::exact());
    const auto tree = materialize_tree(inst, policy);
    const auto a = expected_cost_mc(inst, policy, 5000, 12);
    const auto b = expected_cost_mc(inst, policy, 5000, 12);
    const auto c = expected_cost_mc(inst, tree, 5000, 12);
    CHECK(a.mean == b.mean);
    CHECK(a.standard_error == b.standard_error);
    CHECK(a.mean == c.mean);
  }
  SUBCASE("zero trials is a domain error") {
    const auto inst = fixture::additive({1.0}, {{1.0}}, {{1}}, 1);
    CHECK(code_of([&] { (void)expected_cost_mc(inst, in_order(inst), 0, 0); }) ==
          ErrorCode::kDomainError);
  }
}
