#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssc/error.hpp"
#include "ssc/greedy.hpp"
#include "ssc/harness.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace ssc;
using fixture::rel;

namespace {

// Deterministic items with fixed gains toward a large goal, so each price is
// cost / gain.
Instance priced(std::vector<double> costs, std::vector<double> gains) {
  std::vector<std::vector<double>> probs(costs.size(), {1.0});
  std::vector<std::vector<double>> g;
  double total = 0.0;
  for (double x : gains) {
    g.push_back({x});
    total += x;
  }
  return fixture::additive(std::move(costs), std::move(probs), std::move(g), total, false);
}

}  // namespace

TEST_CASE("unit price") {
  const auto two = priced({2.0}, {1.0});
  CHECK(unit_price(two, two.empty_subrealization(), 0) == UnitPrice::finite(2.0));

  const auto coin = fixture::additive({3.0, 1.0}, {{0.5, 0.5}, {1.0, 0.0}}, {{4, 0}, {4, 4}}, 4);
  CHECK(unit_price(coin, coin.empty_subrealization(), 0).value() ==
        doctest::Approx(3.0 / oracle::expected_marginal(coin, coin.empty_subrealization(), 0)));
  CHECK(unit_price(coin, coin.empty_subrealization(), 0).value() == 1.5);

  const auto useless = fixture::additive({1.0, 1.0}, {{1.0}, {1.0}}, {{0}, {2}}, 2);
  const auto inf = unit_price(useless, useless.empty_subrealization(), 0);
  CHECK(inf.is_infinite());
  CHECK(std::isinf(inf.as_double()));
  CHECK(UnitPrice::finite(1e300) < inf);
  CHECK_FALSE(inf < inf);
}

TEST_CASE("selection rules") {
  CHECK(greedy_select(priced({1, 2}, {1, 1}), Subrealization(2), Selector::exact()) == 0);
  CHECK(greedy_select(priced({2, 1}, {1, 1}), Subrealization(2), Selector::exact()) == 1);
  CHECK(greedy_select(priced({1, 1}, {1, 1}), Subrealization(2), Selector::exact()) == 0);

  const auto three = priced({1.0, 1.4, 2.0}, {1, 1, 1});
  CHECK(greedy_select(three, Subrealization(3), Selector::adversarial(1.5)) == 1);
  CHECK(greedy_select(three, Subrealization(3), Selector::adversarial(2.0)) == 2);
  CHECK(greedy_select(three, Subrealization(3), Selector::adversarial(1.0)) == 0);

  // Equal worst prices resolve to the lower index.
  CHECK(greedy_select(priced({1, 2, 2}, {1, 1, 1}), Subrealization(3),
                      Selector::adversarial(3.0)) == 1);

  try {
    (void)Selector::adversarial(0.5);
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomainError);
  }

  const auto stuck = fixture::additive({1.0, 1.0}, {{1.0}, {1.0}}, {{1}, {0}}, 2);
  try {
    (void)greedy_select(stuck, rel(2, {{0, 0}}), Selector::exact());
    FAIL("expected NoProgressPossible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoProgressPossible);
  }
}

TEST_CASE("deterministic embedding follows the classical greedy order") {
  const auto b = charging_example_instance();
  const auto root = b.empty_subrealization();
  CHECK(greedy_select(b, root, Selector::exact()) == 0);
  CHECK(unit_price(b, root, 0).value() == 0.25);

  CorpusConfig cc;
  cc.count = 40;
  cc.seed = 8;
  cc.families = {Family::kClassicalSetCover};
  cc.m_max = 10;
  for (const auto& entry : generate_corpus(cc)) {
    const auto& inst = entry.instance;
    const auto trace = execute(inst, greedy_policy(inst, Selector::exact()),
                               Realization{std::vector<StateId>(inst.item_count(), 0)});
    CHECK(trace.selected == oracle::density_greedy(inst));
  }
}

TEST_CASE("audit accepts every node of greedy trees") {
  CorpusConfig cc;
  cc.count = 30;
  cc.seed = 2;
  for (const auto& entry : generate_corpus(cc)) {
    const auto& inst = entry.instance;
    for (double alpha : {1.0, 2.0}) {
      const auto sel = alpha == 1.0 ? Selector::exact() : Selector::adversarial(alpha);
      const auto tree = materialize_tree(inst, greedy_policy(inst, sel));
      const auto audit = audit_greedy_choices(inst, tree, alpha);
      CHECK(audit.size() == tree.internal_nodes().size());
      for (const auto& a : audit) CHECK(a.ok);
    }
  }
}

TEST_CASE("audit flags a non-greedy choice") {
  const auto inst = priced({1, 3}, {1, 1});
  const auto tree = materialize_tree(
      inst, table_policy("pricey", {{rel(2, {}), 1}, {rel(2, {{1, 0}}), 0}}));
  const auto audit = audit_greedy_choices(inst, tree, 2.0);
  REQUIRE(audit.size() == 2);
  CHECK_FALSE(audit[0].ok);
  CHECK(audit[0].chosen_price == 3.0);
  CHECK(audit[0].min_price == 1.0);
  CHECK(audit[1].ok);
}

TEST_CASE("greedy policy names") {
  const auto inst = priced({1}, {1});
  CHECK(greedy_policy(inst, Selector::exact()).name() == "greedy");
  CHECK(greedy_policy(inst, Selector::adversarial(2)).name().find("adversarial") !=
        std::string::npos);
}
