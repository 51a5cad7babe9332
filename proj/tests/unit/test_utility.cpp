#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ssc/error.hpp"
#include "ssc/harness.hpp"
#include "ssc/utility.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace ssc;
using fixture::rel;

namespace {

std::size_t count_kind(const Violations& v, ViolationKind kind) {
  return static_cast<std::size_t>(
      std::count_if(v.begin(), v.end(), [kind](const Violation& x) { return x.kind == kind; }));
}

// Two deterministic items whose joint value exceeds the sum of their parts.
Instance supermodular_table() {
  return fixture::table({1.0, 1.0}, {{1.0}, {1.0}},
                        {{{}, 0.0}, {{{0, 0}}, 1.0}, {{{1, 0}}, 1.0}, {{{0, 0}, {1, 0}}, 3.0}},
                        3.0);
}

// Element 5 is only covered by a state that never occurs.
Instance unreachable_element() {
  return fixture::coverage({1.0, 1.0}, {{1.0, 0.0}, {0.5, 0.5}}, std::vector<double>(6, 1.0),
                           {{{0, 1, 2}, {5}}, {{3, 4}, {3, 4}}});
}

}  // namespace

TEST_CASE("evaluate") {
  const auto cov = fixture::coverage({1.0}, {{1.0, 0.0}}, {1.0, 1.0, 1.0}, {{{0, 1}, {2}}});
  CHECK(cov.f(rel(1, {{0, 0}})) == 2.0);
  CHECK(cov.f(cov.empty_subrealization()) == 0.0);

  const auto add = fixture::additive({1.0, 1.0}, {{0.5, 0.5}, {0.5, 0.5}}, {{3, 1}, {2, 9}}, 10);
  CHECK(add.f(rel(2, {{0, 0}, {1, 1}})) == 10.0);
  CHECK(add.f(rel(2, {{0, 1}, {1, 0}})) == 3.0);

  const auto wx = worked_example_instance();
  const double utilities[] = {wx.f(rel(3, {})), wx.f(rel(3, {{0, 0}})), wx.f(rel(3, {{0, 1}})),
                              wx.f(rel(3, {{0, 1}, {2, 0}}))};
  CHECK(utilities[0] == 0.0);
  CHECK(utilities[1] == 3.0);
  CHECK(utilities[2] == 1.0);
  CHECK(utilities[3] == 1.0);
}

TEST_CASE("table lookups outside the listed relations fail") {
  const auto t = fixture::table({1.0, 1.0}, {{1.0}, {1.0}}, {{{}, 0.0}, {{{0, 0}}, 1.0}}, 1.0);
  try {
    (void)t.f(rel(2, {{1, 0}}));
    FAIL("expected TableMiss");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTableMiss);
  }
}

TEST_CASE("marginal") {
  const auto cov = fixture::coverage({1.0, 1.0}, {{1.0}, {1.0}}, {1.0, 1.0}, {{{0, 1}}, {{1}}});
  CHECK(cov.utility().marginal(rel(2, {{0, 0}}), 1, 0) == 0.0);

  const auto add = fixture::additive({1.0, 1.0}, {{1.0}, {1.0}}, {{8}, {5}}, 10);
  CHECK(add.utility().marginal(rel(2, {{0, 0}}), 1, 0) == 2.0);

  const auto b = charging_example_instance();
  CHECK(b.utility().marginal(rel(3, {{0, 0}}), 1, 0) == 1.0);
}

TEST_CASE("expected marginal") {
  const auto certain = fixture::additive({1.0}, {{1.0}}, {{4}}, 4);
  CHECK(expected_marginal(certain, certain.empty_subrealization(), 0) == 4.0);

  const auto coin = fixture::additive({1.0}, {{0.5, 0.5}}, {{2, 0}}, 2);
  CHECK(expected_marginal(coin, coin.empty_subrealization(), 0) == 1.0);

  try {
    (void)expected_marginal(coin, rel(1, {{0, 0}}), 0);
    FAIL("expected ItemAlreadyAssigned");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kItemAlreadyAssigned);
  }

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg;
    cfg.kind = seed % 2 ? Family::kCoverage : Family::kTruncatedAdditive;
    cfg.n = 4;
    cfg.k = 2;
    cfg.integer_valued = seed % 3 != 0;
    cfg.seed = seed;
    const auto inst = gen_instance(cfg);
    const auto table = tabulate(inst);
    for (std::size_t code = 0; code < table.index.size(); ++code) {
      const auto psi = table.index.decode(code);
      for (ItemId e = 0; e < inst.item_count(); ++e) {
        if (psi.contains(e)) continue;
        CHECK(std::abs(expected_marginal(inst, psi, e) - oracle::expected_marginal(inst, psi, e)) <=
              1e-12);
      }
    }
  }
}

TEST_CASE("goal value") {
  CHECK(goal_value(fixture::additive({1.0}, {{1.0}}, {{10}}, 10)) == 10.0);
  CHECK(goal_value(charging_example_instance()) == 6.0);
  CHECK(goal_value(worked_example_instance()) == 10.0);

  const auto short_of_goal = fixture::additive({1.0}, {{0.5, 0.5}}, {{10, 4}}, 10);
  try {
    (void)goal_value(short_of_goal);
    FAIL("expected NotCoverable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotCoverable);
  }
}

TEST_CASE("eta") {
  SUBCASE("integer coverage attains Q - 1") {
    const auto inst =
        fixture::coverage({1.0, 1.0}, {{1.0}, {1.0}}, {1.0, 1.0, 1.0}, {{{0, 1}}, {{2}}});
    const auto g = compute_eta(inst);
    CHECK(g.eta == 1.0);
    CHECK(g.eta_is_exact);
  }
  SUBCASE("real gains") {
    const auto inst =
        fixture::additive({1, 1, 1}, {{1.0}, {1.0}, {1.0}}, {{3}, {7}, {9.5}}, 10, false);
    CHECK(compute_eta(inst).eta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(oracle::eta(inst) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("all or nothing") {
    const auto inst = fixture::additive({1.0}, {{1.0}}, {{5}}, 5);
    CHECK(compute_eta(inst).eta == 5.0);
  }
  SUBCASE("matches the recursive oracle on generated instances") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      GeneratorConfig cfg;
      cfg.kind = static_cast<Family>(seed % 3);
      cfg.n = 3 + seed % 2;
      cfg.k = cfg.kind == Family::kClassicalSetCover ? 1 : 2;
      cfg.integer_valued = seed % 2 == 0 || cfg.kind == Family::kClassicalSetCover;
      cfg.seed = seed;
      const auto inst = gen_instance(cfg);
      CHECK(compute_eta(inst).eta == doctest::Approx(oracle::eta(inst)).epsilon(1e-12));
    }
  }
  SUBCASE("falls back to the declared value beyond the budget") {
    const auto inst = fixture::additive({1, 1, 1}, {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}},
                                        {{1, 2}, {1, 2}, {1, 2}}, 3);
    const auto g = compute_eta(inst, 4);
    CHECK_FALSE(g.eta_is_exact);
    CHECK(g.eta == 1.0);
  }
}

TEST_CASE("polymatroid validation") {
  CHECK(validate_polymatroid(charging_example_instance()).empty());
  CHECK(validate_polymatroid(unreachable_element()).empty());
  CHECK(validate_polymatroid(fixture::additive({1, 1}, {{0.5, 0.5}, {0.2, 0.8}},
                                               {{0, 4}, {2.5, 1}}, 5, false))
            .empty());
  CHECK(validate_polymatroid(worked_example_instance()).empty());

  const auto v = validate_polymatroid(supermodular_table());
  REQUIRE(v.size() == 1);
  CHECK(v[0].kind == ViolationKind::kSubmodularity);
}

TEST_CASE("coverability validation") {
  CHECK(validate_coverability(charging_example_instance()).empty());

  const auto d5 = validate_coverability(unreachable_element());
  REQUIRE(d5.size() == 1);
  CHECK(d5[0].kind == ViolationKind::kCoverability);

  const auto worst = validate_coverability(
      fixture::additive({1, 1}, {{0.5, 0.5}, {1.0, 0.0}}, {{1, 3}, {2, 2}}, 4));
  REQUIRE(worst.size() == 1);
  CHECK(worst[0].kind == ViolationKind::kCoverability);

  SUBCASE("the non-enumerable certificate agrees on the same fixtures") {
    CHECK(count_kind(validate_coverability(
                         fixture::additive({1, 1}, {{0.5, 0.5}, {1.0, 0.0}}, {{1, 3}, {2, 2}}, 4),
                         1),
                     ViolationKind::kCoverability) == 1);
    CHECK(count_kind(validate_coverability(unreachable_element(), 1),
                     ViolationKind::kUnverified) == 1);
  }
}

TEST_CASE("generated instances pass every validator") {
  CorpusConfig cc;
  cc.count = 30;
  cc.seed = 11;
  for (const auto& entry : generate_corpus(cc)) {
    CHECK(validate_instance(entry.instance).empty());
    CHECK(validate_polymatroid(entry.instance).empty());
    CHECK(validate_coverability(entry.instance).empty());
    CHECK(validate_sufficiency(entry.instance, 64, 3).empty());
  }
}

TEST_CASE("lattice index round trip") {
  const auto inst = fixture::additive({1, 1, 1}, {{0.5, 0.5, 0.0}, {1.0, 0.0, 0.0}, {0.2, 0.3, 0.5}},
                                      {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}, 3);
  const LatticeIndex index(inst, 1000);
  CHECK(index.size() == 3 * 2 * 4);
  for (std::size_t code = 0; code < index.size(); ++code) {
    CHECK(index.encode(index.decode(code)) == code);
  }
  try {
    (void)index.encode(rel(3, {{1, 2}}));
    FAIL("expected DomainError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomainError);
  }
}
