// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ssc/error.hpp"
#include "ssc/harness.hpp"
#include "support/builders.hpp"
#include "support/oracles.hpp"

using namespace ssc;

namespace {

constexpr double kTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail << "first failure: " << why << "; ";
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::size_t failures = 0;

void run(const std::string& name, const std::function<void(Outcome&)>& body) {
  Outcome out;
  try {
    body(out);
  } catch (const std::exception& ex) {
    out.pass = false;
    out.detail << "exception: " << ex.what();
  }
  std::printf("%s  %-22s %s\n", out.pass ? "PASS" : "FAIL", name.c_str(),
              out.detail.str().c_str());
  std::fflush(stdout);
  failures += out.pass ? 0 : 1;
}

bool near(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(1.0, std::abs(b));
}

struct Row {
  const CorpusEntry* entry;
  double alpha;
  VerificationReport report;
};

}  // namespace

int main() {
  const auto corpus = generate_corpus(CorpusConfig{});  // 200 instances, n<=5, k<=3

  // Shared verification runs over the corpus at alpha 1 and 2.
  std::vector<Row> rows;
  double alpha1_seconds = 0.0;
  for (double alpha : {1.0, 2.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& entry : corpus) {
      VerifyOptions opt;
      opt.selector = alpha == 1.0 ? Selector::exact() : Selector::adversarial(alpha);
      opt.tolerance = kTol;
      rows.push_back({&entry, alpha, verify_lemmas(entry.instance, opt)});
    }
    if (alpha == 1.0) alpha1_seconds = seconds_since(t0);
  }

  const auto claim_totals = [&](Claim c, double alpha_filter) {
    ClaimSummary t;
    bool first = true;
    for (const auto& r : rows) {
      if (alpha_filter > 0 && r.alpha != alpha_filter) continue;
      const auto* s = r.report.summary(c);
      if (!s) continue;
      t.instantiated += s->instantiated;
      t.passed += s->passed;
      t.failed += s->failed;
      t.skipped += s->skipped;
      if (s->instantiated > 0 && (first || s->worst_slack < t.worst_slack)) {
        t.worst_slack = s->worst_slack;
        first = false;
      }
    }
    return t;
  };

  run("lemma1_equality", [&](Outcome& o) {
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.alpha != 1.0) continue;
      const auto& inst = r.entry->instance;
      const auto* s = r.report.summary(Claim::kL1);
      o.require(s && s->instantiated == 1 && s->failed == 0, "L1 check failed");
      // The cost side recomputed without the tree.
      const double brute = oracle::expected_cost(inst, greedy_policy(inst, Selector::exact()));
      o.require(near(r.report.greedy_cost, brute, kTol), "greedy cost disagrees with oracle");
      ++n;
    }
    const auto t = claim_totals(Claim::kL1, 1.0);
    o.require(alpha1_seconds < 10.0, "alpha = 1 corpus took longer than 10 s");
    o.detail << n << " instances, worst slack " << t.worst_slack << ", corpus verification "
             << alpha1_seconds << " s";
  });

  run("lemma2_equality", [&](Outcome& o) {
    std::size_t n = 0;
    for (const auto& r : rows) {
      if (r.alpha != 1.0) continue;
      const auto& inst = r.entry->instance;
      const auto* s = r.report.summary(Claim::kL2);
      o.require(s && s->instantiated == 1 && s->failed == 0, "L2 check failed");
      const double brute = oracle::expected_cost(inst, optimal_policy(inst));
      o.require(near(r.report.optimal_cost, brute, kTol), "optimal cost disagrees with oracle");
      ++n;
    }
    o.detail << n << " instances, worst slack " << claim_totals(Claim::kL2, 1.0).worst_slack;
  });

  run("lemmas3to5", [&](Outcome& o) {
    for (double alpha : {1.0, 2.0}) {
      for (Claim c : {Claim::kL3, Claim::kL4, Claim::kL5}) {
        const auto t = claim_totals(c, alpha);
        o.require(t.failed == 0, to_string(c) + " failed");
        o.require(t.instantiated > 0, to_string(c) + " never instantiated");
        o.require(t.worst_slack >= -kTol, to_string(c) + " slack below -1e-9");
        o.detail << to_string(c) << "@" << alpha << ": " << t.instantiated << " checks, "
                 << t.skipped << " skipped, worst " << t.worst_slack << "; ";
      }
    }
  });

  run("theorem1", [&](Outcome& o) {
    double worst = 0.0;
    for (const auto& r : rows) {
      const auto& inst = r.entry->instance;
      const auto& v = r.report;
      o.require(v.gap.eta_is_exact, "eta not exact");
      const double eta = oracle::eta(inst);
      o.require(near(v.gap.eta, eta, 1e-12), "eta disagrees with oracle");
      const double expected_kappa =
          inst.integer_valued() ? oracle::harmonic(std::lround(inst.goal()))
                                : std::log(inst.goal() / eta) + 1.0;
      o.require(near(v.kappa, expected_kappa, 1e-12), "kappa disagrees with oracle");
      o.require(v.greedy_cost <= r.alpha * v.kappa * v.optimal_cost + kTol, "bound violated");
      const auto* s = v.summary(Claim::kT1);
      o.require(s && s->failed == 0, "T1 check failed");
      worst = std::max(worst, v.ratio / (r.alpha * v.kappa));
    }
    o.detail << rows.size() << " runs, max ratio / (alpha kappa) = " << worst;
  });

  run("figure_reproduction", [&](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Json r = reproduce_worked_example();
    const double secs = seconds_since(t0);
    o.require(r["marker_positions"] == Json({0.0, 1.0, 1.0, 3.0}), "positions");
    o.require(r["gaps"] == Json({1.0, 0.0, 2.0, 7.0}), "gaps");
    o.require(r["gap_sum"] == 10.0 && r["Q"] == 10.0, "gap sum");
    o.require(r["runs"]["psi5"]["leadsto"] == Json::parse(R"({"psi1":[1,2,3],"psi2":[4]})"),
              "pattern at psi5");
    o.require(r["runs"]["psi6"]["leadsto"] == Json::parse(R"({"psi1":[1],"psi4":[2,3,4]})"),
              "pattern at psi6");
    o.require(secs < 1.0, "slower than 1 s");
    o.detail << "positions (0,1,1,3), gaps (1,0,2,7), " << secs * 1e3 << " ms";
  });

  run("charging_reproduction", [&](Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const Json r = reproduce_charging_example();
    const double secs = seconds_since(t0);
    o.require(r["lhs"] == 6.0, "LHS");
    o.require(r["rhs"] == 2.0, "RHS");
    o.require(r["cov"]["S2"] == 1 && r["cov"]["S3"] == 1, "cov");
    o.require(secs < 1.0, "slower than 1 s");
    o.detail << "LHS 6, RHS 2, cov(S2) = cov(S3) = 1, " << secs * 1e3 << " ms";
  });

  run("dp_vs_tree_enumeration", [&](Outcome& o) {
    std::size_t n = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
      GeneratorConfig cfg;
      cfg.kind = seed % 2 ? Family::kCoverage : Family::kTruncatedAdditive;
      cfg.n = 1 + (seed / 2) % 2;
      cfg.k = 2;
      cfg.m = 1 + seed % 4;
      cfg.integer_valued = (seed / 4) % 2 == 0;
      cfg.seed = seed;
      const auto inst = gen_instance(cfg);
      const double dp = optimal_value(inst).value;
      const double brute = oracle::best_tree_cost(inst);
      worst = std::max(worst, std::abs(dp - brute) / std::max(1.0, brute));
      o.require(near(dp, brute, 1e-12), "DP and enumeration differ");
      ++n;
    }
    o.detail << n << " instances, worst relative gap " << worst;
  });

  run("classical_reduction", [&](Outcome& o) {
    CorpusConfig cc;
    cc.count = 50;
    cc.seed = 1000;
    cc.families = {Family::kClassicalSetCover};
    cc.n_max = 6;
    cc.m_max = 10;
    double worst = 0.0;
    for (const auto& entry : generate_corpus(cc)) {
      const auto& inst = entry.instance;
      const double m = static_cast<double>(entry.config.m);
      o.require(inst.state_count() == 1 && entry.config.m <= 10, "shape");
      const auto policy = greedy_policy(inst, Selector::exact());
      const auto trace = execute(inst, policy, Realization{std::vector<StateId>(inst.item_count(), 0)});
      const double best = oracle::min_cover_cost(inst);
      o.require(trace.cost <= (std::log(m) + 1.0) * best + kTol, "ln m + 1 bound");
      o.require(trace.selected == oracle::density_greedy(inst), "choices differ from density greedy");
      worst = std::max(worst, trace.cost / best / (std::log(m) + 1.0));
    }
    o.detail << "50 instances, max cost / ((ln m + 1) OPT) = " << worst;
  });

  run("monte_carlo", [&](Outcome& o) {
    std::size_t used = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < corpus.size() && used < 20; i += 10) {
      const auto& inst = corpus[i].instance;
      const auto tree = materialize_tree(inst, greedy_policy(inst, Selector::exact()));
      const double exact = expected_cost_exact(inst, tree);
      const auto est = expected_cost_mc(inst, tree, 100000, 1000 + i);
      const double dev = std::abs(est.mean - exact);
      if (est.standard_error > 0.0) {
        worst = std::max(worst, dev / est.standard_error);
        o.require(dev <= 3.0 * est.standard_error, "outside three standard errors");
      } else {
        o.require(near(est.mean, exact, 1e-12), "zero-variance mean differs");
      }
      ++used;
    }
    o.require(used == 20, "fewer than 20 instances");
    o.detail << used << " instances, 1e5 trials each, max |dev| / stderr = " << worst;
  });

  run("validator_suite", [&](Outcome& o) {
    for (const auto& entry : corpus) {
      const auto& inst = entry.instance;
      o.require(validate_instance(inst).empty(), "instance check");
      o.require(validate_polymatroid(inst).empty(), "polymatroid check");
      o.require(validate_sufficiency(inst, 256, 1).empty(), "sufficiency check");
      o.require(validate_coverability(inst).empty(), "coverability check");
    }
    const auto all = [](const Instance& inst) {
      Violations v = validate_instance(inst);
      for (auto part : {validate_polymatroid(inst), validate_sufficiency(inst, 256, 1),
                        validate_coverability(inst)}) {
        v.insert(v.end(), part.begin(), part.end());
      }
      return v;
    };
    const auto exactly = [&](const Instance& inst, ViolationKind kind, const char* name) {
      const auto v = all(inst);
      o.require(v.size() == 1 && v[0].kind == kind, std::string(name) + " fixture");
    };
    exactly(fixture::additive({1.0, 0.0}, {{1.0}, {1.0}}, {{1}, {1}}, 2),
            ViolationKind::kNonPositiveCost, "zero-cost");
    exactly(fixture::table({1, 1}, {{1.0}, {1.0}},
                           {{{}, 0.0}, {{{0, 0}}, 1.0}, {{{1, 0}}, 1.0}, {{{0, 0}, {1, 0}}, 3.0}},
                           3.0),
            ViolationKind::kSubmodularity, "supermodular");
    exactly(fixture::coverage({1, 1}, {{1.0, 0.0}, {0.5, 0.5}}, std::vector<double>(6, 1.0),
                              {{{0, 1, 2}, {5}}, {{3, 4}, {3, 4}}}),
            ViolationKind::kCoverability, "unreachable element");
    o.detail << corpus.size() << " generated instances clean, 3 fixtures each flag one violation";
  });

  std::printf("%zu of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
