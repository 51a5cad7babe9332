#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ssc/greedy.hpp"
#include "ssc/instance.hpp"
#include "ssc/optimal.hpp"
#include "ssc/policy.hpp"
#include "ssc/utility.hpp"

namespace ssc {

// Markers are indexed from 0 here: marker i of the text is index i-1.

enum class MarkerTieBreak { kBfsOrder, kReverseBfsOrder };

struct MarkerSequence {
  std::vector<std::size_t> nodes;  // tree node ids of rho_0 .. rho_{t-1}
  std::vector<double> positions;   // f(rho_i); t+1 entries, the last is Q
  std::vector<double> gaps;        // epsilon_i = positions[i+1] - positions[i]

  std::size_t size() const { return nodes.size(); }
};

MarkerSequence build_markers(const Instance& inst, const PolicyTree& greedy_tree,
                             MarkerTieBreak tie = MarkerTieBreak::kBfsOrder);

/// Index j into trace.visited of the last visited subrealization whose
/// utility is at most f(rho_i).
std::size_t leadsto(const ExecutionTrace& trace, const MarkerSequence& ms, std::size_t i);

/// upsilon_psi for psi = trace.visited[j], the price of the item selected there.
double visited_price(const Instance& inst, const ExecutionTrace& trace, std::size_t j);

std::vector<double> lambda_revenues(const Instance& inst, const ExecutionTrace& trace,
                                    const MarkerSequence& ms);

/// mu(e) for every item from the greedy and optimal traces on the same
/// realization.
std::vector<double> mu_revenues(const Instance& inst, const ExecutionTrace& greedy_trace,
                                const ExecutionTrace& optimal_trace);

struct HybridTrace {
  std::vector<ItemId> stage1;  // greedy selections before the switch
  bool switched = false;       // greedy visited the switch node
  std::vector<ItemId> stage2;  // items selected (and paid for) in stage 2
  std::vector<double> delta_plus;  // per item; zero outside stage 2
  Subrealization observed;         // final global subrealization
  double cost = 0.0;

  std::vector<ItemId> selected() const;
};

/// Executes pi^psi on phi, where psi is the greedy tree node `switch_node`.
/// Stage 2 runs pi* from the empty subrealization on a logical state of its
/// own, taking already observed items for free, until that logical state is
/// a cover.
HybridTrace execute_hybrid(const Instance& inst, const PolicyTree& greedy_tree,
                           const OptimalSolution& optimal, std::size_t switch_node,
                           const Realization& phi);

/// pi^psi as a covering policy. It stops as soon as the observed
/// subrealization is a cover, so on rare branches its selections are a
/// prefix of execute_hybrid's.
Policy hybrid_policy(const Instance& inst, const PolicyTree& greedy_tree,
                     const OptimalSolution& optimal, std::size_t switch_node);

/// delta+_psi(e) from a hybrid trace; zero when e was not selected in stage 2.
double delta_plus(const HybridTrace& trace, ItemId e);

/// min over positive-beta indices of alpha_i/beta_i <= sum(alpha)/sum(beta).
/// Throws DomainError on negative entries, mismatched lengths or sum(beta) = 0.
bool verify_fact_mediant(const std::vector<double>& alphas, const std::vector<double>& betas);

/// ln(Q/eta) + 1, or H(Q) when integer valued (Q must then be integral).
double kappa(double goal, double eta, bool integer_valued);

struct SumBoundReport {
  double sum = 0.0;               // sum_i eps_i / (Q - f(rho_i))
  double real_bound = 0.0;        // 1 + ln(Q/eta)
  std::optional<double> harmonic_bound;  // H(Q) when integer valued
  bool holds = false;
};

SumBoundReport verify_sum_bound(const MarkerSequence& ms, double goal, double eta,
                                bool integer_valued);

// ---------------------------------------------------------------------------
// Exhaustive verification

enum class Claim {
  kL1,
  kL2,
  kL3,
  kL4,
  kL4Strong,  // informational: denominator Q - f(psi)
  kL5,
  kL6,
  kT1,
  kRevenueSplit,
  kHybridAgreement,
  kDeltaGap,
  kGreedyChoice,
  kMarkers,
  kSumBound,
};

std::string to_string(Claim c);
/// Parses "all" or a comma list of L1..L6,T1.
std::set<Claim> parse_lemmas(const std::string& spec);
bool is_informational(Claim c);

struct Check {
  Claim claim = Claim::kL1;
  std::string label;
  bool equality = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool passed = false;
};

struct ClaimSummary {
  Claim claim = Claim::kL1;
  std::size_t instantiated = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;  // zero-probability conditioning events
  double worst_slack = 0.0;
  std::string worst_label;
};

struct VerifyOptions {
  Selector selector = Selector::exact();
  double tolerance = 1e-9;
  std::size_t budget = kDefaultBudget;
  std::set<Claim> lemmas = parse_lemmas("all");
  bool keep_checks = false;
};

struct VerificationReport {
  double alpha = 1.0;
  double goal = 0.0;
  GoalGap gap;
  double kappa = 0.0;       // the bound used by T1
  double kappa_real = 0.0;  // ln(Q/eta) + 1 regardless of integrality
  double greedy_cost = 0.0;
  double optimal_cost = 0.0;
  double ratio = 0.0;
  std::size_t greedy_nodes = 0;
  std::size_t markers = 0;
  std::size_t realizations = 0;
  SumBoundReport sum_bound;
  std::vector<ClaimSummary> claims;
  std::vector<Check> failures;  // non-informational failures
  std::vector<Check> checks;    // every check when keep_checks is set

  bool ok() const { return failures.empty(); }
  const ClaimSummary* summary(Claim c) const;
};

VerificationReport verify_lemmas(const Instance& inst, const VerifyOptions& options = {});

}  // namespace ssc
