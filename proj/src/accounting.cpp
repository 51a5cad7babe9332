#include "ssc/accounting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "ssc/error.hpp"

namespace ssc {
namespace {

constexpr double kTight = 1e-12;

double relative_slack(double scale) { return kTight * std::max(1.0, std::abs(scale)); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double price_at(const Instance& inst, const Subrealization& psi, ItemId e) {
  return unit_price(inst, psi, e).as_double();
}

ExecutionTrace trace_along(const Instance& inst, const PolicyTree& tree,
                           const std::vector<std::size_t>& path) {
  ExecutionTrace trace;
  for (std::size_t id : path) {
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

// Collects checks into per-claim summaries.
class Recorder {
 public:
  Recorder(double tolerance, bool keep) : tolerance_(tolerance), keep_(keep) {}

  void equality(Claim c, std::string label, double lhs, double rhs) {
    equality(c, std::move(label), lhs, rhs, tolerance_);
  }
  void equality(Claim c, std::string label, double lhs, double rhs, double tol) {
    const double dev = std::abs(lhs - rhs);
    add({c, std::move(label), true, lhs, rhs, -dev, dev <= tol * std::max(1.0, std::abs(lhs))});
  }

  void inequality(Claim c, std::string label, double lhs, double rhs) {
    inequality(c, std::move(label), lhs, rhs, tolerance_);
  }
  void inequality(Claim c, std::string label, double lhs, double rhs, double tol) {
    add({c, std::move(label), false, lhs, rhs, rhs - lhs, lhs <= rhs + tol});
  }

  void skip(Claim c, std::size_t count) { summary(c).skipped += count; }

  void finish(VerificationReport& report) {
    for (auto& [claim, s] : summaries_) report.claims.push_back(s);
    report.failures = std::move(failures_);
    report.checks = std::move(checks_);
  }

 private:
  ClaimSummary& summary(Claim c) {
    auto [it, inserted] = summaries_.try_emplace(c);
    if (inserted) it->second.claim = c;
    return it->second;
  }

  void add(Check check) {
    ClaimSummary& s = summary(check.claim);
    ++s.instantiated;
    if (check.passed) {
      ++s.passed;
    } else {
      ++s.failed;
    }
    if (s.instantiated == 1 || check.slack < s.worst_slack) {
      s.worst_slack = check.slack;
      s.worst_label = check.label;
    }
    if (!check.passed && !is_informational(check.claim)) failures_.push_back(check);
    if (keep_) checks_.push_back(std::move(check));
  }

  double tolerance_;
  bool keep_;
  std::map<Claim, ClaimSummary> summaries_;
  std::vector<Check> failures_;
  std::vector<Check> checks_;
};

struct ConditionalSums {
  double probability = 0.0;
  double lambda = 0.0;
  double mu_star = 0.0;
  std::vector<double> mu;
  std::vector<double> delta;
};

}  // namespace

MarkerSequence build_markers(const Instance& inst, const PolicyTree& greedy_tree,
                             MarkerTieBreak tie) {
  MarkerSequence ms;
  ms.nodes = greedy_tree.internal_nodes();
  if (tie == MarkerTieBreak::kReverseBfsOrder) std::reverse(ms.nodes.begin(), ms.nodes.end());
  std::stable_sort(ms.nodes.begin(), ms.nodes.end(), [&](std::size_t a, std::size_t b) {
    return greedy_tree.node(a).utility < greedy_tree.node(b).utility;
  });
  for (std::size_t id : ms.nodes) ms.positions.push_back(greedy_tree.node(id).utility);
  ms.positions.push_back(inst.goal());
  for (std::size_t i = 0; i < ms.nodes.size(); ++i) {
    ms.gaps.push_back(ms.positions[i + 1] - ms.positions[i]);
  }
  return ms;
}

std::size_t leadsto(const ExecutionTrace& trace, const MarkerSequence& ms, std::size_t i) {
  if (i >= ms.size()) fail(ErrorCode::kDomainError, "marker index out of range");
  std::size_t last = 0;
  for (std::size_t j = 0; j < trace.utilities.size(); ++j) {
    if (trace.utilities[j] <= ms.positions[i]) last = j;
  }
  return last;
}

double visited_price(const Instance& inst, const ExecutionTrace& trace, std::size_t j) {
  if (j >= trace.selected.size()) {
    fail(ErrorCode::kDomainError, "visited subrealization " + std::to_string(j) +
                                      " selects no item");
  }
  return price_at(inst, trace.visited[j], trace.selected[j]);
}

std::vector<double> lambda_revenues(const Instance& inst, const ExecutionTrace& trace,
                                    const MarkerSequence& ms) {
  std::vector<double> prices(trace.selected.size(), std::nan(""));
  std::vector<double> out(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const std::size_t j = leadsto(trace, ms, i);
    if (std::isnan(prices[j])) prices[j] = visited_price(inst, trace, j);
    out[i] = prices[j] * ms.gaps[i];
  }
  return out;
}

std::vector<double> mu_revenues(const Instance& inst, const ExecutionTrace& greedy_trace,
                                const ExecutionTrace& optimal_trace) {
  std::vector<double> out(inst.item_count(), 0.0);
  for (ItemId e : optimal_trace.selected) {
    const auto it = std::find(greedy_trace.selected.begin(), greedy_trace.selected.end(), e);
    if (it == greedy_trace.selected.end()) {
      out[e] = inst.cost(e);
      continue;
    }
    const std::size_t j = static_cast<std::size_t>(it - greedy_trace.selected.begin());
    const double gain = greedy_trace.utilities[j + 1] - greedy_trace.utilities[j];
    out[e] = visited_price(inst, greedy_trace, j) * gain;
  }
  return out;
}

std::vector<ItemId> HybridTrace::selected() const {
  std::vector<ItemId> out = stage1;
  out.insert(out.end(), stage2.begin(), stage2.end());
  return out;
}

HybridTrace execute_hybrid(const Instance& inst, const PolicyTree& greedy_tree,
                           const OptimalSolution& optimal, std::size_t switch_node,
                           const Realization& phi) {
  if (switch_node >= greedy_tree.size() || greedy_tree.node(switch_node).is_leaf()) {
    fail(ErrorCode::kDomainError, "switch node must be a non-leaf node of the greedy tree");
  }
  HybridTrace h;
  h.delta_plus.assign(inst.item_count(), 0.0);
  Subrealization global = inst.empty_subrealization();

  std::size_t id = 0;
  while (true) {
    if (id == switch_node) {
      h.switched = true;
      break;
    }
    const TreeNode& node = greedy_tree.node(id);
    if (node.is_leaf()) break;
    const ItemId e = *node.item;
    global.assign(e, phi[e]);
    h.stage1.push_back(e);
    h.cost += inst.cost(e);
    id = greedy_tree.child(id, phi[e]);
    if (id == PolicyTree::kNoNode) {
      fail(ErrorCode::kDomainError, "realization " + phi.to_string() +
                                        " takes a zero-probability branch");
    }
  }

  if (h.switched) {
    Subrealization logical = inst.empty_subrealization();
    double value = inst.f(global);
    while (!inst.is_cover(logical)) {
      const auto& entry = optimal.table.at(logical);
      const ItemId e = *entry.item;
      if (!global.contains(e)) {
        global.assign(e, phi[e]);
        const double next = inst.f(global);
        h.delta_plus[e] = next - value;
        value = next;
        h.stage2.push_back(e);
        h.cost += inst.cost(e);
      }
      logical.assign(e, phi[e]);
    }
  }
  h.observed = std::move(global);
  return h;
}

Policy hybrid_policy(const Instance& inst, const PolicyTree& greedy_tree,
                     const OptimalSolution& optimal, std::size_t switch_node) {
  if (switch_node >= greedy_tree.size() || greedy_tree.node(switch_node).is_leaf()) {
    fail(ErrorCode::kDomainError, "switch node must be a non-leaf node of the greedy tree");
  }
  auto tree = std::make_shared<const PolicyTree>(greedy_tree);
  auto table = std::make_shared<const ValueTable>(optimal.table);
  return Policy(
      "hybrid", [inst, tree, table, switch_node](const Subrealization& observed)
                    -> std::optional<ItemId> {
        std::size_t id = 0;
        while (id != switch_node) {
          const TreeNode& node = tree->node(id);
          if (node.is_leaf()) return std::nullopt;
          const auto state = observed.state_of(*node.item);
          if (!state) return node.item;
          id = tree->child(id, *state);
          if (id == PolicyTree::kNoNode) return std::nullopt;
        }
        Subrealization logical = inst.empty_subrealization();
        while (!inst.is_cover(logical)) {
          const auto entry = table->lookup(logical);
          if (!entry || !entry->item) return std::nullopt;
          const auto state = observed.state_of(*entry->item);
          if (!state) return entry->item;
          logical.assign(*entry->item, *state);
        }
        return std::nullopt;
      });
}

double delta_plus(const HybridTrace& trace, ItemId e) {
  if (e >= trace.delta_plus.size()) fail(ErrorCode::kDomainError, "item out of range");
  return trace.delta_plus[e];
}

bool verify_fact_mediant(const std::vector<double>& alphas, const std::vector<double>& betas) {
  if (alphas.size() != betas.size() || alphas.empty()) {
    fail(ErrorCode::kDomainError, "mediant inputs must be non-empty and of equal length");
  }
  double sum_a = 0.0;
  double sum_b = 0.0;
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] < 0.0 || betas[i] < 0.0 || std::isnan(alphas[i]) || std::isnan(betas[i])) {
      fail(ErrorCode::kDomainError, "mediant inputs must be non-negative");
    }
    sum_a += alphas[i];
    sum_b += betas[i];
    if (betas[i] > 0.0) min_ratio = std::min(min_ratio, alphas[i] / betas[i]);
  }
  if (!(sum_b > 0.0)) fail(ErrorCode::kDomainError, "sum of betas must be positive");
  const double mediant = sum_a / sum_b;
  return min_ratio <= mediant + relative_slack(mediant);
}

double kappa(double goal, double eta, bool integer_valued) {
  if (!(goal > 0.0) || !(eta > 0.0) || !std::isfinite(goal) || !std::isfinite(eta)) {
    fail(ErrorCode::kDomainError, "kappa needs positive finite Q and eta");
  }
  if (eta > goal + relative_slack(goal)) {
    fail(ErrorCode::kDomainError, "eta " + fmt(eta) + " exceeds Q " + fmt(goal));
  }
  if (!integer_valued) return std::log(goal / eta) + 1.0;

  const double rounded = std::round(goal);
  if (std::abs(goal - rounded) > 1e-9 * std::max(1.0, goal)) {
    fail(ErrorCode::kDomainError, "integer-valued kappa needs an integral Q, got " + fmt(goal));
  }
  constexpr double kDirectLimit = 1e7;
  if (rounded > kDirectLimit) {
    // Asymptotic expansion; error below 1/(120 Q^4).
    constexpr double kEulerGamma = 0.57721566490153286061;
    return std::log(rounded) + kEulerGamma + 1.0 / (2.0 * rounded) -
           1.0 / (12.0 * rounded * rounded);
  }
  double h = 0.0;
  // Summed smallest-first for accuracy.
  for (auto j = static_cast<std::uint64_t>(rounded); j >= 1; --j) h += 1.0 / static_cast<double>(j);
  return h;
}

SumBoundReport verify_sum_bound(const MarkerSequence& ms, double goal, double eta,
                                bool integer_valued) {
  SumBoundReport r;
  for (std::size_t i = 0; i < ms.size(); ++i) r.sum += ms.gaps[i] / (goal - ms.positions[i]);
  r.real_bound = kappa(goal, eta, false);
  r.holds = r.sum <= r.real_bound + relative_slack(r.real_bound);
  if (integer_valued) {
    r.harmonic_bound = kappa(goal, eta, true);
    r.holds = r.holds && r.sum <= *r.harmonic_bound + relative_slack(*r.harmonic_bound);
  }
  return r;
}

std::string to_string(Claim c) {
  switch (c) {
    case Claim::kL1: return "L1";
    case Claim::kL2: return "L2";
    case Claim::kL3: return "L3";
    case Claim::kL4: return "L4";
    case Claim::kL4Strong: return "L4_strong";
    case Claim::kL5: return "L5";
    case Claim::kL6: return "L6";
    case Claim::kT1: return "T1";
    case Claim::kRevenueSplit: return "revenue_split";
    case Claim::kHybridAgreement: return "hybrid_agreement";
    case Claim::kDeltaGap: return "delta_gap";
    case Claim::kGreedyChoice: return "greedy_choice";
    case Claim::kMarkers: return "markers";
    case Claim::kSumBound: return "sum_bound";
  }
  return "unknown";
}

std::set<Claim> parse_lemmas(const std::string& spec) {
  static const std::map<std::string, Claim> kNames = {
      {"L1", Claim::kL1}, {"L2", Claim::kL2}, {"L3", Claim::kL3}, {"L4", Claim::kL4},
      {"L5", Claim::kL5}, {"L6", Claim::kL6}, {"T1", Claim::kT1}};
  std::set<Claim> out;
  std::stringstream ss(spec);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
    if (token.empty()) fail(ErrorCode::kParseError, "empty entry in lemma list '" + spec + "'");
    if (token == "all") {
      for (const auto& [name, claim] : kNames) out.insert(claim);
      continue;
    }
    const auto it = kNames.find(token);
    if (it == kNames.end()) fail(ErrorCode::kParseError, "unknown lemma '" + token + "'");
    out.insert(it->second);
  }
  if (out.empty()) fail(ErrorCode::kParseError, "no lemmas selected");
  return out;
}

bool is_informational(Claim c) { return c == Claim::kL4Strong; }

const ClaimSummary* VerificationReport::summary(Claim c) const {
  for (const auto& s : claims) {
    if (s.claim == c) return &s;
  }
  return nullptr;
}

VerificationReport verify_lemmas(const Instance& inst, const VerifyOptions& options) {
  const auto wants = [&](Claim c) { return options.lemmas.count(c) > 0; };
  const std::size_t n = inst.item_count();
  const double alpha = options.selector.alpha;
  const double tol = options.tolerance;

  VerificationReport report;
  report.alpha = alpha;
  report.goal = goal_value(inst, options.budget);
  report.gap = compute_eta(inst, options.budget);
  const double q = report.goal;
  report.kappa = kappa(q, report.gap.eta, inst.integer_valued());
  report.kappa_real = kappa(q, report.gap.eta, false);

  const PolicyTree sigma = materialize_tree(inst, greedy_policy(inst, options.selector));
  const OptimalSolution opt = optimal_value(inst, options.budget);
  const PolicyTree opt_tree = materialize_tree(inst, optimal_policy(opt));
  report.greedy_cost = expected_cost_exact(inst, sigma);
  report.optimal_cost = opt.value;
  report.ratio = report.greedy_cost / report.optimal_cost;
  report.greedy_nodes = sigma.size();

  const MarkerSequence ms = build_markers(inst, sigma);
  const std::size_t t = ms.size();
  report.markers = t;
  report.sum_bound = verify_sum_bound(ms, q, report.gap.eta, inst.integer_valued());

  Recorder rec(tol, options.keep_checks);

  // Node prices of T(sigma); NaN at leaves.
  std::vector<double> price(sigma.size(), std::nan(""));
  for (std::size_t id : sigma.internal_nodes()) {
    price[id] = price_at(inst, sigma.node(id).psi, *sigma.node(id).item);
  }

  for (const auto& a : audit_greedy_choices(inst, sigma, alpha)) {
    const double ceiling = alpha * a.min_price;
    rec.inequality(Claim::kGreedyChoice, "node " + sigma.node(a.node).psi.to_string(),
                   a.chosen_price, ceiling, relative_slack(ceiling));
  }

  if (t > 0) {
    const double gap_sum = std::accumulate(ms.gaps.begin(), ms.gaps.end(), 0.0);
    rec.equality(Claim::kMarkers, "sum of gaps = Q", gap_sum, q, kTight);
    rec.inequality(Claim::kMarkers, "last gap >= eta", report.gap.eta, ms.gaps.back(),
                   relative_slack(q));
    rec.inequality(Claim::kMarkers, "gaps non-negative", 0.0,
                   *std::min_element(ms.gaps.begin(), ms.gaps.end()), 0.0);
  }
  {
    const double bound = report.sum_bound.harmonic_bound.value_or(report.sum_bound.real_bound);
    rec.inequality(Claim::kSumBound, "sum eps/(Q-f(rho)) <= 1+ln(Q/eta)", report.sum_bound.sum,
                   report.sum_bound.real_bound, relative_slack(report.sum_bound.real_bound));
    if (report.sum_bound.harmonic_bound) {
      rec.inequality(Claim::kSumBound, "sum eps/(Q-f(rho)) <= H(Q)", report.sum_bound.sum, bound,
                     relative_slack(bound));
    }
  }

  std::vector<double> expected_lambda(t, 0.0);
  double expected_mu_star = 0.0;
  std::map<std::pair<std::size_t, std::size_t>, ConditionalSums> conditional;  // (node, i)

  for_each_realization(inst, options.budget, [&](const Realization& phi, double p) {
    ++report.realizations;
    const std::vector<std::size_t> path = sigma.path(phi);
    const ExecutionTrace gt = trace_along(inst, sigma, path);
    const ExecutionTrace ot = execute(inst, opt_tree, phi);
    const std::string tag = "phi=" + phi.to_string();

    // Lambda revenues and their per-node split.
    std::vector<double> lambda(t);
    std::vector<std::size_t> lead(t);
    std::vector<double> grouped(path.size(), 0.0);
    for (std::size_t i = 0; i < t; ++i) {
      lead[i] = leadsto(gt, ms, i);
      lambda[i] = price[path[lead[i]]] * ms.gaps[i];
      grouped[lead[i]] += lambda[i];
      expected_lambda[i] += p * lambda[i];
    }
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      const double earned = price[path[j]] * (gt.utilities[j + 1] - gt.utilities[j]);
      rec.equality(Claim::kRevenueSplit, tag + " psi=" + gt.visited[j].to_string(), grouped[j], earned,
                   kTight);
    }

    const std::vector<double> mu = mu_revenues(inst, gt, ot);
    const double mu_star = std::accumulate(mu.begin(), mu.end(), 0.0);
    expected_mu_star += p * mu_star;

    std::vector<char> in_opt(n, 0);
    for (ItemId e : ot.selected) in_opt[e] = 1;

    // Hybrid runs at every visited non-leaf node: item agreement with pi* and the delta+ gap.
    std::vector<std::vector<double>> delta(path.size());
    for (std::size_t j = 0; j + 1 < path.size(); ++j) {
      const Subrealization& psi = gt.visited[j];
      const HybridTrace h = execute_hybrid(inst, sigma, opt, path[j], phi);
      std::vector<char> in_hybrid(n, 0);
      for (ItemId e : h.selected()) in_hybrid[e] = 1;
      std::string mismatched;
      double mismatches = 0.0;
      double delta_sum = 0.0;
      for (ItemId e = 0; e < n; ++e) {
        if (psi.contains(e)) continue;
        delta_sum += h.delta_plus[e];
        if (in_opt[e] != in_hybrid[e]) {
          mismatches += 1.0;
          mismatched += " " + std::to_string(e);
        }
      }
      const std::string where = tag + " psi=" + psi.to_string();
      rec.equality(Claim::kHybridAgreement, where + (mismatched.empty() ? "" : " items" + mismatched),
                   mismatches, 0.0, 0.0);
      rec.inequality(Claim::kDeltaGap, where, q - gt.utilities[j], delta_sum);
      delta[j] = h.delta_plus;
    }

    for (std::size_t i = 0; i < t; ++i) {
      auto& acc = conditional[{path[lead[i]], i}];
      if (acc.mu.empty()) {
        acc.mu.assign(n, 0.0);
        acc.delta.assign(n, 0.0);
      }
      acc.probability += p;
      acc.lambda += p * lambda[i];
      acc.mu_star += p * mu_star;
      for (ItemId e = 0; e < n; ++e) {
        acc.mu[e] += p * mu[e];
        acc.delta[e] += p * delta[lead[i]][e];
      }
    }
  });

  const std::size_t skipped = sigma.internal_nodes().size() * t - conditional.size();

  if (wants(Claim::kL1)) {
    const double revenue = std::accumulate(expected_lambda.begin(), expected_lambda.end(), 0.0);
    rec.equality(Claim::kL1, "E[C(sigma)] = sum E[lambda_i]", report.greedy_cost, revenue);
  }
  if (wants(Claim::kL2)) {
    rec.equality(Claim::kL2, "E[C(pi*)] = E[mu*]", report.optimal_cost, expected_mu_star);
  }
  if (wants(Claim::kL3)) rec.skip(Claim::kL3, skipped);
  if (wants(Claim::kL4)) {
    rec.skip(Claim::kL4, skipped);
    rec.skip(Claim::kL4Strong, skipped);
  }
  for (const auto& [key, acc] : conditional) {
    const auto [node, i] = key;
    const Subrealization& psi = sigma.node(node).psi;
    const double upsilon = price[node];
    const std::string where = "psi=" + psi.to_string() + " marker " + std::to_string(i);
    if (wants(Claim::kL3)) {
      for (ItemId e = 0; e < n; ++e) {
        if (psi.contains(e)) continue;
        rec.inequality(Claim::kL3, where + " item " + std::to_string(e),
                       upsilon * acc.delta[e] / acc.probability,
                       alpha * acc.mu[e] / acc.probability);
      }
    }
    if (wants(Claim::kL4)) {
      const double lhs = acc.lambda / acc.probability;
      const double mu_star = acc.mu_star / acc.probability;
      rec.inequality(Claim::kL4, where, lhs,
                     alpha * mu_star * ms.gaps[i] / (q - ms.positions[i]));
      rec.inequality(Claim::kL4Strong, where, lhs,
                     alpha * mu_star * ms.gaps[i] / (q - sigma.node(node).utility));
    }
  }
  if (wants(Claim::kL5)) {
    for (std::size_t i = 0; i < t; ++i) {
      rec.inequality(Claim::kL5, "marker " + std::to_string(i), expected_lambda[i],
                     alpha * report.optimal_cost * ms.gaps[i] / (q - ms.positions[i]));
    }
  }
  if (wants(Claim::kL6)) {
    rec.inequality(Claim::kL6, "E[C(sigma)] <= alpha E[C(pi*)] sum eps/(Q-f(rho))",
                   report.greedy_cost, alpha * report.optimal_cost * report.sum_bound.sum);
  }
  if (wants(Claim::kT1)) {
    rec.inequality(Claim::kT1, "E[C(sigma)] <= alpha kappa E[C(pi*)]", report.greedy_cost,
                   alpha * report.kappa * report.optimal_cost);
  }

  rec.finish(report);
  return report;
}

}  // namespace ssc
