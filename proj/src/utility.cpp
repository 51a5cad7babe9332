#include "ssc/utility.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "ssc/error.hpp"
#include "ssc/instance.hpp"

namespace ssc {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double validation_slack(const Instance& inst) {
  return 1e-12 * std::max(1.0, std::abs(inst.goal()));
}

}  // namespace

UtilityModel::UtilityModel(Variant model) : model_(std::move(model)) {
  const auto bad = [](const std::string& what) { fail(ErrorCode::kInvalidInstance, what); };
  std::visit(
      [&](auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StochasticCoverage>) {
          for (double w : m.weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) bad("coverage weights must be finite and >= 0");
          }
          for (auto& row : m.coversets) {
            for (auto& set : row) {
              for (auto d : set) {
                if (d >= m.weights.size()) bad("coverset element out of range");
              }
              std::sort(set.begin(), set.end());
              set.erase(std::unique(set.begin(), set.end()), set.end());
            }
          }
        } else if constexpr (std::is_same_v<T, TruncatedAdditive>) {
          if (!(m.goal > 0.0) || !std::isfinite(m.goal)) bad("goal Q must be positive");
          for (const auto& row : m.gains) {
            for (double g : row) {
              if (!(g >= 0.0) || !std::isfinite(g)) bad("gains must be finite and >= 0");
            }
          }
        } else {
          if (!(m.goal > 0.0) || !std::isfinite(m.goal)) bad("goal Q must be positive");
          for (const auto& [rel, value] : m.entries) {
            if (!std::isfinite(value)) bad("table values must be finite");
            for (std::size_t i = 1; i < rel.size(); ++i) {
              if (rel[i - 1].first >= rel[i].first) {
                bad("table relations must be sorted by item without repeats");
              }
            }
          }
        }
      },
      model_);
  if (!(declared_goal() > 0.0)) fail(ErrorCode::kInvalidInstance, "goal value must be positive");
}

std::string_view UtilityModel::kind() const {
  switch (model_.index()) {
    case 0: return "coverage";
    case 1: return "truncated_additive";
    default: return "table";
  }
}

double UtilityModel::evaluate(const Subrealization& psi) const {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StochasticCoverage>) {
          std::vector<char> covered(m.element_count(), 0);
          for (const auto& [e, o] : psi.pairs()) {
            if (e >= m.coversets.size() || o >= m.coversets[e].size()) {
              fail(ErrorCode::kDomainError, "assignment outside the coverage model");
            }
            for (auto d : m.coversets[e][o]) covered[d] = 1;
          }
          double total = 0.0;
          for (std::size_t d = 0; d < covered.size(); ++d) {
            if (covered[d]) total += m.weights[d];
          }
          return total;
        } else if constexpr (std::is_same_v<T, TruncatedAdditive>) {
          double total = 0.0;
          for (const auto& [e, o] : psi.pairs()) {
            if (e >= m.gains.size() || o >= m.gains[e].size()) {
              fail(ErrorCode::kDomainError, "assignment outside the additive model");
            }
            total += m.gains[e][o];
          }
          return std::min(m.goal, total);
        } else {
          const auto it = m.entries.find(psi.pairs());
          if (it == m.entries.end()) {
            fail(ErrorCode::kTableMiss, "no table entry for " + psi.to_string());
          }
          return it->second;
        }
      },
      model_);
}

double UtilityModel::marginal(const Subrealization& psi, ItemId e, StateId o) const {
  const Subrealization next = psi.extend(e, o);
  return evaluate(next) - evaluate(psi);
}

double UtilityModel::declared_goal() const {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StochasticCoverage>) {
          double total = 0.0;
          for (double w : m.weights) total += w;
          return total;
        } else {
          return m.goal;
        }
      },
      model_);
}

LatticeIndex::LatticeIndex(const Instance& inst, std::size_t budget) {
  const std::size_t n = inst.item_count();
  support_.resize(n);
  digit_of_state_.resize(n);
  stride_.assign(n, 1);
  for (ItemId e = 0; e < n; ++e) {
    const auto s = inst.support(e);
    support_[e].assign(s.begin(), s.end());
    digit_of_state_[e].assign(inst.state_count(), 0);
    for (std::size_t j = 0; j < s.size(); ++j) digit_of_state_[e][s[j]] = j + 1;
  }
  size_ = 1;
  for (std::size_t pos = n; pos-- > 0;) {
    stride_[pos] = size_;
    const std::size_t radix = support_[pos].size() + 1;
    if (size_ > budget / radix) {
      fail(ErrorCode::kBudgetExceeded,
           "subrealization lattice exceeds the budget of " + std::to_string(budget));
    }
    size_ *= radix;
  }
}

std::size_t LatticeIndex::encode(const Subrealization& psi) const {
  std::size_t code = 0;
  for (const auto& [e, o] : psi.pairs()) {
    const std::size_t digit = digit_of_state_[e][o];
    if (digit == 0) fail(ErrorCode::kDomainError, "zero-probability state in " + psi.to_string());
    code += digit * stride_[e];
  }
  return code;
}

Subrealization LatticeIndex::decode(std::size_t code) const {
  Subrealization psi(support_.size());
  for (ItemId e = 0; e < support_.size(); ++e) {
    const std::size_t digit = (code / stride_[e]) % (support_[e].size() + 1);
    if (digit > 0) psi.assign(e, support_[e][digit - 1]);
  }
  return psi;
}

UtilityTable tabulate(const Instance& inst, std::size_t budget) {
  UtilityTable table{LatticeIndex(inst, budget), {}};
  table.values.resize(table.index.size());
  for (std::size_t code = 0; code < table.index.size(); ++code) {
    table.values[code] = inst.f(table.index.decode(code));
  }
  return table;
}

double expected_marginal(const Instance& inst, const Subrealization& psi, ItemId e) {
  if (psi.contains(e)) {
    fail(ErrorCode::kItemAlreadyAssigned, "item " + std::to_string(e) + " already observed");
  }
  const double base = inst.f(psi);
  double expectation = 0.0;
  for (StateId o : inst.support(e)) {
    expectation += inst.prob(e, o) * (inst.f(psi.extend(e, o)) - base);
  }
  return expectation;
}

double goal_value(const Instance& inst, std::size_t budget) {
  const double goal = inst.goal();
  if (realization_count(inst) > budget) return goal;
  const double slack = validation_slack(inst);
  for_each_realization(inst, budget, [&](const Realization& phi, double) {
    const double v = inst.f(phi.as_subrealization());
    if (!(std::abs(v - goal) <= slack)) {
      fail(ErrorCode::kNotCoverable, "realization " + phi.to_string() + " reaches " + fmt(v) +
                                         " instead of Q = " + fmt(goal));
    }
  });
  return goal;
}

GoalGap compute_eta(const Instance& inst, std::size_t budget) {
  GoalGap gap;
  gap.goal = inst.goal();
  std::optional<LatticeIndex> index;
  try {
    index.emplace(inst, budget);
  } catch (const Error& err) {
    if (err.code() != ErrorCode::kBudgetExceeded) throw;
  }
  if (index) {
    double eta = std::numeric_limits<double>::infinity();
    for (std::size_t code = 0; code < index->size(); ++code) {
      const double v = inst.f(index->decode(code));
      if (!inst.is_cover(v)) eta = std::min(eta, gap.goal - v);
    }
    // f(empty) = 0 < Q always contributes, so eta is finite here.
    gap.eta = eta;
    gap.eta_is_exact = true;
    return gap;
  }
  if (inst.declared_eta()) {
    gap.eta = *inst.declared_eta();
  } else if (inst.integer_valued()) {
    gap.eta = 1.0;
  } else {
    fail(ErrorCode::kEtaUnavailable,
         "eta is not enumerable within budget and the instance declares none");
  }
  gap.eta_is_exact = false;
  return gap;
}

Violations validate_polymatroid(const Instance& inst, std::size_t budget) {
  const UtilityTable table = tabulate(inst, budget);
  const double slack = validation_slack(inst);
  const std::size_t n = inst.item_count();
  Violations out;

  const double empty_value = table.values[0];
  if (!(std::abs(empty_value) <= slack)) {
    out.push_back({ViolationKind::kNormalization, "f(empty) = " + fmt(empty_value)});
  }

  std::size_t non_integer = 0;
  for (std::size_t code = 0; code < table.index.size(); ++code) {
    const Subrealization upper = table.index.decode(code);
    const double f_upper = table.values[code];
    if (inst.integer_valued() && !(std::abs(f_upper - std::round(f_upper)) <= 1e-9)) {
      ++non_integer;
    }

    for (ItemId e = 0; e < n; ++e) {
      if (upper.contains(e)) continue;
      for (StateId o : inst.support(e)) {
        const double gain_upper = table.at(upper.extend(e, o)) - f_upper;
        if (gain_upper < -slack) {
          out.push_back({ViolationKind::kMonotonicity,
                         "f(" + upper.extend(e, o).to_string() + ") < f(" + upper.to_string() + ")"});
        }

        // Every proper sub-relation of `upper`, obtained by dropping a
        // nonempty subset of its pairs.
        const auto pairs = upper.pairs();
        const std::size_t subsets = std::size_t{1} << pairs.size();
        for (std::size_t drop = 1; drop < subsets; ++drop) {
          if (std::popcount(drop) == 1) {
            // psi' = psi + (x, .): this inequality coincides with the one for
            // (psi, psi + (e, o), x); keep only the x < e copy.
            const ItemId x = pairs[static_cast<std::size_t>(std::countr_zero(drop))].first;
            if (x > e) continue;
          }
          Subrealization lower(n);
          for (std::size_t j = 0; j < pairs.size(); ++j) {
            if (!(drop >> j & 1u)) lower.assign(pairs[j].first, pairs[j].second);
          }
          const double gain_lower = table.at(lower.extend(e, o)) - table.at(lower);
          if (gain_lower < gain_upper - slack) {
            out.push_back({ViolationKind::kSubmodularity,
                           "adding (" + std::to_string(e) + "," + std::to_string(o) + ") gains " +
                               fmt(gain_lower) + " at " + lower.to_string() + " but " +
                               fmt(gain_upper) + " at " + upper.to_string()});
          }
        }
      }
    }
  }
  if (non_integer > 0) {
    out.push_back({ViolationKind::kNonIntegerValue,
                   std::to_string(non_integer) +
                       " subrealizations have non-integer utility on an integer-valued instance"});
  }
  return out;
}

Violations validate_coverability(const Instance& inst, std::size_t budget) {
  const double goal = inst.goal();
  Violations out;
  if (realization_count(inst) <= budget) {
    const double slack = validation_slack(inst);
    std::size_t short_count = 0;
    std::size_t total = 0;
    std::string first;
    for_each_realization(inst, budget, [&](const Realization& phi, double) {
      ++total;
      const double v = inst.f(phi.as_subrealization());
      if (!(std::abs(v - goal) <= slack)) {
        if (short_count == 0) first = phi.to_string() + " reaches " + fmt(v);
        ++short_count;
      }
    });
    if (short_count > 0) {
      out.push_back({ViolationKind::kCoverability,
                     std::to_string(short_count) + " of " + std::to_string(total) +
                         " realizations miss Q = " + fmt(goal) + "; first: " + first});
    }
    return out;
  }

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, StochasticCoverage>) {
          // Elements covered by an item in every supported state are covered
          // by every realization.
          std::vector<char> certain(m.element_count(), 0);
          for (ItemId e = 0; e < inst.item_count(); ++e) {
            std::vector<int> hits(m.element_count(), 0);
            const auto support = inst.support(e);
            for (StateId o : support) {
              for (auto d : m.coversets[e][o]) ++hits[d];
            }
            for (std::size_t d = 0; d < hits.size(); ++d) {
              if (!support.empty() && hits[d] == static_cast<int>(support.size())) certain[d] = 1;
            }
          }
          const auto missing = std::count(certain.begin(), certain.end(), 0);
          if (missing > 0) {
            out.push_back({ViolationKind::kUnverified,
                           std::to_string(missing) +
                               " ground elements lack a certain cover; coverability not certified"});
          }
        } else if constexpr (std::is_same_v<T, TruncatedAdditive>) {
          // The worst realization takes the smallest supported gain of each
          // item, so this test is exact.
          double worst = 0.0;
          for (ItemId e = 0; e < inst.item_count(); ++e) {
            double lowest = std::numeric_limits<double>::infinity();
            for (StateId o : inst.support(e)) lowest = std::min(lowest, m.gains[e][o]);
            worst += lowest;
          }
          if (worst < goal) {
            out.push_back({ViolationKind::kCoverability,
                           "worst-case gain sum " + fmt(worst) + " < Q = " + fmt(goal)});
          }
        } else {
          out.push_back({ViolationKind::kUnverified,
                         "table utility is not enumerable within budget"});
        }
      },
      inst.utility().model());
  return out;
}

Violations validate_sufficiency(const Instance& inst, std::size_t samples, std::uint64_t seed) {
  Violations out;
  const std::size_t n = inst.item_count();
  std::vector<ItemId> items(n);
  for (std::size_t trial = 0; trial < samples; ++trial) {
    auto rng = trial_engine(seed ^ 0x5u, trial);
    const Realization phi = sample_realization(inst, rng);
    items.clear();
    for (ItemId e = 0; e < n; ++e) {
      if (rng() & 1u) items.push_back(e);
    }
    std::vector<ItemId> forward = items;
    std::vector<ItemId> shuffled = items;
    std::shuffle(forward.begin(), forward.end(), rng);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);

    Subrealization a(n);
    Subrealization b(n);
    for (ItemId e : forward) a = a.extend(e, phi[e]);
    for (ItemId e : shuffled) b = b.extend(e, phi[e]);
    const double fa = inst.f(a);
    const double fb = inst.f(b);
    if (!(a == b) || fa != fb) {
      out.push_back({ViolationKind::kSufficiency,
                     "extension order changes f at " + a.to_string() + ": " + fmt(fa) +
                         " vs " + fmt(fb)});
    }
  }
  return out;
}

}  // namespace ssc
