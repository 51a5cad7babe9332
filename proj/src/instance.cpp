#include "ssc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ssc/error.hpp"

namespace ssc {
namespace {

void check_utility_shape(const UtilityModel& utility, std::size_t n, std::size_t k) {
  const auto bad = [](const std::string& what) { fail(ErrorCode::kInvalidInstance, what); };
  std::visit(
      [&](const auto& model) {
        using T = std::decay_t<decltype(model)>;
        if constexpr (std::is_same_v<T, StochasticCoverage>) {
          if (model.coversets.size() != n) bad("coversets must have one row per item");
          for (const auto& row : model.coversets) {
            if (row.size() != k) bad("coversets rows must have one entry per state");
          }
        } else if constexpr (std::is_same_v<T, TruncatedAdditive>) {
          if (model.gains.size() != n) bad("gains must have one row per item");
          for (const auto& row : model.gains) {
            if (row.size() != k) bad("gains rows must have one entry per state");
          }
        } else {
          for (const auto& [rel, value] : model.entries) {
            for (const auto& [e, o] : rel) {
              if (e >= n || o >= k) bad("table entry references an unknown item or state");
            }
          }
        }
      },
      utility.model());
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

Instance::Instance(std::vector<double> costs, std::vector<std::vector<double>> probs,
                   UtilityModel utility, bool integer_valued,
                   std::optional<double> declared_eta)
    : costs_(std::move(costs)),
      probs_(std::move(probs)),
      utility_(std::make_shared<const UtilityModel>(std::move(utility))),
      integer_valued_(integer_valued),
      declared_eta_(declared_eta) {
  const std::size_t n = costs_.size();
  if (n == 0) fail(ErrorCode::kInvalidInstance, "instance needs at least one item");
  if (probs_.size() != n) fail(ErrorCode::kInvalidInstance, "probs must have one row per item");
  state_count_ = probs_.front().size();
  if (state_count_ == 0) fail(ErrorCode::kInvalidInstance, "at least one state is required");
  for (const auto& row : probs_) {
    if (row.size() != state_count_) {
      fail(ErrorCode::kInvalidInstance, "probs rows must all have k entries");
    }
  }
  check_utility_shape(*utility_, n, state_count_);

  support_.resize(n);
  for (ItemId e = 0; e < n; ++e) {
    for (StateId o = 0; o < state_count_; ++o) {
      if (probs_[e][o] > 0.0) support_[e].push_back(o);
    }
  }
  goal_ = utility_->declared_goal();
  cover_slack_ = 1e-12 * std::max(1.0, std::abs(goal_));
}

double realization_probability(const Instance& inst, const Realization& phi) {
  double p = 1.0;
  for (ItemId e = 0; e < inst.item_count(); ++e) p *= inst.prob(e, phi[e]);
  return p;
}

std::size_t realization_count(const Instance& inst) {
  std::size_t count = 1;
  for (ItemId e = 0; e < inst.item_count(); ++e) {
    const std::size_t s = inst.support(e).size();
    if (s == 0) return 0;
    if (count > std::numeric_limits<std::size_t>::max() / s) {
      return std::numeric_limits<std::size_t>::max();
    }
    count *= s;
  }
  return count;
}

void for_each_realization(const Instance& inst, std::size_t budget,
                          const std::function<void(const Realization&, double)>& visit) {
  const std::size_t count = realization_count(inst);
  if (count > budget) {
    fail(ErrorCode::kBudgetExceeded, std::to_string(count) +
                                         " realizations exceed the enumeration budget of " +
                                         std::to_string(budget));
  }
  if (count == 0) return;
  const std::size_t n = inst.item_count();
  std::vector<std::size_t> digit(n, 0);
  Realization phi{std::vector<StateId>(n)};
  for (ItemId e = 0; e < n; ++e) phi.states[e] = inst.support(e)[0];

  // Odometer with the last item varying fastest gives item-major order.
  while (true) {
    visit(phi, realization_probability(inst, phi));
    std::size_t pos = n;
    while (pos > 0) {
      const ItemId e = static_cast<ItemId>(pos - 1);
      if (++digit[e] < inst.support(e).size()) {
        phi.states[e] = inst.support(e)[digit[e]];
        break;
      }
      digit[e] = 0;
      phi.states[e] = inst.support(e)[0];
      --pos;
    }
    if (pos == 0) return;
  }
}

std::vector<WeightedRealization> enumerate_realizations(const Instance& inst,
                                                        std::size_t budget) {
  std::vector<WeightedRealization> out;
  for_each_realization(inst, budget, [&](const Realization& phi, double p) {
    out.push_back({phi, p});
  });
  return out;
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(mix64(mix64(seed) ^ (trial * 0xd1b54a32d192ed03ull)));
}

Realization sample_realization(const Instance& inst, std::mt19937_64& stream) {
  const std::size_t n = inst.item_count();
  Realization phi{std::vector<StateId>(n)};
  for (ItemId e = 0; e < n; ++e) {
    // 53 random bits mapped to [0, 1).
    const double u = static_cast<double>(stream() >> 11) * 0x1.0p-53;
    const auto support = inst.support(e);
    StateId chosen = support.back();
    double cumulative = 0.0;
    for (StateId o : support) {
      cumulative += inst.prob(e, o);
      if (u < cumulative) {
        chosen = o;
        break;
      }
    }
    phi.states[e] = chosen;
  }
  return phi;
}

Realization sample_realization(const Instance& inst, std::uint64_t seed, std::uint64_t trial) {
  auto engine = trial_engine(seed, trial);
  return sample_realization(inst, engine);
}

Violations validate_instance(const Instance& inst) {
  Violations out;
  for (ItemId e = 0; e < inst.item_count(); ++e) {
    const double c = inst.cost(e);
    if (!(c > 0.0) || !std::isfinite(c)) {
      out.push_back({ViolationKind::kNonPositiveCost,
                     "item " + std::to_string(e) + " has cost " + std::to_string(c)});
    }
    double sum = 0.0;
    for (StateId o = 0; o < inst.state_count(); ++o) {
      const double p = inst.prob(e, o);
      if (!(p >= 0.0 && p <= 1.0)) {
        out.push_back({ViolationKind::kProbabilityOutOfRange,
                       "P[item " + std::to_string(e) + " = state " + std::to_string(o) +
                           "] = " + std::to_string(p)});
      }
      sum += p;
    }
    if (!(std::abs(sum - 1.0) <= 1e-12)) {
      out.push_back({ViolationKind::kProbabilitySum,
                     "marginals of item " + std::to_string(e) + " sum to " +
                         std::to_string(sum)});
    }
  }
  return out;
}

}  // namespace ssc
