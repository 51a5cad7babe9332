#include <algorithm>
#include <cmath>
#include <string>

#include "ssc/error.hpp"
#include "ssc/harness.hpp"
#include "ssc/utility.hpp"

namespace ssc {
namespace {

constexpr int kMaxAttempts = 64;
constexpr std::size_t kCheckBudget = 100'000;

class Rng {
 public:
  explicit Rng(std::mt19937_64 engine) : engine_(std::move(engine)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t bound) { return static_cast<std::size_t>(engine_() % bound); }
  bool chance(double p) { return uniform() < p; }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

double round3(double x) { return std::round(x * 1000.0) / 1000.0; }

std::vector<double> draw_marginals(Rng& rng, std::size_t k) {
  std::vector<double> w(k);
  for (auto& x : w) x = 0.05 + rng.uniform();
  if (k > 1) {
    for (auto& x : w) {
      if (rng.chance(0.15)) x = 0.0;
    }
  }
  if (std::all_of(w.begin(), w.end(), [](double x) { return x == 0.0; })) w[rng.below(k)] = 1.0;
  double total = 0.0;
  for (double x : w) total += x;
  for (auto& x : w) x /= total;
  return w;
}

std::vector<double> draw_costs(Rng& rng, const GeneratorConfig& cfg) {
  std::vector<double> costs(cfg.n);
  for (auto& c : costs) {
    c = std::max(cfg.cost_lo, round3(cfg.cost_lo + (cfg.cost_hi - cfg.cost_lo) * rng.uniform()));
  }
  return costs;
}

StochasticCoverage draw_coverage(Rng& rng, const GeneratorConfig& cfg, std::size_t k) {
  StochasticCoverage model;
  model.weights.resize(cfg.m);
  for (auto& w : model.weights) w = cfg.integer_valued ? 1.0 : round3(0.5 + 1.5 * rng.uniform());
  model.coversets.assign(cfg.n, std::vector<std::vector<std::uint32_t>>(k));
  for (auto& row : model.coversets) {
    for (auto& set : row) {
      for (std::uint32_t d = 0; d < cfg.m; ++d) {
        if (rng.chance(cfg.density)) set.push_back(d);
      }
    }
  }
  // Each element is certain to be covered by its designated item.
  for (std::uint32_t d = 0; d < cfg.m; ++d) {
    auto& row = model.coversets[rng.below(cfg.n)];
    for (auto& set : row) set.push_back(d);
  }
  return model;
}

std::optional<TruncatedAdditive> draw_additive(Rng& rng, const GeneratorConfig& cfg,
                                               const std::vector<std::vector<double>>& probs) {
  TruncatedAdditive model;
  model.gains.assign(cfg.n, std::vector<double>(cfg.k));
  double floor_sum = 0.0;
  for (std::size_t e = 0; e < cfg.n; ++e) {
    double lowest = std::numeric_limits<double>::infinity();
    for (std::size_t o = 0; o < cfg.k; ++o) {
      double& g = model.gains[e][o];
      g = cfg.integer_valued ? static_cast<double>(rng.below(5)) : round3(3.0 * rng.uniform());
      if (probs[e][o] > 0.0) lowest = std::min(lowest, g);
    }
    floor_sum += lowest;
  }
  const double scale = 0.5 + 0.5 * rng.uniform();
  model.goal = cfg.integer_valued ? std::floor(floor_sum * scale)
                                  : std::floor(floor_sum * scale * 1000.0) / 1000.0;
  if (!(model.goal > 0.0)) return std::nullopt;
  return model;
}

bool acceptable(const Instance& inst) {
  if (!validate_instance(inst).empty()) return false;
  if (realization_count(inst) <= kCheckBudget && !validate_coverability(inst, kCheckBudget).empty()) {
    return false;
  }
  return true;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::kCoverage: return "coverage";
    case Family::kTruncatedAdditive: return "truncated_additive";
    case Family::kClassicalSetCover: return "classical_set_cover";
  }
  return "unknown";
}

Family parse_family(const std::string& name) {
  if (name == "coverage") return Family::kCoverage;
  if (name == "truncated_additive") return Family::kTruncatedAdditive;
  if (name == "classical_set_cover") return Family::kClassicalSetCover;
  fail(ErrorCode::kParseError, "unknown family '" + name + "'");
}

Instance gen_instance(const GeneratorConfig& cfg) {
  const bool classical = cfg.kind == Family::kClassicalSetCover;
  const std::size_t k = classical ? 1 : cfg.k;
  if (cfg.n == 0 || k == 0) fail(ErrorCode::kDomainError, "generator needs n >= 1 and k >= 1");
  if (cfg.kind != Family::kTruncatedAdditive && cfg.m == 0) {
    fail(ErrorCode::kDomainError, "coverage families need m >= 1");
  }
  if (!(cfg.cost_lo > 0.0) || cfg.cost_hi < cfg.cost_lo) {
    fail(ErrorCode::kDomainError, "cost range must satisfy 0 < lo <= hi");
  }
  if (!(cfg.density >= 0.0 && cfg.density <= 1.0)) {
    fail(ErrorCode::kDomainError, "density must lie in [0, 1]");
  }

  Rng rng(trial_engine(cfg.seed, 0));
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<std::vector<double>> probs(cfg.n);
    for (auto& row : probs) row = classical ? std::vector<double>{1.0} : draw_marginals(rng, k);
    std::vector<double> costs = draw_costs(rng, cfg);

    std::optional<Instance> inst;
    if (cfg.kind == Family::kTruncatedAdditive) {
      auto model = draw_additive(rng, cfg, probs);
      if (!model) continue;
      inst.emplace(std::move(costs), std::move(probs), UtilityModel(std::move(*model)),
                   cfg.integer_valued);
    } else {
      GeneratorConfig shaped = cfg;
      shaped.integer_valued = classical || cfg.integer_valued;
      auto model = draw_coverage(rng, shaped, k);
      inst.emplace(std::move(costs), std::move(probs), UtilityModel(std::move(model)),
                   shaped.integer_valued);
    }
    if (acceptable(*inst)) return *inst;
  }
  fail(ErrorCode::kGenerationFailed, "no valid " + to_string(cfg.kind) + " instance after " +
                                         std::to_string(kMaxAttempts) + " attempts");
}

std::vector<CorpusEntry> generate_corpus(const CorpusConfig& cfg) {
  if (cfg.families.empty() && cfg.count > 0) {
    fail(ErrorCode::kDomainError, "corpus needs at least one family");
  }
  if (cfg.n_max == 0 || cfg.k_max == 0 || cfg.m_max == 0) {
    fail(ErrorCode::kDomainError, "corpus bounds must be positive");
  }
  std::vector<CorpusEntry> out;
  out.reserve(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) {
    Rng rng(trial_engine(cfg.seed, i));
    GeneratorConfig g;
    g.kind = cfg.families[i % cfg.families.size()];
    g.n = 1 + rng.below(cfg.n_max);
    g.k = g.kind == Family::kClassicalSetCover ? 1 : 1 + rng.below(cfg.k_max);
    g.m = 1 + rng.below(cfg.m_max);
    g.integer_valued = g.kind == Family::kClassicalSetCover || rng.chance(0.5);
    g.seed = rng.bits();
    out.push_back({g, gen_instance(g)});
  }
  return out;
}

}  // namespace ssc
