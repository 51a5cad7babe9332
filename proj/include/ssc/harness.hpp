#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ssc/accounting.hpp"
#include "ssc/instance.hpp"
#include "ssc/json_io.hpp"

namespace ssc {

enum class Family { kCoverage, kTruncatedAdditive, kClassicalSetCover };

std::string to_string(Family f);
Family parse_family(const std::string& name);

struct GeneratorConfig {
  Family kind = Family::kCoverage;
  std::size_t n = 4;
  std::size_t k = 2;
  std::size_t m = 6;  // ground elements (coverage families)
  double cost_lo = 1.0;
  double cost_hi = 10.0;
  double density = 0.35;       // chance an element joins a coverset
  bool integer_valued = true;  // unit weights / integral gains
  std::uint64_t seed = 0;
};

/// Deterministic in the config. Coverability holds by construction: every
/// ground element is covered by one item in all of its states, and additive
/// goals never exceed the sum of the per-item minimum gains. Throws
/// GenerationFailed when no valid instance appears within 64 attempts.
Instance gen_instance(const GeneratorConfig& cfg);

struct CorpusConfig {
  std::size_t count = 200;
  std::uint64_t seed = 1;
  std::size_t n_max = 5;
  std::size_t k_max = 3;
  std::size_t m_max = 8;
  std::vector<Family> families = {Family::kCoverage, Family::kTruncatedAdditive,
                                  Family::kClassicalSetCover};
};

struct CorpusEntry {
  GeneratorConfig config;
  Instance instance;
};

/// Instance i draws its shape from trial_engine(seed, i) and cycles through
/// the families.
std::vector<CorpusEntry> generate_corpus(const CorpusConfig& cfg);

// Fixed worked examples. Each throws ReferenceMismatch when a computed value
// drifts from its pinned literal; the returned JSON carries every value.

/// The three-item table instance and its hand-specified four-node policy.
Instance worked_example_instance();
Policy worked_example_policy(const Instance& inst);
Json reproduce_worked_example();

/// The six-element, three-set deterministic cover with the charging
/// identity evaluated at j = 1.
Instance charging_example_instance();
Json reproduce_charging_example();

struct ExperimentConfig {
  CorpusConfig corpus;
  bool use_corpus = false;
  std::vector<Json> instances;  // explicit instance documents
  std::vector<double> alphas = {1.0};
  std::string selector = "auto";  // auto | exact | adversarial
  std::string lemmas = "all";
  double tolerance = 1e-9;
  std::size_t budget = kDefaultBudget;
};

/// Throws ParseError on unknown fields or malformed values.
ExperimentConfig parse_experiment_config(const Json& doc);

struct ExperimentRow {
  std::size_t index = 0;
  std::string source;  // corpus | file
  std::string family;
  std::size_t n = 0;
  std::size_t k = 0;
  double alpha = 1.0;
  std::string selector;
  bool ok = false;
  std::string error;  // non-empty when the instance raised
  VerificationReport report;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  bool ok() const;
  Json to_json() const;
  std::string to_csv() const;
};

/// Instances run independently; a failing instance is recorded and the run
/// continues.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace ssc
