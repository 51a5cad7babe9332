#include "ssc/ssc.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <stdexcept>
#include <string>

#include "ssc/accounting.hpp"
#include "ssc/error.hpp"
#include "ssc/greedy.hpp"
#include "ssc/harness.hpp"
#include "ssc/json_io.hpp"
#include "ssc/optimal.hpp"
#include "ssc/policy.hpp"

struct ssc_instance {
  ssc::Instance impl;
};

namespace {

thread_local std::string g_last_error;

struct NullArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

ssc_status to_status(ssc::ErrorCode code) {
  using ssc::ErrorCode;
  switch (code) {
    case ErrorCode::kItemAlreadyAssigned: return SSC_ERR_ITEM_ALREADY_ASSIGNED;
    case ErrorCode::kBudgetExceeded: return SSC_ERR_BUDGET_EXCEEDED;
    case ErrorCode::kTableMiss: return SSC_ERR_TABLE_MISS;
    case ErrorCode::kNotCoverable: return SSC_ERR_NOT_COVERABLE;
    case ErrorCode::kEtaUnavailable: return SSC_ERR_ETA_UNAVAILABLE;
    case ErrorCode::kPolicyIncomplete: return SSC_ERR_POLICY_INCOMPLETE;
    case ErrorCode::kNonCoveringPolicy: return SSC_ERR_NON_COVERING_POLICY;
    case ErrorCode::kNoProgressPossible: return SSC_ERR_NO_PROGRESS;
    case ErrorCode::kDomainError: return SSC_ERR_DOMAIN;
    case ErrorCode::kGenerationFailed: return SSC_ERR_GENERATION_FAILED;
    case ErrorCode::kReferenceMismatch: return SSC_ERR_REFERENCE_MISMATCH;
    case ErrorCode::kInvalidInstance: return SSC_ERR_INVALID_INSTANCE;
    case ErrorCode::kParseError: return SSC_ERR_PARSE;
    case ErrorCode::kIoError: return SSC_ERR_IO;
    case ErrorCode::kInternal: return SSC_ERR_INTERNAL;
  }
  return SSC_ERR_INTERNAL;
}

template <typename Fn>
ssc_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SSC_OK;
  } catch (const NullArgument& ex) {
    g_last_error = ex.what();
    return SSC_ERR_INVALID_ARGUMENT;
  } catch (const ssc::Error& ex) {
    g_last_error = ex.what();
    return to_status(ex.code());
  } catch (const nlohmann::json::exception& ex) {
    g_last_error = ex.what();
    return SSC_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SSC_ERR_INTERNAL;
  } catch (const std::exception& ex) {
    g_last_error = ex.what();
    return SSC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return SSC_ERR_INTERNAL;
  }
}

char* copy_out(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw NullArgument(std::string(what) + " must not be null");
}

ssc::Json parse_options(const char* text) {
  if (!text || !*text) return ssc::Json::object();
  ssc::Json doc;
  try {
    doc = ssc::Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    ssc::fail(ssc::ErrorCode::kParseError, ex.what());
  }
  if (!doc.is_object()) ssc::fail(ssc::ErrorCode::kParseError, "options must be a JSON object");
  return doc;
}

template <typename T>
T opt(const ssc::Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& ex) {
    ssc::fail(ssc::ErrorCode::kParseError, std::string("option '") + key + "': " + ex.what());
  }
}

ssc::Selector selector_from(const ssc::Json& doc) {
  const double alpha = opt<double>(doc, "alpha", 1.0);
  const auto mode = opt<std::string>(doc, "selector", alpha == 1.0 ? "exact" : "adversarial");
  if (mode == "exact") {
    if (alpha != 1.0) ssc::fail(ssc::ErrorCode::kDomainError, "exact selector needs alpha = 1");
    return ssc::Selector::exact();
  }
  if (mode == "adversarial") return ssc::Selector::adversarial(alpha);
  ssc::fail(ssc::ErrorCode::kParseError, "selector must be exact or adversarial");
}

struct Solved {
  std::string name;
  ssc::Policy policy;
  ssc::PolicyTree tree;
  std::optional<double> dp_value;
};

Solved solve_policy(const ssc::Instance& inst, const ssc::Json& options) {
  const auto which = opt<std::string>(options, "policy", "greedy");
  const auto budget = opt<std::size_t>(options, "budget", ssc::kDefaultBudget);
  const auto node_budget = opt<std::size_t>(options, "node_budget", ssc::kDefaultNodeBudget);
  if (which == "greedy") {
    ssc::Policy p = ssc::greedy_policy(inst, selector_from(options));
    ssc::PolicyTree t = ssc::materialize_tree(inst, p, node_budget);
    return {which, std::move(p), std::move(t), std::nullopt};
  }
  if (which == "optimal") {
    const ssc::OptimalSolution sol = ssc::optimal_value(inst, budget);
    ssc::Policy p = ssc::optimal_policy(sol);
    ssc::PolicyTree t = ssc::materialize_tree(inst, p, node_budget);
    return {which, std::move(p), std::move(t), sol.value};
  }
  ssc::fail(ssc::ErrorCode::kParseError, "policy must be greedy or optimal");
}

ssc::Json violations_json(const ssc::Violations& vs) {
  ssc::Json out = ssc::Json::array();
  for (const auto& v : vs) out.push_back({{"kind", ssc::to_string(v.kind)}, {"detail", v.detail}});
  return out;
}

}  // namespace

extern "C" {

const char* ssc_version(void) { return "1.0.0"; }

const char* ssc_status_string(ssc_status status) {
  switch (status) {
    case SSC_OK: return "ok";
    case SSC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SSC_ERR_PARSE: return "parse error";
    case SSC_ERR_IO: return "I/O error";
    case SSC_ERR_INVALID_INSTANCE: return "invalid instance";
    case SSC_ERR_ITEM_ALREADY_ASSIGNED: return "item already assigned";
    case SSC_ERR_BUDGET_EXCEEDED: return "budget exceeded";
    case SSC_ERR_TABLE_MISS: return "table miss";
    case SSC_ERR_NOT_COVERABLE: return "not coverable";
    case SSC_ERR_ETA_UNAVAILABLE: return "eta unavailable";
    case SSC_ERR_POLICY_INCOMPLETE: return "policy incomplete";
    case SSC_ERR_NON_COVERING_POLICY: return "non-covering policy";
    case SSC_ERR_NO_PROGRESS: return "no progress possible";
    case SSC_ERR_DOMAIN: return "domain error";
    case SSC_ERR_GENERATION_FAILED: return "generation failed";
    case SSC_ERR_REFERENCE_MISMATCH: return "reference mismatch";
    case SSC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ssc_last_error(void) { return g_last_error.c_str(); }

void ssc_string_free(char* s) { std::free(s); }

ssc_status ssc_instance_from_json(const char* json, ssc_instance** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    *out = nullptr;
    *out = new ssc_instance{ssc::parse_instance(json)};
  });
}

ssc_status ssc_instance_to_json(const ssc_instance* inst, char** out) {
  return guarded([&] {
    require(inst, "instance");
    require(out, "out");
    *out = copy_out(ssc::dump_instance(inst->impl));
  });
}

ssc_status ssc_instance_shape(const ssc_instance* inst, size_t* n, size_t* k) {
  return guarded([&] {
    require(inst, "instance");
    if (n) *n = inst->impl.item_count();
    if (k) *k = inst->impl.state_count();
  });
}

void ssc_instance_destroy(ssc_instance* inst) { delete inst; }

ssc_status ssc_generate(const char* config_json, ssc_instance** out) {
  return guarded([&] {
    require(out, "out");
    *out = nullptr;
    const ssc::Json doc = parse_options(config_json);
    ssc::GeneratorConfig cfg;
    cfg.kind = ssc::parse_family(opt<std::string>(doc, "kind", "coverage"));
    cfg.n = opt<std::size_t>(doc, "n", cfg.n);
    cfg.k = opt<std::size_t>(doc, "k", cfg.k);
    cfg.m = opt<std::size_t>(doc, "m", cfg.m);
    cfg.cost_lo = opt<double>(doc, "cost_lo", cfg.cost_lo);
    cfg.cost_hi = opt<double>(doc, "cost_hi", cfg.cost_hi);
    cfg.density = opt<double>(doc, "density", cfg.density);
    cfg.integer_valued = opt<bool>(doc, "integer_valued", cfg.integer_valued);
    cfg.seed = opt<std::uint64_t>(doc, "seed", cfg.seed);
    *out = new ssc_instance{ssc::gen_instance(cfg)};
  });
}

ssc_status ssc_validate(const ssc_instance* inst, size_t budget, uint64_t seed,
                        char** result_json) {
  return guarded([&] {
    require(inst, "instance");
    require(result_json, "result_json");
    const ssc::Instance& in = inst->impl;
    ssc::Violations all = ssc::validate_instance(in);
    const auto append = [&](const ssc::Violations& vs) { all.insert(all.end(), vs.begin(), vs.end()); };
    try {
      append(ssc::validate_polymatroid(in, budget));
    } catch (const ssc::Error& ex) {
      if (ex.code() != ssc::ErrorCode::kBudgetExceeded) throw;
      all.push_back({ssc::ViolationKind::kUnverified, std::string("polymatroid: ") + ex.what()});
    }
    append(ssc::validate_coverability(in, budget));
    append(ssc::validate_sufficiency(in, 256, seed));

    ssc::Json doc = {{"ok", all.empty()}, {"Q", in.goal()}};
    try {
      const ssc::GoalGap gap = ssc::compute_eta(in, budget);
      doc["eta"] = gap.eta;
      doc["eta_is_exact"] = gap.eta_is_exact;
    } catch (const ssc::Error& ex) {
      doc["eta"] = nullptr;
      doc["eta_error"] = ex.what();
    }
    doc["violations"] = violations_json(all);
    *result_json = copy_out(doc.dump());
  });
}

ssc_status ssc_solve(const ssc_instance* inst, const char* options_json, char** result_json) {
  return guarded([&] {
    require(inst, "instance");
    require(result_json, "result_json");
    const ssc::Json options = parse_options(options_json);
    const Solved s = solve_policy(inst->impl, options);
    ssc::Json doc = {{"policy", s.name},
                     {"expected_cost", ssc::expected_cost_exact(inst->impl, s.tree)},
                     {"tree_nodes", s.tree.size()},
                     {"internal_nodes", s.tree.internal_nodes().size()}};
    if (s.dp_value) doc["dp_value"] = *s.dp_value;
    if (opt<bool>(options, "emit_tree", false)) doc["tree"] = ssc::tree_to_json(s.tree);
    *result_json = copy_out(doc.dump());
  });
}

ssc_status ssc_evaluate(const ssc_instance* inst, const char* options_json, char** result_json) {
  return guarded([&] {
    require(inst, "instance");
    require(result_json, "result_json");
    const ssc::Json options = parse_options(options_json);
    const auto method = opt<std::string>(options, "method", "both");
    if (method != "exact" && method != "mc" && method != "both") {
      ssc::fail(ssc::ErrorCode::kParseError, "method must be exact, mc or both");
    }
    const Solved s = solve_policy(inst->impl, options);
    ssc::Json doc = {{"policy", s.name}};
    if (method != "mc") doc["exact"] = ssc::expected_cost_exact(inst->impl, s.tree);
    if (method != "exact") {
      const auto trials = opt<std::size_t>(options, "trials", 100000);
      const auto seed = opt<std::uint64_t>(options, "seed", 0);
      const ssc::McEstimate mc = ssc::expected_cost_mc(inst->impl, s.policy, trials, seed);
      doc["mc"] = {{"mean", mc.mean},
                   {"standard_error", ssc::number_or_null(mc.standard_error)},
                   {"trials", mc.trials},
                   {"seed", seed}};
    }
    *result_json = copy_out(doc.dump());
  });
}

ssc_status ssc_verify(const ssc_instance* inst, const char* options_json, char** report_json,
                      int* passed) {
  return guarded([&] {
    require(inst, "instance");
    require(report_json, "report_json");
    const ssc::Json options = parse_options(options_json);
    ssc::VerifyOptions vo;
    vo.selector = selector_from(options);
    vo.lemmas = ssc::parse_lemmas(opt<std::string>(options, "lemmas", "all"));
    vo.tolerance = opt<double>(options, "tolerance", vo.tolerance);
    vo.budget = opt<std::size_t>(options, "budget", vo.budget);
    vo.keep_checks = opt<bool>(options, "keep_checks", false);
    const ssc::VerificationReport r = ssc::verify_lemmas(inst->impl, vo);
    *report_json = copy_out(ssc::report_to_json(r).dump());
    if (passed) *passed = r.ok() ? 1 : 0;
  });
}

ssc_status ssc_run_experiment(const char* config_json, const char* format, char** report,
                              int* passed) {
  return guarded([&] {
    require(config_json, "config_json");
    require(report, "report");
    const std::string fmt = format ? format : "json";
    if (fmt != "json" && fmt != "csv") ssc::fail(ssc::ErrorCode::kParseError, "format must be json or csv");
    ssc::Json doc;
    try {
      doc = ssc::Json::parse(config_json);
    } catch (const nlohmann::json::exception& ex) {
      ssc::fail(ssc::ErrorCode::kParseError, ex.what());
    }
    const ssc::ExperimentReport r = ssc::run_experiment(ssc::parse_experiment_config(doc));
    *report = copy_out(fmt == "json" ? r.to_json().dump(2) : r.to_csv());
    if (passed) *passed = r.ok() ? 1 : 0;
  });
}

ssc_status ssc_reproduce(const char* which, char** report_json) {
  return guarded([&] {
    require(which, "which");
    require(report_json, "report_json");
    const std::string name = which;
    ssc::Json doc;
    if (name == "figure-example") {
      doc = ssc::reproduce_worked_example();
    } else if (name == "appendix-b") {
      doc = ssc::reproduce_charging_example();
    } else {
      ssc::fail(ssc::ErrorCode::kParseError, "unknown example '" + name + "'");
    }
    *report_json = copy_out(doc.dump(2));
  });
}

ssc_status ssc_kappa(double goal, double eta, int integer_valued, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = ssc::kappa(goal, eta, integer_valued != 0);
  });
}

}  // extern "C"
