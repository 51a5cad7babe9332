#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "ssc/error.hpp"
#include "ssc/harness.hpp"

namespace ssc {
namespace {

void reject_unknown(const Json& doc, const std::set<std::string>& allowed, const char* where) {
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) {
      fail(ErrorCode::kParseError, std::string("unknown field '") + key + "' in " + where);
    }
  }
}

template <typename T>
T get(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParseError, std::string("field '") + key + "': " + ex.what());
  }
}

std::string shortest(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> failed_claims(const VerificationReport& r) {
  std::vector<std::string> out;
  for (const auto& s : r.claims) {
    if (s.failed > 0 && !is_informational(s.claim)) out.push_back(to_string(s.claim));
  }
  return out;
}

Selector make_selector(const std::string& mode, double alpha) {
  if (mode == "exact" || (mode == "auto" && alpha == 1.0)) return Selector::exact();
  return Selector::adversarial(alpha);
}

}  // namespace

ExperimentConfig parse_experiment_config(const Json& doc) {
  if (!doc.is_object()) fail(ErrorCode::kParseError, "experiment config must be an object");
  reject_unknown(doc, {"schema", "corpus", "instances", "alphas", "selector", "lemmas",
                       "tolerance", "budget"},
                 "experiment config");
  if (get<int>(doc, "schema", 1) != 1) fail(ErrorCode::kParseError, "unsupported schema");

  ExperimentConfig cfg;
  if (doc.contains("corpus")) {
    const Json& c = doc.at("corpus");
    if (!c.is_object()) fail(ErrorCode::kParseError, "corpus must be an object");
    reject_unknown(c, {"count", "seed", "n_max", "k_max", "m_max", "families"}, "corpus");
    cfg.use_corpus = true;
    cfg.corpus.count = get<std::size_t>(c, "count", cfg.corpus.count);
    cfg.corpus.seed = get<std::uint64_t>(c, "seed", cfg.corpus.seed);
    cfg.corpus.n_max = get<std::size_t>(c, "n_max", cfg.corpus.n_max);
    cfg.corpus.k_max = get<std::size_t>(c, "k_max", cfg.corpus.k_max);
    cfg.corpus.m_max = get<std::size_t>(c, "m_max", cfg.corpus.m_max);
    if (c.contains("families")) {
      cfg.corpus.families.clear();
      for (const auto& name : get<std::vector<std::string>>(c, "families", {})) {
        cfg.corpus.families.push_back(parse_family(name));
      }
    }
  }
  if (doc.contains("instances")) {
    if (!doc.at("instances").is_array()) fail(ErrorCode::kParseError, "instances must be a list");
    for (const auto& inst : doc.at("instances")) cfg.instances.push_back(inst);
  }
  cfg.alphas = get<std::vector<double>>(doc, "alphas", cfg.alphas);
  cfg.selector = get<std::string>(doc, "selector", cfg.selector);
  cfg.lemmas = get<std::string>(doc, "lemmas", cfg.lemmas);
  cfg.tolerance = get<double>(doc, "tolerance", cfg.tolerance);
  cfg.budget = get<std::size_t>(doc, "budget", cfg.budget);

  if (cfg.selector != "auto" && cfg.selector != "exact" && cfg.selector != "adversarial") {
    fail(ErrorCode::kParseError, "selector must be auto, exact or adversarial");
  }
  for (double a : cfg.alphas) {
    if (!(a >= 1.0) || !std::isfinite(a)) fail(ErrorCode::kParseError, "alphas must be >= 1");
    if (cfg.selector == "exact" && a != 1.0) {
      fail(ErrorCode::kParseError, "the exact selector only supports alpha = 1");
    }
  }
  if (!(cfg.tolerance >= 0.0)) fail(ErrorCode::kParseError, "tolerance must be >= 0");
  parse_lemmas(cfg.lemmas);
  return cfg;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  struct Job {
    std::string source;
    std::string family;
    std::optional<Instance> instance;
    std::string error;
  };
  std::vector<Job> jobs;
  if (cfg.use_corpus) {
    for (auto& entry : generate_corpus(cfg.corpus)) {
      jobs.push_back({"corpus", to_string(entry.config.kind), std::move(entry.instance), ""});
    }
  }
  for (const auto& doc : cfg.instances) {
    Job job{"file", "", std::nullopt, ""};
    try {
      job.instance.emplace(instance_from_json(doc));
      job.family = std::string(job.instance->utility().kind());
    } catch (const Error& ex) {
      job.error = ex.what();
    }
    jobs.push_back(std::move(job));
  }

  VerifyOptions base;
  base.tolerance = cfg.tolerance;
  base.budget = cfg.budget;
  base.lemmas = parse_lemmas(cfg.lemmas);

  ExperimentReport report;
  for (std::size_t index = 0; index < jobs.size(); ++index) {
    const Job& job = jobs[index];
    for (double alpha : cfg.alphas) {
      ExperimentRow row;
      row.index = index;
      row.source = job.source;
      row.family = job.family;
      row.alpha = alpha;
      row.error = job.error;
      if (job.instance) {
        row.n = job.instance->item_count();
        row.k = job.instance->state_count();
        VerifyOptions options = base;
        options.selector = make_selector(cfg.selector, alpha);
        row.selector = options.selector.kind == Selector::Kind::kExact ? "exact" : "adversarial";
        try {
          row.report = verify_lemmas(*job.instance, options);
          row.ok = row.report.ok();
        } catch (const Error& ex) {
          row.error = ex.what();
        }
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

bool ExperimentReport::ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const ExperimentRow& r) { return r.ok; });
}

Json ExperimentReport::to_json() const {
  Json out_rows = Json::array();
  std::size_t passed = 0;
  std::size_t errors = 0;
  double max_ratio = 0.0;
  double max_ratio_over_bound = 0.0;
  std::map<std::string, ClaimSummary> totals;
  for (const auto& r : rows) {
    passed += r.ok ? 1 : 0;
    errors += r.error.empty() ? 0 : 1;
    Json row = {{"index", r.index},   {"source", r.source}, {"family", r.family},
                {"n", r.n},           {"k", r.k},           {"alpha", r.alpha},
                {"selector", r.selector}, {"ok", r.ok},
                {"error", r.error.empty() ? Json() : Json(r.error)}};
    if (r.error.empty()) {
      const auto& v = r.report;
      max_ratio = std::max(max_ratio, v.ratio);
      max_ratio_over_bound = std::max(max_ratio_over_bound, v.ratio / (v.alpha * v.kappa));
      row["greedy_cost"] = v.greedy_cost;
      row["optimal_cost"] = v.optimal_cost;
      row["ratio"] = number_or_null(v.ratio);
      row["kappa"] = v.kappa;
      row["alpha_kappa"] = v.alpha * v.kappa;
      row["eta"] = v.gap.eta;
      row["eta_is_exact"] = v.gap.eta_is_exact;
      row["failed_claims"] = failed_claims(v);
      row["verification"] = report_to_json(v);
      for (const auto& s : v.claims) {
        auto& t = totals[to_string(s.claim)];
        const bool first = t.instantiated == 0;
        t.claim = s.claim;
        t.instantiated += s.instantiated;
        t.passed += s.passed;
        t.failed += s.failed;
        t.skipped += s.skipped;
        if (s.instantiated > 0 && (first || s.worst_slack < t.worst_slack)) {
          t.worst_slack = s.worst_slack;
          t.worst_label = s.worst_label;
        }
      }
    }
    out_rows.push_back(std::move(row));
  }
  Json claims = Json::object();
  for (const auto& [name, t] : totals) {
    claims[name] = {{"informational", is_informational(t.claim)},
                    {"instantiated", t.instantiated},
                    {"passed", t.passed},
                    {"failed", t.failed},
                    {"skipped", t.skipped},
                    {"worst_slack", t.instantiated ? number_or_null(t.worst_slack) : Json()}};
  }
  return {{"schema", 1},
          {"ok", ok()},
          {"summary",
           {{"rows", rows.size()},
            {"passed", passed},
            {"failed", rows.size() - passed},
            {"errors", errors},
            {"max_ratio", max_ratio},
            {"max_ratio_over_alpha_kappa", max_ratio_over_bound},
            {"claims", claims}}},
          {"rows", out_rows}};
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "index,source,family,n,k,alpha,selector,ok,greedy_cost,optimal_cost,ratio,kappa,"
        "alpha_kappa,eta,eta_is_exact,failed_claims,error\n";
  for (const auto& r : rows) {
    os << r.index << ',' << r.source << ',' << r.family << ',' << r.n << ',' << r.k << ','
       << shortest(r.alpha) << ',' << r.selector << ',' << (r.ok ? "true" : "false") << ',';
    if (r.error.empty()) {
      const auto& v = r.report;
      std::string claims;
      for (const auto& c : failed_claims(v)) claims += (claims.empty() ? "" : ";") + c;
      os << shortest(v.greedy_cost) << ',' << shortest(v.optimal_cost) << ','
         << shortest(v.ratio) << ',' << shortest(v.kappa) << ','
         << shortest(v.alpha * v.kappa) << ',' << shortest(v.gap.eta) << ','
         << (v.gap.eta_is_exact ? "true" : "false") << ',' << claims << ',';
    } else {
      os << ",,,,,,,,";
    }
    os << csv_field(r.error) << '\n';
  }
  return os.str();
}

}  // namespace ssc
