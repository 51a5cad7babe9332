#include "ssc/json_io.hpp"

#include <cmath>

#include "ssc/error.hpp"

namespace ssc {
namespace {

template <typename T>
T field(const Json& doc, const char* key) {
  if (!doc.contains(key)) fail(ErrorCode::kParseError, std::string("missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParseError, std::string("field '") + key + "': " + ex.what());
  }
}

UtilityModel utility_from_json(const Json& u, std::size_t n, std::size_t k) {
  if (!u.is_object()) fail(ErrorCode::kParseError, "utility must be an object");
  const auto kind = field<std::string>(u, "kind");
  if (kind == "coverage") {
    StochasticCoverage model;
    const auto m = field<std::size_t>(u, "m");
    model.weights = field<std::vector<double>>(u, "weights");
    if (model.weights.size() != m) fail(ErrorCode::kParseError, "weights must have m entries");
    model.coversets = field<std::vector<std::vector<std::vector<std::uint32_t>>>>(u, "coversets");
    if (model.coversets.size() != n) fail(ErrorCode::kParseError, "coversets must have n rows");
    for (const auto& row : model.coversets) {
      if (row.size() != k) fail(ErrorCode::kParseError, "coversets rows must have k entries");
    }
    return UtilityModel(std::move(model));
  }
  if (kind == "truncated_additive") {
    TruncatedAdditive model;
    model.goal = field<double>(u, "Q");
    model.gains = field<std::vector<std::vector<double>>>(u, "gains");
    return UtilityModel(std::move(model));
  }
  if (kind == "table") {
    ExplicitTable model;
    model.goal = field<double>(u, "Q");
    const Json entries = field<Json>(u, "entries");
    if (!entries.is_array()) fail(ErrorCode::kParseError, "entries must be an array");
    for (const auto& entry : entries) {
      auto rel = field<std::vector<std::pair<ItemId, StateId>>>(entry, "rel");
      std::sort(rel.begin(), rel.end());
      const auto value = field<double>(entry, "value");
      if (!model.entries.emplace(std::move(rel), value).second) {
        fail(ErrorCode::kParseError, "duplicate table relation");
      }
    }
    return UtilityModel(std::move(model));
  }
  fail(ErrorCode::kParseError, "unknown utility kind '" + kind + "'");
}

Json utility_to_json(const UtilityModel& utility) {
  return std::visit(
      [](const auto& m) -> Json {
        using T = std::decay_t<decltype(m)>;
        Json u;
        if constexpr (std::is_same_v<T, StochasticCoverage>) {
          u["kind"] = "coverage";
          u["m"] = m.weights.size();
          u["weights"] = m.weights;
          u["coversets"] = m.coversets;
        } else if constexpr (std::is_same_v<T, TruncatedAdditive>) {
          u["kind"] = "truncated_additive";
          u["Q"] = m.goal;
          u["gains"] = m.gains;
        } else {
          u["kind"] = "table";
          u["Q"] = m.goal;
          Json entries = Json::array();
          for (const auto& [rel, value] : m.entries) {
            Json rel_json = Json::array();
            for (const auto& [e, o] : rel) rel_json.push_back({e, o});
            entries.push_back({{"rel", rel_json}, {"value", value}});
          }
          u["entries"] = entries;
        }
        return u;
      },
      utility.model());
}

Json subrealization_to_json(const Subrealization& psi) {
  Json rel = Json::array();
  for (const auto& [e, o] : psi.pairs()) rel.push_back({e, o});
  return rel;
}

Json check_to_json(const Check& c) {
  return {{"claim", to_string(c.claim)}, {"label", c.label},
          {"kind", c.equality ? "equality" : "inequality"},
          {"lhs", number_or_null(c.lhs)},  {"rhs", number_or_null(c.rhs)},
          {"slack", number_or_null(c.slack)}, {"passed", c.passed}};
}

}  // namespace

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Instance instance_from_json(const Json& doc) {
  if (!doc.is_object()) fail(ErrorCode::kParseError, "instance must be a JSON object");
  const auto n = field<std::size_t>(doc, "n");
  const auto k = field<std::size_t>(doc, "k");
  auto costs = field<std::vector<double>>(doc, "costs");
  auto probs = field<std::vector<std::vector<double>>>(doc, "probs");
  if (costs.size() != n) fail(ErrorCode::kParseError, "costs must have n entries");
  if (probs.size() != n) fail(ErrorCode::kParseError, "probs must have n rows");
  for (const auto& row : probs) {
    if (row.size() != k) fail(ErrorCode::kParseError, "probs rows must have k entries");
  }
  const bool integer_valued = field<bool>(doc, "integer_valued");
  std::optional<double> eta;
  if (doc.contains("eta") && !doc.at("eta").is_null()) eta = field<double>(doc, "eta");
  UtilityModel utility = utility_from_json(field<Json>(doc, "utility"), n, k);
  return Instance(std::move(costs), std::move(probs), std::move(utility), integer_valued, eta);
}

Json instance_to_json(const Instance& inst) {
  Json doc;
  doc["n"] = inst.item_count();
  doc["k"] = inst.state_count();
  doc["costs"] = std::vector<double>(inst.costs().begin(), inst.costs().end());
  doc["probs"] = inst.prob_table();
  doc["integer_valued"] = inst.integer_valued();
  doc["utility"] = utility_to_json(inst.utility());
  if (inst.declared_eta()) doc["eta"] = *inst.declared_eta();
  return doc;
}

Instance parse_instance(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParseError, ex.what());
  }
  return instance_from_json(doc);
}

std::string dump_instance(const Instance& inst) { return instance_to_json(inst).dump(); }

Json tree_to_json(const PolicyTree& tree) {
  Json nodes = Json::array();
  for (std::size_t id = 0; id < tree.size(); ++id) {
    const TreeNode& node = tree.node(id);
    Json children = Json::array();
    for (const auto& [state, child] : node.children) {
      children.push_back({{"state", state}, {"node", child}});
    }
    nodes.push_back({{"id", id},
                     {"rel", subrealization_to_json(node.psi)},
                     {"f", node.utility},
                     {"reach_probability", node.reach_probability},
                     {"path_cost", node.path_cost},
                     {"item", node.item ? Json(*node.item) : Json(nullptr)},
                     {"children", children}});
  }
  return {{"nodes", nodes}};
}

Json report_to_json(const VerificationReport& r) {
  Json claims = Json::array();
  for (const auto& s : r.claims) {
    claims.push_back({{"claim", to_string(s.claim)},
                      {"informational", is_informational(s.claim)},
                      {"instantiated", s.instantiated},
                      {"passed", s.passed},
                      {"failed", s.failed},
                      {"skipped", s.skipped},
                      {"worst_slack", s.instantiated ? number_or_null(s.worst_slack) : Json()},
                      {"worst_label", s.worst_label}});
  }
  Json failures = Json::array();
  for (const auto& c : r.failures) failures.push_back(check_to_json(c));

  Json doc = {{"ok", r.ok()},
              {"alpha", r.alpha},
              {"Q", r.goal},
              {"eta", r.gap.eta},
              {"eta_is_exact", r.gap.eta_is_exact},
              {"kappa", r.kappa},
              {"kappa_real", r.kappa_real},
              {"alpha_kappa", r.alpha * r.kappa},
              {"greedy_cost", r.greedy_cost},
              {"optimal_cost", r.optimal_cost},
              {"ratio", number_or_null(r.ratio)},
              {"greedy_nodes", r.greedy_nodes},
              {"markers", r.markers},
              {"realizations", r.realizations},
              {"sum_bound",
               {{"sum", r.sum_bound.sum},
                {"real_bound", r.sum_bound.real_bound},
                {"harmonic_bound",
                 r.sum_bound.harmonic_bound ? Json(*r.sum_bound.harmonic_bound) : Json()},
                {"holds", r.sum_bound.holds}}},
              {"claims", claims},
              {"failures", failures}};
  if (!r.checks.empty()) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(check_to_json(c));
    doc["checks"] = checks;
  }
  return doc;
}

}  // namespace ssc
