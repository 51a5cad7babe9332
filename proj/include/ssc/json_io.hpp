#pragma once

#include <string>

#include <json.hpp>

#include "ssc/accounting.hpp"
#include "ssc/instance.hpp"
#include "ssc/policy.hpp"

namespace ssc {

using Json = nlohmann::ordered_json;

/// Instance file: {"n","k","costs","probs","integer_valued","utility"} plus an
/// optional declared "eta". Throws ParseError on malformed documents.
Instance instance_from_json(const Json& doc);
Json instance_to_json(const Instance& inst);

Instance parse_instance(const std::string& text);
std::string dump_instance(const Instance& inst);

/// Nodes in breadth-first order with rel(psi), f, reach probability, the
/// selected item and the child map.
Json tree_to_json(const PolicyTree& tree);

Json report_to_json(const VerificationReport& report);

/// Doubles that are not finite become null.
Json number_or_null(double v);

}  // namespace ssc
