// Exercises the shared library through its C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "ssc/ssc.h"

using nlohmann::json;

namespace {

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  ssc_string_free(s);
  return out;
}

const char* kCharging = R"({"n":3,"k":1,"costs":[1,1,1],"probs":[[1],[1],[1]],
  "integer_valued":true,
  "utility":{"kind":"coverage","m":6,"weights":[1,1,1,1,1,1],
             "coversets":[[[0,1,2,5]],[[2,3,5]],[[0,1,4]]]}})";

struct Handle {
  ssc_instance* p = nullptr;
  ~Handle() { ssc_instance_destroy(p); }
};

}  // namespace

TEST_CASE("version and status strings") {
  CHECK(std::string(ssc_version()).size() > 0);
  CHECK(std::string(ssc_status_string(SSC_OK)) == "ok");
  CHECK(std::string(ssc_status_string(SSC_ERR_BUDGET_EXCEEDED)).size() > 0);
}

TEST_CASE("instance lifecycle") {
  Handle h;
  REQUIRE(ssc_instance_from_json(kCharging, &h.p) == SSC_OK);
  size_t n = 0, k = 0;
  REQUIRE(ssc_instance_shape(h.p, &n, &k) == SSC_OK);
  CHECK(n == 3);
  CHECK(k == 1);
  char* text = nullptr;
  REQUIRE(ssc_instance_to_json(h.p, &text) == SSC_OK);
  const json doc = json::parse(take(text));
  CHECK(doc["utility"]["kind"] == "coverage");
  ssc_instance_destroy(nullptr);
}

TEST_CASE("errors map to status codes") {
  ssc_instance* p = nullptr;
  CHECK(ssc_instance_from_json("{", &p) == SSC_ERR_PARSE);
  CHECK(p == nullptr);
  CHECK(std::string(ssc_last_error()).size() > 0);
  CHECK(ssc_instance_from_json(nullptr, &p) == SSC_ERR_INVALID_ARGUMENT);
  CHECK(ssc_instance_from_json(kCharging, nullptr) == SSC_ERR_INVALID_ARGUMENT);

  double out = 0.0;
  CHECK(ssc_kappa(2.5, 1.0, 1, &out) == SSC_ERR_DOMAIN);
  CHECK(ssc_kappa(10.0, 1.0, 0, &out) == SSC_OK);
  CHECK(out == doctest::Approx(std::log(10.0) + 1.0));

  char* report = nullptr;
  CHECK(ssc_reproduce("figure-9", &report) != SSC_OK);
  CHECK(report == nullptr);

  Handle h;
  REQUIRE(ssc_instance_from_json(kCharging, &h.p) == SSC_OK);
  char* result = nullptr;
  CHECK(ssc_solve(h.p, R"({"policy":"random"})", &result) == SSC_ERR_PARSE);
  CHECK(ssc_solve(h.p, R"({"policy":"optimal","budget":2})", &result) ==
        SSC_ERR_BUDGET_EXCEEDED);
}

TEST_CASE("generate, validate, solve, evaluate") {
  Handle h;
  REQUIRE(ssc_generate(R"({"kind":"truncated_additive","n":4,"k":2,"seed":3})", &h.p) == SSC_OK);

  char* out = nullptr;
  REQUIRE(ssc_validate(h.p, 1000000, 1, &out) == SSC_OK);
  const json v = json::parse(take(out));
  CHECK(v["ok"] == true);
  CHECK(v["eta_is_exact"] == true);

  REQUIRE(ssc_solve(h.p, R"({"policy":"greedy","emit_tree":true})", &out) == SSC_OK);
  const json g = json::parse(take(out));
  REQUIRE(ssc_solve(h.p, R"({"policy":"optimal"})", &out) == SSC_OK);
  const json o = json::parse(take(out));
  CHECK(o["expected_cost"].get<double>() <= g["expected_cost"].get<double>() + 1e-12);
  CHECK(o["dp_value"].get<double>() ==
        doctest::Approx(o["expected_cost"].get<double>()).epsilon(1e-12));
  CHECK(g["tree"]["nodes"].size() == g["tree_nodes"].get<std::size_t>());

  REQUIRE(ssc_evaluate(h.p, R"({"method":"both","trials":20000,"seed":4})", &out) == SSC_OK);
  const json e = json::parse(take(out));
  const double exact = e["exact"].get<double>();
  CHECK(std::abs(e["mc"]["mean"].get<double>() - exact) <=
        4.0 * e["mc"]["standard_error"].get<double>() + 1e-12);
}

TEST_CASE("verify, experiment and reproduction") {
  Handle h;
  REQUIRE(ssc_instance_from_json(kCharging, &h.p) == SSC_OK);
  char* out = nullptr;
  int passed = 0;
  REQUIRE(ssc_verify(h.p, R"({"alpha":1})", &out, &passed) == SSC_OK);
  CHECK(passed == 1);
  const json r = json::parse(take(out));
  CHECK(r.is_object());

  REQUIRE(ssc_run_experiment(R"({"corpus":{"count":4,"seed":2}})", "csv", &out, &passed) ==
          SSC_OK);
  const std::string csv = take(out);
  CHECK(passed == 1);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(ssc_run_experiment("{}", "xml", &out, &passed) != SSC_OK);

  REQUIRE(ssc_reproduce("appendix-b", &out) == SSC_OK);
  const json b = json::parse(take(out));
  CHECK(b["lhs"] == 6.0);
  CHECK(b["rhs"] == 2.0);
  REQUIRE(ssc_reproduce("figure-example", &out) == SSC_OK);
  CHECK(json::parse(take(out))["gaps"] == json({1.0, 0.0, 2.0, 7.0}));
}
