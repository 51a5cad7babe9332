// Command-line front end over the C interface.
//
// Exit codes: 0 success, 1 verification failure, 2 configuration or I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "ssc/ssc.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

struct Globals {
  std::uint64_t seed = 0;
  std::size_t budget = 1'000'000;
  double tolerance = 1e-9;
  std::string format = "json";
  std::string out;
};

struct CString {
  char* ptr = nullptr;
  ~CString() { ssc_string_free(ptr); }
  std::string str() const { return ptr ? ptr : ""; }
};

struct InstanceHandle {
  ssc_instance* ptr = nullptr;
  ~InstanceHandle() { ssc_instance_destroy(ptr); }
};

int report_status(ssc_status st, const char* what) {
  std::cerr << "ssc: " << what << ": " << ssc_status_string(st) << ": " << ssc_last_error()
            << "\n";
  return st == SSC_ERR_REFERENCE_MISMATCH ? kExitFailed : kExitConfig;
}

std::optional<std::string> read_file(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return kExitOk;
  }
  std::ofstream out(g.out, std::ios::binary);
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) {
    std::cerr << "ssc: cannot write " << g.out << "\n";
    return kExitConfig;
  }
  return kExitOk;
}

int load_instance(const std::string& path, InstanceHandle& handle) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << "ssc: cannot read " << path << "\n";
    return kExitConfig;
  }
  const ssc_status st = ssc_instance_from_json(text->c_str(), &handle.ptr);
  return st == SSC_OK ? kExitOk : report_status(st, path.c_str());
}

std::string pretty(const std::string& json) { return Json::parse(json).dump(2); }

struct PolicyArgs {
  std::string policy = "greedy";
  double alpha = 1.0;
  std::string selector;

  void attach(CLI::App* cmd) {
    cmd->add_option("--policy", policy, "greedy or optimal")
        ->check(CLI::IsMember({"greedy", "optimal"}));
    attach_selector(cmd);
  }
  void attach_selector(CLI::App* cmd) {
    cmd->add_option("--alpha", alpha, "approximation factor of the greedy choice (>= 1)");
    cmd->add_option("--selector", selector, "exact or adversarial (default by alpha)")
        ->check(CLI::IsMember({"exact", "adversarial"}));
  }
  void fill(Json& doc) const {
    doc["policy"] = policy;
    doc["alpha"] = alpha;
    if (!selector.empty()) doc["selector"] = selector;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive greedy and optimal policies for stochastic submodular cover, "
               "with exhaustive verification of the approximation bound"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--budget", g.budget, "enumeration budget");
  app.add_option("--tolerance", g.tolerance, "verification tolerance");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "write output to a file");

  int code = kExitOk;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  std::string gen_kind = "coverage";
  std::size_t gen_n = 4, gen_k = 2, gen_m = 6;
  double cost_lo = 1.0, cost_hi = 10.0, density = 0.35;
  bool real_valued = false;
  gen->add_option("--kind", gen_kind, "coverage, truncated_additive or classical_set_cover")
      ->check(CLI::IsMember({"coverage", "truncated_additive", "classical_set_cover"}));
  gen->add_option("--n", gen_n, "items");
  gen->add_option("--k", gen_k, "states per item");
  gen->add_option("--m", gen_m, "ground elements");
  gen->add_option("--cost-lo", cost_lo);
  gen->add_option("--cost-hi", cost_hi);
  gen->add_option("--density", density);
  gen->add_flag("--real", real_valued, "real-valued weights or gains");
  gen->callback([&] {
    const Json cfg = {{"kind", gen_kind},     {"n", gen_n},          {"k", gen_k},
                      {"m", gen_m},           {"cost_lo", cost_lo},  {"cost_hi", cost_hi},
                      {"density", density},   {"integer_valued", !real_valued},
                      {"seed", g.seed}};
    InstanceHandle inst;
    ssc_status st = ssc_generate(cfg.dump().c_str(), &inst.ptr);
    if (st != SSC_OK) {
      code = report_status(st, "gen");
      return;
    }
    CString text;
    st = ssc_instance_to_json(inst.ptr, &text.ptr);
    code = st == SSC_OK ? emit(g, pretty(text.str())) : report_status(st, "gen");
  });

  // validate
  auto* validate = app.add_subcommand("validate", "check the modelling assumptions");
  std::string validate_path;
  validate->add_option("instance", validate_path, "instance JSON ('-' for stdin)")->required();
  validate->callback([&] {
    InstanceHandle inst;
    if ((code = load_instance(validate_path, inst)) != kExitOk) return;
    CString result;
    const ssc_status st = ssc_validate(inst.ptr, g.budget, g.seed, &result.ptr);
    if (st != SSC_OK) {
      code = report_status(st, "validate");
      return;
    }
    const Json doc = Json::parse(result.str());
    code = emit(g, doc.dump(2));
    if (code == kExitOk && !doc["ok"].get<bool>()) code = kExitFailed;
  });

  // solve
  auto* solve = app.add_subcommand("solve", "build a policy tree and its expected cost");
  std::string solve_path;
  PolicyArgs solve_args;
  bool emit_tree = false;
  solve->add_option("instance", solve_path, "instance JSON ('-' for stdin)")->required();
  solve_args.attach(solve);
  solve->add_flag("--emit-tree", emit_tree, "include the decision tree");
  solve->callback([&] {
    InstanceHandle inst;
    if ((code = load_instance(solve_path, inst)) != kExitOk) return;
    Json options = {{"budget", g.budget}, {"emit_tree", emit_tree}};
    solve_args.fill(options);
    CString result;
    const ssc_status st = ssc_solve(inst.ptr, options.dump().c_str(), &result.ptr);
    code = st == SSC_OK ? emit(g, pretty(result.str())) : report_status(st, "solve");
  });

  // eval
  auto* eval = app.add_subcommand("eval", "expected cost by enumeration and Monte Carlo");
  std::string eval_path;
  PolicyArgs eval_args;
  std::string method = "both";
  std::size_t trials = 100000;
  eval->add_option("instance", eval_path, "instance JSON ('-' for stdin)")->required();
  eval_args.attach(eval);
  eval->add_option("--method", method, "exact, mc or both")
      ->check(CLI::IsMember({"exact", "mc", "both"}));
  eval->add_option("--trials", trials, "Monte Carlo trials");
  eval->callback([&] {
    InstanceHandle inst;
    if ((code = load_instance(eval_path, inst)) != kExitOk) return;
    Json options = {{"budget", g.budget}, {"method", method}, {"trials", trials},
                    {"seed", g.seed}};
    eval_args.fill(options);
    CString result;
    const ssc_status st = ssc_evaluate(inst.ptr, options.dump().c_str(), &result.ptr);
    code = st == SSC_OK ? emit(g, pretty(result.str())) : report_status(st, "eval");
  });

  // verify
  auto* verify = app.add_subcommand("verify", "check the revenue lemmas and the bound");
  std::string verify_path;
  PolicyArgs verify_args;
  std::string lemmas = "all";
  std::size_t corpus = 0, n_max = 5, k_max = 3, m_max = 8;
  bool keep_checks = false;
  verify->add_option("instance", verify_path, "instance JSON (omit with --corpus)");
  verify_args.attach_selector(verify);
  verify->add_option("--lemmas", lemmas, "all or a list of L1..L6,T1");
  verify->add_option("--corpus", corpus, "verify a generated corpus of this size");
  verify->add_option("--n-max", n_max);
  verify->add_option("--k-max", k_max);
  verify->add_option("--m-max", m_max);
  verify->add_flag("--keep-checks", keep_checks, "list every instantiated check");
  verify->callback([&] {
    const bool single = !verify_path.empty();
    if (single == (corpus > 0)) {
      std::cerr << "ssc: verify needs exactly one of an instance path or --corpus\n";
      code = kExitConfig;
      return;
    }
    if (single && g.format == "json") {
      InstanceHandle inst;
      if ((code = load_instance(verify_path, inst)) != kExitOk) return;
      Json options = {{"lemmas", lemmas},
                      {"tolerance", g.tolerance},
                      {"budget", g.budget},
                      {"keep_checks", keep_checks}};
      verify_args.fill(options);
      options.erase("policy");
      CString report;
      int passed = 0;
      const ssc_status st = ssc_verify(inst.ptr, options.dump().c_str(), &report.ptr, &passed);
      if (st != SSC_OK) {
        code = report_status(st, "verify");
        return;
      }
      code = emit(g, pretty(report.str()));
      if (code == kExitOk && !passed) code = kExitFailed;
      return;
    }
    Json cfg = {{"schema", 1},
                {"alphas", {verify_args.alpha}},
                {"lemmas", lemmas},
                {"tolerance", g.tolerance},
                {"budget", g.budget}};
    if (!verify_args.selector.empty()) cfg["selector"] = verify_args.selector;
    if (single) {
      const auto text = read_file(verify_path);
      if (!text) {
        std::cerr << "ssc: cannot read " << verify_path << "\n";
        code = kExitConfig;
        return;
      }
      try {
        cfg["instances"] = Json::array({Json::parse(*text)});
      } catch (const nlohmann::json::exception& ex) {
        std::cerr << "ssc: " << verify_path << ": " << ex.what() << "\n";
        code = kExitConfig;
        return;
      }
    } else {
      cfg["corpus"] = {{"count", corpus}, {"seed", g.seed},   {"n_max", n_max},
                       {"k_max", k_max},  {"m_max", m_max}};
    }
    CString report;
    int passed = 0;
    const ssc_status st =
        ssc_run_experiment(cfg.dump().c_str(), g.format.c_str(), &report.ptr, &passed);
    if (st != SSC_OK) {
      code = report_status(st, "verify");
      return;
    }
    code = emit(g, report.str());
    if (code == kExitOk && !passed) code = kExitFailed;
  });

  // repro
  auto* repro = app.add_subcommand("repro", "reproduce a fixed worked example");
  std::string which;
  repro->add_option("example", which, "figure-example or appendix-b")
      ->required()
      ->check(CLI::IsMember({"figure-example", "appendix-b"}));
  repro->callback([&] {
    CString report;
    const ssc_status st = ssc_reproduce(which.c_str(), &report.ptr);
    code = st == SSC_OK ? emit(g, report.str()) : report_status(st, which.c_str());
  });

  // report
  auto* report_cmd = app.add_subcommand("report", "run an experiment from a config file");
  std::string config_path;
  report_cmd->add_option("config", config_path, "experiment config JSON ('-' for stdin)")
      ->required();
  report_cmd->callback([&] {
    const auto text = read_file(config_path);
    if (!text) {
      std::cerr << "ssc: cannot read " << config_path << "\n";
      code = kExitConfig;
      return;
    }
    CString report;
    int passed = 0;
    const ssc_status st =
        ssc_run_experiment(text->c_str(), g.format.c_str(), &report.ptr, &passed);
    if (st != SSC_OK) {
      code = report_status(st, config_path.c_str());
      return;
    }
    code = emit(g, report.str());
    if (code == kExitOk && !passed) code = kExitFailed;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }
  return code;
}
