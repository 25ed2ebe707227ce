#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dualpcf/analysis.hpp"
#include "dualpcf/corpus.hpp"
#include "dualpcf/report.hpp"
#include "dualpcf/syntax.hpp"

using namespace dualpcf;
using nlohmann::json;

namespace {

// Exit codes depend on the outcome category only.
constexpr int kOk = 0;
constexpr int kInvalid = 1;       // parse or type error, unreadable input
constexpr int kBudget = 2;        // step budget or cost ceiling
constexpr int kUndetermined = 3;  // conditional on ⊥
constexpr int kVerifyFailed = 4;  // a verification case failed

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::optional<std::string> read_source(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Prints the diagnostic and returns nullopt on failure.
std::optional<CorpusProgram> load(const std::string& label, const std::string& source) {
  try {
    return load_program(label, source);
  } catch (const ParseError& e) {
    std::cerr << label << ":" << e.loc().line << ":" << e.loc().column << ": parse error: " << e.message() << "\n";
  } catch (const TypeError& e) {
    std::cerr << label << ":" << e.loc().line << ":" << e.loc().column << ": type error ("
              << type_error_kind_name(e.kind()) << "): " << e.message() << "\n";
  } catch (const std::exception& e) {
    std::cerr << label << ": error: " << e.what() << "\n";
  }
  return std::nullopt;
}

std::optional<CorpusProgram> load_input(const std::string& path, const std::string& expr) {
  if (!expr.empty()) return load("<expr>", expr);
  auto src = read_source(path);
  if (!src) {
    std::cerr << path << ": cannot read file\n";
    return std::nullopt;
  }
  return load(path, *src);
}

int exit_code_of(const RunReport& r) {
  if (r.status == "undetermined") return kUndetermined;
  if (r.budget_exhausted || !r.reached) return kBudget;
  return kOk;
}

// The value as the user sees it: an interval for π, a dual for δ.
std::string rendered(const RunReport& r, const Outcome* o) {
  if (r.status == "undetermined") return "undetermined";
  if (r.status == "budget-exhausted") return "budget exhausted";
  if (o && o->value) {
    if (auto d = o->dual()) return d->to_string();
    if (auto i = o->interval()) return i->to_string();
  }
  return r.final_text;
}

json eval_json(const RunReport& r) {
  json j;
  if (r.final_value) {
    j = dual_json(*r.final_value);
  } else {
    j["std"] = nullptr;
    j["inf"] = nullptr;
  }
  j["cost"] = r.cost;
  j["steps"] = r.steps;
  j["type"] = r.type;
  j["status"] = r.status;
  j["value"] = r.final_text;
  j["reached"] = r.reached;
  return j;
}

struct Run {
  RunReport report;
  Outcome outcome;
};

Run run_program(const CorpusProgram& p, std::optional<std::uint64_t> cost, std::optional<Rational> width,
                std::uint64_t budget, std::uint64_t max_cost) {
  auto t0 = Clock::now();
  MachineOptions opts{budget};
  if (!cost && !width) {
    cost = p.fixed_cost;
    width = p.target_width;
  }
  if (width && !cost) {
    RefineResult rr = eval_refine(p.program.expr, *width, max_cost, opts);
    return {report_from_refine(p.name, p.program.type, rr, budget, ms_since(t0)), rr.outcome};
  }
  Machine m(opts);
  Outcome o = m.eval_at_cost(p.program.expr, cost.value_or(4));
  return {report_from_outcome(p.name, p.program.type, o, budget, ms_since(t0)), o};
}

void print_run(const Run& run, bool as_json, bool with_name) {
  const RunReport& r = run.report;
  if (as_json) {
    json j = eval_json(r);
    if (with_name) {
      j = to_json(r);
      j["value"] = rendered(r, &run.outcome);
    }
    std::cout << j.dump() << "\n";
    return;
  }
  if (with_name) std::cout << r.program << ": ";
  std::cout << rendered(r, &run.outcome) << "\n";
  std::cerr << (with_name ? "  " : "") << "type " << r.type << ", cost " << r.cost << ", steps " << r.steps
            << (r.reached ? "" : ", target not reached") << ", " << static_cast<long>(r.wall_ms) << " ms\n";
}

// ---------------------------------------------------------------------------

struct VerifyCase {
  std::string suite, name, verdict, witness;
  std::size_t samples = 0;
};

void emit(const VerifyCase& c, std::mutex& mu) {
  std::lock_guard lock(mu);
  json j = {{"suite", c.suite}, {"case", c.name}, {"verdict", c.verdict}, {"witness", c.witness},
            {"samples", c.samples}};
  std::cout << j.dump() << std::endl;
}

std::vector<VerifyCase> verify_relations(std::uint64_t seed, std::size_t samples) {
  std::vector<VerifyCase> out;
  std::mt19937_64 rng(seed);
  auto rs = sample_ratios(rng);
  TripleSampler sampler(rng());
  std::size_t per_r = (samples + rs.size() - 1) / rs.size();
  for (const auto& c : constant_cases()) {
    auto v = logically_consistent(c.type, c.subject, rs, per_r, sampler);
    bool enough = v.samples >= per_r * rs.size();
    out.push_back({"relations", c.name, !v.holds ? "fail" : enough ? "pass" : "inconclusive", v.counterexample,
                   v.samples});
  }
  for (auto [name, src] : {std::pair{"abs", "fun x: delta. max(x, 0 - x)"},
                           std::pair{"constant", "fun x: delta. [3/4,3/4] + eps [0,0]"}}) {
    auto f = elaborate(parse(src, {true})).expr;
    auto v = logically_consistent(type_of(f), term_subject(f), rs, per_r, sampler);
    out.push_back({"relations", name, v.holds ? "pass" : "fail", v.counterexample, v.samples});
  }
  // the mutant must be refuted
  auto broken = host_subject([](const std::vector<Ground>& a) {
    return Ground(broken_dual_max(std::get<DualInterval>(a[0]), std::get<DualInterval>(a[1])));
  });
  auto v = logically_consistent(parse_type("delta -> delta -> delta"), broken, rs, per_r, sampler);
  out.push_back({"relations", "broken_max_is_refuted", v.holds ? "fail" : "pass", v.counterexample, v.samples});
  return out;
}

std::vector<VerifyCase> verify_soundness() {
  std::vector<VerifyCase> out;
  for (const auto& f : first_order_functions()) {
    auto e = elaborate(parse(f.source)).expr;
    for (const auto& [x, dx] : soundness_points()) {
      std::string name = f.name + " x=" + x.get_str() + " dx=" + dx.get_str();
      try {
        auto v = check_L_soundness(e, x, dx);
        std::string witness = v.holds ? "L " + v.machine.front().second.to_string() + " ⊇ differences " +
                                            v.oracle.hull.to_string()
                                      : v.violation;
        out.push_back({"soundness", name, v.holds ? "pass" : "fail", witness, v.oracle.quotients.size()});
      } catch (const OracleInconclusive& ex) {
        out.push_back({"soundness", name, "inconclusive", ex.what(), 0});
      }
    }
  }
  return out;
}

std::vector<VerifyCase> verify_robustness(std::uint64_t seed, std::size_t samples) {
  std::vector<VerifyCase> out;
  std::mt19937_64 rng(seed);
  for (const auto& f : first_order_functions()) {
    auto v = check_standard_robustness(elaborate(parse(f.source)).expr, samples, rng);
    out.push_back({"robustness", f.name, v.holds ? "pass" : "fail", v.violation, v.samples});
  }
  return out;
}

std::vector<VerifyCase> verify_refinement(std::uint64_t max_cost, std::uint64_t budget) {
  std::vector<VerifyCase> out;
  std::vector<std::uint64_t> costs;
  for (std::uint64_t n = 0; n <= max_cost; ++n) costs.push_back(n);
  for (const auto& p : load_corpus()) {
    auto v = check_monotone_refinement(p.program.expr, costs, {budget});
    std::string witness = v.violation;
    if (v.holds) {
      witness = std::to_string(costs.size() - v.exhausted) + " costs evaluated";
      if (v.exhausted) witness += ", " + std::to_string(v.exhausted) + " beyond the step budget";
    }
    out.push_back({"refinement", p.name, v.holds ? "pass" : "fail", witness, costs.size() - v.exhausted});
  }
  return out;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, std::size_t samples, std::uint64_t max_cost,
               std::uint64_t budget) {
  auto t0 = Clock::now();
  std::vector<VerifyCase> all;
  std::mutex mu;
  auto take = [&](std::vector<VerifyCase> cs) {
    for (auto& c : cs) {
      emit(c, mu);
      all.push_back(std::move(c));
    }
  };
  bool every = suite == "all";
  if (every || suite == "relations") take(verify_relations(seed, samples));
  if (every || suite == "soundness") take(verify_soundness());
  if (every || suite == "robustness") take(verify_robustness(seed, 100));
  if (every || suite == "refinement") take(verify_refinement(max_cost, budget));
  std::map<std::string, std::map<std::string, int>> tally;
  for (const auto& c : all) ++tally[c.suite][c.verdict];
  bool failed = false;
  for (const auto& [s, counts] : tally) {
    std::cerr << s << ":";
    for (const auto& [verdict, n] : counts) std::cerr << " " << n << " " << verdict;
    std::cerr << "\n";
    failed = failed || counts.count("fail") || counts.count("inconclusive");
  }
  std::cerr << "verify finished in " << static_cast<long>(ms_since(t0)) << " ms\n";
  return failed ? kVerifyFailed : kOk;
}

// ---------------------------------------------------------------------------

int cmd_examples_run(const std::string& which, unsigned jobs, bool as_json, bool advanced, std::uint64_t budget,
                     std::uint64_t max_cost) {
  std::vector<CorpusProgram> progs;
  try {
    for (auto& p : load_corpus())
      if ((which == "all" && (advanced || !p.advanced)) || p.name == which) progs.push_back(std::move(p));
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  }
  if (progs.empty()) {
    std::cerr << "no corpus program named '" << which << "'\n";
    return kInvalid;
  }
  std::vector<std::optional<Run>> runs(progs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < progs.size();)
      runs[i] = run_program(progs[i], std::nullopt, std::nullopt, budget, max_cost);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(1u, jobs); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  int code = kOk;
  for (const auto& r : runs) {
    print_run(*r, as_json, true);
    code = std::max(code, exit_code_of(r->report));
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpreter and conformance checks for Dual PCF"};
  app.require_subcommand(1);

  std::string path, expr;
  std::optional<std::uint64_t> cost;
  std::optional<std::string> width;
  std::uint64_t budget = default_step_budget();
  std::uint64_t max_cost = 64;
  std::string format = "text";

  auto* check = app.add_subcommand("check", "Parse and type-check a program, print its type");
  check->add_option("file", path, "Source file, - for stdin");
  check->add_option("-e,--expr", expr, "Program text instead of a file");

  auto* eval = app.add_subcommand("eval", "Evaluate a program");
  eval->add_option("file", path, "Source file, - for stdin");
  eval->add_option("-e,--expr", expr, "Program text instead of a file");
  auto* cost_opt = eval->add_option("--cost", cost, "Evaluate once at this cost index");
  eval->add_option("--width", width, "Refine with costs 1, 2, 4, ... until both widths are within w")
      ->excludes(cost_opt);
  eval->add_option("--budget", budget, "Step budget per evaluation (default from DUALPCF_BUDGET or 10^7)");
  eval->add_option("--max-cost", max_cost, "Largest cost tried by --width");
  eval->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string suite = "all";
  std::uint64_t seed = 1;
  std::size_t samples = 1000;
  std::uint64_t refine_max = 12;
  auto* verify = app.add_subcommand("verify", "Run the conformance suites, JSON lines on stdout");
  verify->add_option("--suite", suite, "relations, soundness, robustness, refinement or all")
      ->check(CLI::IsMember({"relations", "soundness", "robustness", "refinement", "all"}));
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--samples", samples, "Conclusive samples per constant");
  verify->add_option("--max-cost", refine_max, "Refinement suite checks costs 0..n");
  verify->add_option("--budget", budget, "Step budget per evaluation");

  auto* examples = app.add_subcommand("examples", "The bundled example corpus");
  examples->require_subcommand(1);
  examples->add_subcommand("list", "List the programs");
  auto* run = examples->add_subcommand("run", "Run a program, or all of them");
  std::string which;
  unsigned jobs = 1;
  bool advanced = false;
  run->add_option("name", which, "Program name or all")->required();
  run->add_option("--jobs", jobs, "Programs evaluated concurrently");
  run->add_flag("--advanced", advanced, "Include programs tagged advanced in all");
  run->add_option("--budget", budget, "Step budget per evaluation");
  run->add_option("--max-cost", max_cost, "Largest cost tried when refining");
  run->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  CLI11_PARSE(app, argc, argv);

  auto need_input = [&]() -> std::optional<CorpusProgram> {
    if (path.empty() && expr.empty()) {
      std::cerr << "no program given\n";
      return std::nullopt;
    }
    return load_input(path, expr);
  };

  if (check->parsed()) {
    auto p = need_input();
    if (!p) return kInvalid;
    std::cout << p->program.type->to_string() << "\n";
    return kOk;
  }
  if (eval->parsed()) {
    auto p = need_input();
    if (!p) return kInvalid;
    std::optional<Rational> w;
    if (width) {
      try {
        w = parse_rational(*width);
      } catch (const std::exception&) {
        std::cerr << "invalid width '" << *width << "'\n";
        return kInvalid;
      }
    }
    Run r = run_program(*p, cost, w, budget, max_cost);
    print_run(r, format == "json", false);
    return exit_code_of(r.report);
  }
  if (verify->parsed()) return cmd_verify(suite, seed, samples, refine_max, budget);
  if (examples->got_subcommand("list")) {
    for (const auto& s : corpus_sources()) {
      auto p = load_program(std::string(s.name), std::string(s.text));
      std::cout << p.name << (p.advanced ? " [advanced]" : "") << "  " << p.description << "\n";
    }
    return kOk;
  }
  if (run->parsed()) return cmd_examples_run(which, jobs, format == "json", advanced, budget, max_cost);
  return kOk;
}
