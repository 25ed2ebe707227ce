#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "dualpcf/analysis.hpp"
#include "dualpcf/corpus.hpp"
#include "dualpcf/report.hpp"
#include "dualpcf/syntax.hpp"

using namespace dualpcf;

namespace {

DualInterval du(const char* s) { return parse_dual(s); }
Interval iv(const char* s) { return parse_interval(s); }
ExprPtr prog(const std::string& s) { return elaborate(parse(s, {true})).expr; }

Ground nat(std::uint64_t n) { return std::optional<std::uint64_t>(n); }
Ground nat_bottom() { return std::optional<std::uint64_t>(); }

}  // namespace

TEST_CASE("relation on dual intervals") {
  Rational one(1), half(1, 2);
  // St x2 - St x1 = [1,1]
  DualInterval x1 = du("[0,0] + eps [5,5]"), x2 = du("[1,1] + eps [7,7]");
  CHECK(relation_holds_ground(one, x1, x2, du("[0,1] + eps [1,1]")));
  CHECK(relation_holds_ground(one, x1, x2, du("[-1,2] + eps [0,3]")));
  CHECK_FALSE(relation_holds_ground(one, x1, x2, du("[0,1] + eps [2,2]")));
  CHECK_FALSE(relation_holds_ground(one, x1, x2, du("[0,1/2] + eps [1,1]")));
  CHECK(relation_holds_ground(half, x1, x2, du("[0,1] + eps [2,2]")));
  CHECK(relation_holds_ground(one, x1, x2, DualInterval::bottom()));
  CHECK(relation_holds_ground(one, DualInterval::bottom(), x2, DualInterval::bottom()));
}

TEST_CASE("relation on the other ground types") {
  Rational one(1);
  CHECK_FALSE(relation_holds_ground(one, Ground(iv("[0,0]")), Ground(iv("[1,1]")), Ground(iv("[0,1]"))));
  CHECK(relation_holds_ground(one, Ground(iv("[0,1]")), Ground(iv("[1/2,2]")), Ground(iv("[0,2]"))));
  CHECK(relation_holds_ground(one, nat(3), nat(3), nat(3)));
  CHECK(relation_holds_ground(one, nat(3), nat(3), nat_bottom()));
  CHECK(relation_holds_ground(one, nat_bottom(), nat(3), nat_bottom()));
  CHECK_FALSE(relation_holds_ground(one, nat(3), nat(4), nat_bottom()));
  CHECK_FALSE(relation_holds_ground(one, nat_bottom(), nat(3), nat(3)));
  Ground t = std::optional<bool>(true), b = std::optional<bool>();
  CHECK(relation_holds_ground(one, t, t, b));
  CHECK(relation_holds_ground(one, b, b, b));
}

TEST_CASE("the relation is closed under widening the third component") {
  TripleSampler s(7);
  int held = 0;
  for (int i = 0; i < 3000; ++i) {
    DualInterval x1 = s.random_dual(), x2 = s.random_dual(), x3 = s.random_dual();
    Rational r = s.random_dyadic();
    if (r <= 0) continue;
    if (!relation_holds_ground(r, x1, x2, x3)) continue;
    ++held;
    DualInterval wider(iv_meet(x3.std, s.random_interval()), iv_meet(x3.inf, s.random_interval()));
    CHECK(relation_holds_ground(r, x1, x2, wider));
  }
  CHECK(held > 0);
}

TEST_CASE("sampled triples are related at the argument type") {
  TripleSampler s(11);
  for (const char* ty : {"delta", "pi", "nu", "o"}) {
    TypePtr t = parse_type(ty);
    for (int i = 0; i < 200; ++i) {
      Rational r = dyadic(1 + i % 7, 2);
      Triple tr = s.sample(r, t);
      Machine m;
      auto g = [&](const ExprPtr& e) { return ground_of(m.run(e), *t); };
      auto g1 = g(tr.x1), g2 = g(tr.x2), g3 = g(tr.x3);
      REQUIRE(g1);
      REQUIRE(g2);
      REQUIRE(g3);
      CHECK(relation_holds_ground(r, *g1, *g2, *g3));
    }
  }
}

TEST_CASE("definable functions are logically consistent") {
  TripleSampler sampler(3);
  std::vector<Rational> rs = sample_ratios(sampler.rng());
  CHECK(rs.size() == 5);
  for (const Rational& r : rs) {
    CHECK(r > 0);
    CHECK(r <= 4);
  }
  TypePtr dd = parse_type("delta -> delta");
  for (const char* f : {"fun x: delta. max(x, 0 - x)", "fun x: delta. [2,3] + eps [-1,1]",
                        "fun x: delta. x * x - pr x / 2"}) {
    CAPTURE(f);
    RelationVerdict v = logically_consistent(dd, term_subject(prog(f)), rs, 100, sampler);
    CHECK(v.holds);
    CHECK(v.samples >= 400);
  }
}

TEST_CASE("a broken max is refuted") {
  TripleSampler sampler(1);
  TypePtr t = parse_type("delta -> delta -> delta");
  Subject broken = host_subject([](const std::vector<Ground>& a) -> Ground {
    return broken_dual_max(std::get<DualInterval>(a[0]), std::get<DualInterval>(a[1]));
  });
  RelationVerdict v = logically_consistent(t, broken, sample_ratios(sampler.rng()), 1000, sampler);
  CHECK_FALSE(v.holds);
  CHECK_FALSE(v.counterexample.empty());
  Subject good = host_subject([](const std::vector<Ground>& a) -> Ground {
    return dual_max(std::get<DualInterval>(a[0]), std::get<DualInterval>(a[1]));
  });
  CHECK(logically_consistent(t, good, sample_ratios(sampler.rng()), 300, sampler).holds);
}

TEST_CASE("a sample of the constants is logically consistent") {
  TripleSampler sampler(5);
  std::vector<Rational> rs = sample_ratios(sampler.rng());
  std::size_t seen = 0;
  for (const ConstantCase& c : constant_cases()) {
    if (c.name != "+_delta" && c.name != "max_delta" && c.name != "pr_delta" && c.name != "in_delta" &&
        c.name != "Y[o]" && c.name != "succ")
      continue;
    CAPTURE(c.name);
    ++seen;
    RelationVerdict v = logically_consistent(c.type, c.subject, rs, 40, sampler);
    CHECK(v.holds);
  }
  CHECK(seen == 6);
  CHECK(constant_cases().size() == 31);
}

TEST_CASE("finite difference oracle") {
  OracleEstimate a = finite_diff_oracle(prog("fun x: delta. max(x, 0 - x)"), Rational(0), Rational(1));
  CHECK(a.hull == iv("[-1,1]"));
  CHECK(a.levels.size() == 10);
  Rational r = dyadic(1, 12);
  OracleEstimate sq = finite_diff_oracle(prog("fun x: delta. x * x"), Rational(3), Rational(1));
  // (f(y + r) - f(y)) / r = 2y + r with |y - 3| ≤ r
  CHECK(iv_refines(Interval(Rational(6) - r, Rational(6) + 3 * r), sq.hull));
  for (const Quotient& q : sq.quotients) CHECK(q.value.contains(Rational(2 * q.y + q.r)));
}

TEST_CASE("derivative soundness") {
  SoundnessVerdict sq = check_L_soundness(prog("fun x: delta. x * x"), Rational(3), Rational(1));
  CHECK(sq.holds);
  for (const auto& [n, v] : sq.machine) CHECK(v == iv("[6,6]"));
  // sound but not tight
  SoundnessVerdict z =
      check_L_soundness(prog("fun x: delta. max(x, 0 - x) - max(x, 0 - x)"), Rational(0), Rational(1));
  CHECK(z.holds);
  CHECK(z.machine.back().second == iv("[-2,2]"));
  CHECK(z.oracle.hull == iv("[0,0]"));
  SoundnessVerdict p = check_L_soundness(prog("fun x: delta. pr x"), Rational(2), Rational(1));
  CHECK(p.holds);
  CHECK(p.machine.back().second == iv("[0,0]"));
  CHECK(soundness_points().size() == 5);
}

TEST_CASE("monotone refinement") {
  ExprPtr e = prog("int (fun t: pi. in_delta t)");
  RefinementVerdict v = check_monotone_refinement(e, {0, 1, 2, 3, 4, 5});
  CHECK(v.holds);
  CHECK(v.exhausted == 0);
  CHECK(v.results.size() == 6);
  RefinementVerdict w = check_monotone_refinement(e, {0, 1, 2, 3, 4, 5, 6, 7, 8}, {2000});
  CHECK(w.holds);
  CHECK(w.exhausted > 0);
  CHECK(w.exhausted < 9);
  CHECK(ground_refines(Ground(iv("[0,2]")), Ground(iv("[1,1]"))));
  CHECK_FALSE(ground_refines(Ground(iv("[1,1]")), Ground(iv("[0,2]"))));
  CHECK(ground_refines(nat_bottom(), nat(3)));
  CHECK_FALSE(ground_refines(nat(3), nat(4)));
}

TEST_CASE("standard part robustness") {
  std::mt19937_64 rng(9);
  for (const auto& f : first_order_functions()) {
    CAPTURE(f.name);
    RobustnessVerdict v = check_standard_robustness(prog(f.source), 10, rng);
    CHECK(v.holds);
    CHECK(v.samples == 10);
  }
}

TEST_CASE("run reports") {
  auto p = find_corpus_program("int_id");
  REQUIRE(p);
  RefineResult r = eval_refine(p->program.expr, dyadic(1, 6));
  RunReport rep = report_from_refine("int_id", p->program.type, r, kDefaultStepBudget, 1.5);
  CHECK(rep.reached);
  CHECK(widths_non_increasing(rep));
  CHECK(rep.schedule == std::vector<std::uint64_t>{1, 2, 4, 8});
  nlohmann::json j = to_json(rep);
  RunReport back = report_from_json(j);
  CHECK(back.program == "int_id");
  CHECK(back.schedule == rep.schedule);
  CHECK(back.final_value == rep.final_value);
  CHECK(back.cost == rep.cost);
  CHECK(back.steps == rep.steps);
  CHECK(to_json(back) == j);
  CHECK(interval_json(Interval::bottom())["lo"] == "-inf");
  CHECK(interval_from_json(interval_json(iv("[1/3,2]"))) == iv("[1/3,2]"));
  CHECK(dual_from_json(dual_json(du("[0,1] + eps [-inf,inf]"))) == du("[0,1] + eps [-inf,inf]"));

  RunReport fake = rep;
  std::swap(fake.widths.front(), fake.widths.back());
  CHECK_FALSE(widths_non_increasing(fake));
}
