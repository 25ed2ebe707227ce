// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dualpcf/analysis.hpp"
#include "dualpcf/corpus.hpp"
#include "dualpcf/syntax.hpp"

using namespace dualpcf;

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
  bool ok = true;
  std::ostringstream note;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) note << "failed: " << what << "; ";
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  auto start = Clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  double s = std::chrono::duration<double>(Clock::now() - start).count();
  if (!c.ok) ++failures;
  std::cout << (c.ok ? "PASS" : "FAIL") << " " << id << " " << title << " (" << s << " s) " << c.note.str()
            << std::endl;
}

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

ExprPtr prog(const std::string& src) { return elaborate(parse(src, {true})).expr; }

Outcome at(const ExprPtr& e, std::uint64_t n) { return Machine().eval_at_cost(e, n); }

ExprPtr corpus(const std::string& name) {
  auto p = find_corpus_program(name);
  if (!p) throw std::runtime_error("missing corpus program " + name);
  return p->program.expr;
}

// Bisection rules expanded on host functions.
using HostFn = std::function<Interval(const Interval&)>;
Interval bisect_oracle(const HostFn& f, unsigned m, bool sup) {
  if (m == 0) return f(Interval(Rational(0), Rational(1)));
  HostFn left = [f](const Interval& x) { return f(iv_div_nat(x, 2)); };
  HostFn right = [f](const Interval& x) { return f(iv_div_nat(x + Interval(Rational(1)), 2)); };
  Interval a = bisect_oracle(left, m - 1, sup), b = bisect_oracle(right, m - 1, sup);
  return sup ? iv_max(a, b) : iv_div_nat(a + b, 2);
}

// Cubic with coefficients k/4, k in -4..4.
struct Poly {
  std::vector<Rational> c;
  std::string source() const {
    auto lit = [](const Rational& q) {
      return q < 0 ? "(0 - " + Rational(-q).get_str() + ")" : q.get_str();
    };
    return lit(c[0]) + " + t * (" + lit(c[1]) + " + t * (" + lit(c[2]) + " + t * " + lit(c[3]) + "))";
  }
  Rational integral() const {
    Rational s = 0;
    for (std::size_t i = 0; i < c.size(); ++i) s += c[i] / Rational(long(i + 1));
    return s;
  }
};

Poly random_poly(std::mt19937_64& rng) {
  Poly p;
  for (int i = 0; i < 4; ++i) p.c.push_back(make_rational(std::uniform_int_distribution<long>(-4, 4)(rng), 4));
  return p;
}

bool small(const Interval& i, const Rational& w) { return iv_width(i) <= ExtendedRational(w); }

}  // namespace

int main() {
  criterion(1, "abs subgradient is exactly [-1,1] at every cost >= 1", [](Check& c) {
    auto start = Clock::now();
    ExprPtr e = prog("L[delta] (fun x: delta. max(x, 0 - x)) 0 1");
    for (std::uint64_t n = 1; n <= 12; ++n) {
      Outcome o = at(e, n);
      c.require(o.ok() && *o.interval() == parse_interval("[-1,1]"), "cost " + std::to_string(n));
    }
    double s = seconds_since(start);
    c.require(s < 1.0, "runtime under 1 s");
  });

  criterion(2, "product rule normalizes in at most 3 steps", [](Check& c) {
    Outcome o = Machine().run(prog("([2,2] + eps [3,3]) * ([5,5] + eps [7,7])"));
    c.require(o.ok() && *o.dual() == parse_dual("[10,10] + eps [29,29]"), "value 10 + eps 29");
    c.require(o.steps <= 3, "steps " + std::to_string(o.steps));
    c.note << "steps " << o.steps << "; ";
  });

  criterion(3, "dyadic integration matches oracle and closed form for m = 0..10", [](Check& c) {
    auto start = Clock::now();
    ExprPtr e = prog("int (fun t: pi. in_delta t)");
    HostFn id = [](const Interval& x) { return x; };
    for (unsigned m = 0; m <= 10; ++m) {
      Interval closed(Rational(1, 2) - dyadic(1, m + 1), Rational(1, 2) + dyadic(1, m + 1));
      c.require(bisect_oracle(id, m, false) == closed, "oracle at m = " + std::to_string(m));
      Outcome o = at(e, m);
      c.require(o.ok() && *o.dual() == DualInterval(closed, Interval(Rational(0))), "m = " + std::to_string(m));
    }
    c.require(seconds_since(start) < 5.0, "runtime under 5 s");
  });

  criterion(4, "supremum matches [1 - 2^-m, 1] for m = 0..10", [](Check& c) {
    ExprPtr e = prog("sup (fun t: pi. in_delta t)");
    HostFn id = [](const Interval& x) { return x; };
    for (unsigned m = 0; m <= 10; ++m) {
      Interval closed(Rational(1) - dyadic(1, m), Rational(1));
      c.require(bisect_oracle(id, m, true) == closed, "oracle at m = " + std::to_string(m));
      Outcome o = at(e, m);
      c.require(o.ok() && *o.dual() == DualInterval(closed, Interval(Rational(0))), "m = " + std::to_string(m));
    }
  });

  criterion(5, "functional derivative at y = 1/2 reaches width 1/256 around 1/4", [](Check& c) {
    auto start = Clock::now();
    // 2 y^2 k(y) with k the identity
    Rational y(1, 2), expected = 2 * y * y * y;
    RefineResult r = eval_refine(corpus("chebyshev_functional"), dyadic(1, 8));
    c.require(r.reached, "width reached");
    Interval v = *r.outcome.interval();
    c.require(v.contains(expected), "contains 1/4");
    c.require(small(v, dyadic(1, 8)), "width");
    c.note << v.to_string() << " at cost " << r.cost_used << "; ";
    c.require(seconds_since(start) < 10.0, "runtime under 10 s");
  });

  criterion(6, "L int f g and int g agree for 10 random cubic pairs", [](Check& c) {
    auto start = Clock::now();
    std::mt19937_64 rng(6);
    const Rational target = dyadic(1, 8);
    std::uint64_t worst = 0;
    for (int i = 0; i < 10; ++i) {
      Poly f = random_poly(rng), g = random_poly(rng);
      ExprPtr lhs = prog("L[pi -> delta] (fun h: pi -> delta. int h) (fun t: pi. " + f.source() +
                         ") (fun t: pi. " + g.source() + ")");
      ExprPtr rhs = prog("int (fun t: pi. " + g.source() + ")");
      Rational exact = g.integral();
      bool done = false;
      for (std::uint64_t n = 0; n <= 16 && !done; ++n) {
        Outcome a = at(lhs, n), b = at(rhs, n);
        if (!a.ok() || !b.ok()) {
          c.require(false, "evaluation failed for pair " + std::to_string(i));
          return;
        }
        Interval x = *a.interval(), y = *b.interval();
        c.require(iv_consistent(x, y), "intersect at cost " + std::to_string(n) + " for pair " + std::to_string(i));
        c.require(x.contains(exact) && y.contains(exact), "contain the exact integral, pair " + std::to_string(i));
        if (small(x, target) && small(y, target)) {
          done = true;
          worst = std::max(worst, n);
        }
      }
      c.require(done, "width below 1/256 by cost 16 for pair " + std::to_string(i));
    }
    c.note << "largest cost " << worst << "; ";
    c.require(seconds_since(start) < 30.0, "runtime under 30 s");
  });

  criterion(7, "Picard program reaches width 1/64 around 1/2 within cost 12", [](Check& c) {
    auto start = Clock::now();
    ExprPtr e = corpus("ivp_const_field");
    bool done = false;
    for (std::uint64_t n = 0; n <= 12 && !done; ++n) {
      Outcome o = at(e, n);
      c.require(o.ok(), "evaluation at cost " + std::to_string(n));
      if (!o.ok()) return;
      Interval v = *o.interval();
      c.require(v.contains(Rational(1, 2)), "contains 1/2 at cost " + std::to_string(n));
      if (small(v, dyadic(1, 6))) {
        done = true;
        c.note << v.to_string() << " at cost " << n << "; ";
      }
    }
    c.require(done, "width 1/64 within cost 12");
    c.require(seconds_since(start) < 60.0, "runtime under 60 s");
  });

  criterion(8, "every corpus program refines monotonically over costs 0..12", [](Check& c) {
    std::vector<std::uint64_t> costs;
    for (std::uint64_t n = 0; n <= 12; ++n) costs.push_back(n);
    std::size_t exhausted = 0, evaluated = 0;
    for (const auto& p : load_corpus()) {
      RefinementVerdict v = check_monotone_refinement(p.program.expr, costs);
      c.require(v.holds, p.name + ": " + v.violation);
      exhausted += v.exhausted;
      evaluated += costs.size() - v.exhausted;
      if (v.exhausted) c.note << p.name << " exhausted the step budget at " << v.exhausted << " costs; ";
    }
    c.note << evaluated << " results compared, 0 violations; ";
  });

  criterion(9, "logical relation suite with 1000 samples per constant and a refuted mutant", [](Check& c) {
    auto start = Clock::now();
    std::mt19937_64 rng(1);
    auto rs = sample_ratios(rng);
    TripleSampler sampler(rng());
    std::size_t per_r = (1000 + rs.size() - 1) / rs.size();
    std::size_t cases = 0;
    for (const auto& k : constant_cases()) {
      RelationVerdict v = logically_consistent(k.type, k.subject, rs, per_r, sampler);
      c.require(v.holds, k.name + ": " + v.counterexample);
      c.require(v.samples >= 1000, k.name + " has " + std::to_string(v.samples) + " conclusive samples");
      ++cases;
    }
    Subject broken = host_subject([](const std::vector<Ground>& a) {
      return Ground(broken_dual_max(std::get<DualInterval>(a[0]), std::get<DualInterval>(a[1])));
    });
    RelationVerdict m = logically_consistent(parse_type("delta -> delta -> delta"), broken, rs, per_r, sampler);
    c.require(!m.holds, "broken max refuted");
    c.note << cases << " constants; ";
    c.require(seconds_since(start) < 120.0, "runtime under 120 s");
  });

  criterion(10, "derivative soundness on 20 functions at 5 points", [](Check& c) {
    auto start = Clock::now();
    std::size_t checked = 0;
    for (const auto& f : first_order_functions()) {
      ExprPtr e = prog(f.source);
      for (const auto& [x, dx] : soundness_points()) {
        SoundnessVerdict v = check_L_soundness(e, x, dx);
        c.require(v.holds, f.name + ": " + v.violation);
        ++checked;
      }
    }
    c.require(checked == 100, "100 checks");
    c.require(seconds_since(start) < 120.0, "runtime under 120 s");
  });

  criterion(11, "fixed points at cost 0 are the bottom dual", [](Check& c) {
    for (const char* f : {"fun y: delta. y", "fun y: delta. y * y + 1", "fun y: delta. [2,2] + eps [3,3]",
                          "fun y: delta. max(y, 0 - y) / 2", "fun y: delta. int (fun t: pi. in_delta t) + y"}) {
      Outcome o = at(prog(std::string("Y[delta] (") + f + ")"), 0);
      c.require(o.ok() && o.value->is<node::DualLit>() && *o.dual() == DualInterval::bottom(), f);
    }
  });

  return failures ? 1 : 0;
}
