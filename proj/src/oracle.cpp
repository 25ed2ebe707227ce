#include <map>
#include <sstream>

#include "dualpcf/analysis.hpp"
#include "dualpcf/syntax.hpp"

namespace dualpcf {

namespace {

Interval inflate(const Interval& i, const Rational& tol) {
  if (i.is_bottom()) return i;
  return Interval(i.lower() - tol, i.upper() + tol);
}

ExprPtr dual_point(const Rational& x, const Rational& dx) { return mk_dual({Interval(x), Interval(dx)}); }

}  // namespace

OracleEstimate finite_diff_oracle(const ExprPtr& f, const Rational& x, const Rational& dx, const OracleGrid& grid) {
  if (grid.points < 2 || grid.k_min > grid.k_max) throw std::invalid_argument("degenerate oracle grid");
  std::map<Rational, Interval> cache;
  auto standard = [&](const Rational& y) -> Interval {
    if (auto it = cache.find(y); it != cache.end()) return it->second;
    RefineResult rr = eval_refine(mk_app(f, dual_point(y, 0)), grid.eval_width, grid.max_cost, {grid.step_budget});
    auto d = rr.outcome.as_dual();
    if (!rr.reached || !d || iv_width(d->std) > ExtendedRational(grid.eval_width))
      throw OracleInconclusive("St f(" + y.get_str() + ") not refined to width " + grid.eval_width.get_str());
    cache.emplace(y, d->std);
    return d->std;
  };

  OracleEstimate est;
  const long half = (grid.points - 1) / 2;
  for (unsigned k = grid.k_min; k <= grid.k_max; ++k) {
    Rational r = dyadic(1, k);
    Interval level;
    bool first = true;
    for (unsigned j = 0; j < grid.points; ++j) {
      // radius r around x
      Rational y = x + r * Rational(static_cast<long>(j) - half, half == 0 ? 1 : half);
      Interval q = (standard(y + r * dx) - standard(y)) * Interval(Rational(1) / r);
      est.quotients.push_back({y, r, q});
      level = first ? q : iv_meet(level, q);
      first = false;
    }
    est.levels.emplace_back(k, level);
  }
  est.hull = est.levels.back().second;
  return est;
}

SoundnessVerdict check_L_soundness(const ExprPtr& f, const Rational& x, const Rational& dx,
                                   const std::vector<std::uint64_t>& costs, const OracleGrid& grid) {
  SoundnessVerdict v;
  v.oracle = finite_diff_oracle(f, x, dx, grid);
  ExprPtr derivative = mk_apps(mk_deriv({Type::dual()}), {f, mk_iv(Interval(x)), mk_iv(Interval(dx))});
  for (auto n : costs) {
    Machine m({grid.step_budget});
    Outcome o = m.eval_at_cost(derivative, n);
    auto in = o.interval();
    if (!in) {
      v.holds = false;
      v.violation = "no value at cost " + std::to_string(n) + ": " + std::string(status_name(o.status));
      return v;
    }
    v.machine.emplace_back(n, *in);
    if (!iv_refines(inflate(*in, grid.tolerance), v.oracle.hull)) {
      v.holds = false;
      std::ostringstream os;
      os << "cost " << n << ": L gives " << in->to_string() << " but the finite differences span "
         << v.oracle.hull.to_string();
      for (const auto& q : v.oracle.quotients) {
        if (q.r != v.oracle.quotients.back().r) continue;
        if (!iv_refines(inflate(*in, grid.tolerance), q.value)) {
          os << ", e.g. y=" << q.y.get_str() << " r=" << q.r.get_str() << " quotient " << q.value.to_string();
          break;
        }
      }
      v.violation = os.str();
      return v;
    }
  }
  return v;
}

std::vector<std::pair<Rational, Rational>> soundness_points() {
  return {{0, 1}, {Rational(1, 3), 1}, {Rational(-1, 2), 2}, {1, Rational(-3, 4)}, {Rational(5, 4), Rational(1, 2)}};
}

RefinementVerdict check_monotone_refinement(const ExprPtr& e, const std::vector<std::uint64_t>& costs,
                                            MachineOptions opts) {
  RefinementVerdict v;
  TypePtr t = type_of(e);
  std::optional<Ground> prev;
  std::uint64_t prev_cost = 0;
  bool out_of_budget = false;
  for (auto n : costs) {
    if (out_of_budget) {
      ++v.exhausted;
      continue;
    }
    Machine m(opts);
    Outcome o = m.eval_at_cost(e, n);
    v.results.push_back(o);
    if (o.status == Outcome::Status::BudgetExhausted) {
      out_of_budget = true;
      ++v.exhausted;
      continue;
    }
    auto g = ground_of(o, *t);
    if (!g) {
      v.holds = false;
      v.violation = "cost " + std::to_string(n) + ": no ground value";
      return v;
    }
    if (prev && !ground_refines(*prev, *g)) {
      v.holds = false;
      v.violation = "cost " + std::to_string(prev_cost) + " gives " + ground_to_string(*prev) + " but cost " +
                    std::to_string(n) + " gives " + ground_to_string(*g);
      return v;
    }
    prev = g;
    prev_cost = n;
  }
  return v;
}

RobustnessVerdict check_standard_robustness(const ExprPtr& f, std::size_t samples, std::mt19937_64& rng,
                                            EvalSettings s) {
  RobustnessVerdict v;
  TripleSampler sampler(rng());
  std::size_t attempts = 0;
  while (v.samples < samples && attempts++ < 4 * samples + 16) {
    Interval x = sampler.random_interval();
    if (x.is_bottom()) continue;
    DualInterval a(x, sampler.random_interval()), b(x, sampler.random_interval());
    Machine m1({s.step_budget}), m2({s.step_budget});
    auto ya = m1.eval_at_cost(mk_app(f, mk_dual(a)), s.cost).dual();
    auto yb = m2.eval_at_cost(mk_app(f, mk_dual(b)), s.cost).dual();
    if (!ya || !yb) continue;
    ++v.samples;
    if (!(ya->std == yb->std)) {
      v.holds = false;
      v.violation = "f(" + a.to_string() + ") = " + ya->to_string() + " but f(" + b.to_string() +
                    ") = " + yb->to_string();
      return v;
    }
  }
  return v;
}

}  // namespace dualpcf
