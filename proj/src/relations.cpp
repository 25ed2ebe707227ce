#include <algorithm>
#include <map>
#include <sstream>

#include "dualpcf/analysis.hpp"
#include "dualpcf/syntax.hpp"

namespace dualpcf {

namespace {

template <class... F> struct overloaded : F... { using F::operator()...; };
template <class... F> overloaded(F...) -> overloaded<F...>;

Typed compile(const std::string& source) { return elaborate(parse(source, {true})); }

std::string rat_text(const Rational& q) { return q.get_str(); }

std::string literal_text(const Rational& q) { return "[" + rat_text(q) + "," + rat_text(q) + "]"; }

template <class T> bool opt_meet_below(const std::optional<T>& a, const std::optional<T>& b,
                                       const std::optional<T>& c) {
  // c ⊑ a ⊓ b and a, b consistent, in a flat domain
  bool consistent = !a || !b || *a == *b;
  if (!consistent) return false;
  if (!c) return true;
  return a && b && *a == *c && *b == *c;
}

Ground ground_of_literal(const ExprPtr& e) {
  if (auto* d = e->as<node::DualLit>()) return d->value;
  if (auto* i = e->as<node::IvLit>()) return i->value;
  if (auto* n = e->as<node::Nat>()) return std::optional<std::uint64_t>(n->value);
  if (auto* b = e->as<node::Bool>()) return b->value;
  throw std::invalid_argument("not a ground literal: " + print(e));
}

}  // namespace

std::string ground_to_string(const Ground& g) {
  return std::visit(overloaded{
                        [](const DualInterval& d) { return d.to_string(); },
                        [](const Interval& i) { return i.to_string(); },
                        [](const std::optional<std::uint64_t>& n) { return n ? std::to_string(*n) : "⊥"; },
                        [](const std::optional<bool>& b) { return std::string(b ? (*b ? "tt" : "ff") : "⊥"); },
                    },
                    g);
}

std::optional<Ground> ground_of(const Outcome& o, const Type& t) {
  if (o.status == Outcome::Status::BudgetExhausted) return std::nullopt;
  if (o.status == Outcome::Status::Undetermined) {
    if (t.kind() == Type::Kind::Nat) return Ground(std::optional<std::uint64_t>());
    if (t.kind() == Type::Kind::Bool) return Ground(std::optional<bool>());
    return std::nullopt;
  }
  if (!o.value) return std::nullopt;
  try {
    return ground_of_literal(o.value);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

ExprPtr ground_literal(const Ground& g) {
  return std::visit(overloaded{
                        [](const DualInterval& d) { return mk_dual(d); },
                        [](const Interval& i) { return mk_iv(i); },
                        [](const std::optional<std::uint64_t>& n) {
                          if (!n) throw std::invalid_argument("⊥_ν has no literal");
                          return mk_nat(*n);
                        },
                        [](const std::optional<bool>& b) { return mk_bool(b); },
                    },
                    g);
}

bool relation_holds_ground(const Rational& r, const DualInterval& x1, const DualInterval& x2,
                           const DualInterval& x3) {
  if (!iv_refines(x3.std, iv_meet(x1.std, x2.std))) return false;
  return iv_consistent(Interval(r) * x3.inf, x2.std - x1.std);
}

bool relation_holds_ground(const Rational& r, const Ground& x1, const Ground& x2, const Ground& x3) {
  if (x1.index() != x2.index() || x1.index() != x3.index())
    throw std::invalid_argument("relation on values of different types: " + ground_to_string(x1) + ", " + ground_to_string(x2) + ", " + ground_to_string(x3));
  switch (x1.index()) {
    case 0:
      return relation_holds_ground(r, std::get<0>(x1), std::get<0>(x2), std::get<0>(x3));
    case 1:
      return relation_holds_ground(r, DualInterval(std::get<1>(x1)), DualInterval(std::get<1>(x2)),
                                   DualInterval(std::get<1>(x3)));
    case 2: return opt_meet_below(std::get<2>(x1), std::get<2>(x2), std::get<2>(x3));
    default: return opt_meet_below(std::get<3>(x1), std::get<3>(x2), std::get<3>(x3));
  }
}

bool ground_refines(const Ground& a, const Ground& b) {
  if (a.index() != b.index()) return false;
  switch (a.index()) {
    case 0: return dual_refines(std::get<0>(a), std::get<0>(b));
    case 1: return iv_refines(std::get<1>(a), std::get<1>(b));
    case 2: return !std::get<2>(a) || std::get<2>(a) == std::get<2>(b);
    default: return !std::get<3>(a) || std::get<3>(a) == std::get<3>(b);
  }
}

// ---------------------------------------------------------------------------

Subject term_subject(ExprPtr f, EvalSettings s) {
  TypePtr t = type_of(f);
  const Type* result = &t->result();
  return [f = std::move(f), t, result, s](const std::vector<ExprPtr>& args) -> std::optional<Ground> {
    Machine m({s.step_budget});
    return ground_of(m.eval_at_cost(mk_apps(f, args), s.cost), *result);
  };
}

Subject host_subject(std::function<Ground(const std::vector<Ground>&)> f) {
  return [f = std::move(f)](const std::vector<ExprPtr>& args) -> std::optional<Ground> {
    std::vector<Ground> gs;
    for (const auto& a : args) gs.push_back(ground_of_literal(a));
    return f(gs);
  };
}

std::string Triple::describe() const { return "(" + print(x1) + ", " + print(x2) + ", " + print(x3) + ")"; }

// ---------------------------------------------------------------------------

TripleSampler::TripleSampler(std::uint64_t seed, SamplerOptions opts) : rng_(seed), opts_(opts) {}

bool TripleSampler::coin(double p) { return std::bernoulli_distribution(p)(rng_); }

Rational TripleSampler::random_dyadic() {
  unsigned j = std::uniform_int_distribution<unsigned>(0, opts_.max_exponent)(rng_);
  long bound = std::min<long>(opts_.max_numerator, 4L << j);
  long k = std::uniform_int_distribution<long>(-bound, bound)(rng_);
  return dyadic(k, j);
}

Interval TripleSampler::random_interval() {
  if (coin(opts_.bottom_probability)) return Interval::bottom();
  Rational a = random_dyadic();
  if (coin(opts_.point_probability)) return Interval(a);
  Rational b = random_dyadic();
  return Interval(std::min(a, b), std::max(a, b));
}

DualInterval TripleSampler::random_dual() { return {random_interval(), random_interval()}; }

namespace {

// a dyadic point of a finite interval, or any dyadic for ⊥
Rational point_in(const Interval& i, TripleSampler& s) {
  if (i.is_bottom()) return s.random_dyadic();
  unsigned t = std::uniform_int_distribution<unsigned>(0, 8)(s.rng());
  return i.lower() + (i.upper() - i.lower()) * make_rational(t, 8);
}

Interval widen(const Interval& i, TripleSampler& s, double p_bottom) {
  if (i.is_bottom() || std::bernoulli_distribution(p_bottom)(s.rng())) return Interval::bottom();
  if (std::bernoulli_distribution(0.5)(s.rng())) return i;
  Rational a = abs(s.random_dyadic()) / 4, b = abs(s.random_dyadic()) / 4;
  return Interval(i.lower() - a, i.upper() + b);
}

// an interval containing p
Interval around(const Rational& p, TripleSampler& s) {
  if (std::bernoulli_distribution(0.3)(s.rng())) return Interval(p);
  Rational a = abs(s.random_dyadic()) / 2, b = abs(s.random_dyadic()) / 2;
  return Interval(p - a, p + b);
}

bool is_continuous_first_order(const Type& t) {
  if (!t.is_arrow()) return false;
  for (const auto& a : t.arguments())
    if (a->kind() != Type::Kind::Real && a->kind() != Type::Kind::Dual) return false;
  auto k = t.result().kind();
  if (k == Type::Kind::Dual) return true;
  if (k != Type::Kind::Real) return false;
  for (const auto& a : t.arguments())
    if (a->kind() != Type::Kind::Real) return false;
  return true;
}

// Self related definable terms for function types outside the pattern.
const std::map<std::string, std::vector<std::string>>& function_library() {
  static const std::map<std::string, std::vector<std::string>> lib = {
      {"nu -> nu", {"fun n: nu. 4", "fun n: nu. pred 3", "fun n: nu. succ (succ 0)"}},
      {"o -> o", {"fun b: o. tt", "fun b: o. ff"}},
      {"(nu -> nu) -> nu -> nu",
       {"fun g: nu -> nu. fun n: nu. if iszero n then 3 else succ (g (pred n))",
        "fun g: nu -> nu. fun n: nu. if iszero n then 0 else g (pred n)"}},
      {"(pi -> pi) -> pi -> pi",
       {"fun g: pi -> pi. fun x: pi. x * g (x / 2) / 2 + 1/4",
        "fun g: pi -> pi. fun x: pi. pr (g x + x)", "fun g: pi -> pi. fun x: pi. max(x, 1/2)"}},
      {"(pi -> delta) -> pi -> delta",
       {"fun g: pi -> delta. fun x: pi. x * g (x / 2) / 2 + 1/4",
        "fun g: pi -> delta. fun x: pi. max(g x, x)", "fun g: pi -> delta. fun x: pi. x * x - g (x / 2)"}},
  };
  return lib;
}

}  // namespace

Triple TripleSampler::ground_triple(const Rational& r, const TypePtr& t) {
  switch (t->kind()) {
    case Type::Kind::Dual: {
      DualInterval x1 = random_dual();
      Interval s2;
      if (!x1.std.is_bottom() && coin(0.4)) {
        // shifted copy, the tight case of the pattern
        s2 = x1.std + Interval(r) * Interval(random_dyadic());
      } else {
        s2 = random_interval();
      }
      DualInterval x2(s2, random_interval());
      Interval s3 = widen(iv_meet(x1.std, x2.std), *this, opts_.bottom_probability);
      Interval diff = x2.std - x1.std;
      Rational q = point_in(diff, *this) / r;
      Interval i3 = coin(opts_.bottom_probability) ? Interval::bottom() : around(q, *this);
      return {mk_dual(x1), mk_dual(x2), mk_dual({s3, i3})};
    }
    case Type::Kind::Real: {
      Interval i1 = random_interval();
      Rational p = point_in(i1, *this);
      Interval i2 = coin(opts_.bottom_probability) ? Interval::bottom() : around(p, *this);
      Interval i3 = widen(iv_meet(i1, i2), *this, opts_.bottom_probability);
      return {mk_iv(i1), mk_iv(i2), mk_iv(i3)};
    }
    case Type::Kind::Nat: {
      auto n = mk_nat(std::uniform_int_distribution<std::uint64_t>(0, 5)(rng_));
      return {n, n, n};
    }
    case Type::Kind::Bool: {
      auto b = mk_bool(coin(0.5));
      auto bot = mk_bool(std::nullopt);
      switch (std::uniform_int_distribution<int>(0, 4)(rng_)) {
        case 0: return {b, b, b};
        case 1: return {b, b, bot};
        case 2: return {bot, b, bot};
        case 3: return {b, bot, bot};
        default: return {bot, bot, bot};
      }
    }
    default: break;
  }
  throw std::logic_error("ground_triple on a function type");
}

std::string TripleSampler::random_body(const std::vector<std::string>& vars, int depth) {
  if (depth == 0 || coin(0.25)) {
    if (!vars.empty() && coin(0.65))
      return vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng_)];
    unsigned j = std::uniform_int_distribution<unsigned>(0, 3)(rng_);
    return literal_text(dyadic(std::uniform_int_distribution<long>(-8, 8)(rng_), j));
  }
  std::string a = random_body(vars, depth - 1), b = random_body(vars, depth - 1);
  switch (std::uniform_int_distribution<int>(0, 6)(rng_)) {
    case 0: return "(" + a + " + " + b + ")";
    case 1: return "(" + a + " - " + b + ")";
    case 2: return "(" + a + " * " + b + ")";
    case 3: return "max(" + a + ", " + b + ")";
    case 4: return "min(" + a + ", " + b + ")";
    case 5: return "pr (" + a + ")";
    default: return "(" + a + " / 2)";
  }
}

Triple TripleSampler::function_triple(const Rational& r, const TypePtr& t) {
  if (is_continuous_first_order(*t)) {
    std::string binders;
    std::vector<std::string> vars;
    auto args = t->arguments();
    for (std::size_t i = 0; i < args.size(); ++i) {
      vars.push_back("x" + std::to_string(i));
      binders += "fun " + vars.back() + ": " + args[i]->to_string(true) + ". ";
    }
    // the annotation keeps constant bodies at the intended result type
    std::string res = t->result().to_string(true);
    std::string f = "(let fv: " + res + " = " + random_body(vars, 2) + " in fv)";
    std::string g = "(let gv: " + res + " = " + random_body(vars, 2) + " in gv)";
    std::string r_text = rat_text(r);
    std::string f1, f2, f3;
    if (t->result().kind() == Type::Kind::Dual) {
      f1 = binders + f;
      f2 = binders + f + " + " + literal_text(r) + " * " + g;
      f3 = binders + f + " + ([0," + r_text + "] + eps [1,1]) * " + g;
    } else {
      // π results carry no infinitesimal: weaken the second and third copy
      Rational w = abs(random_dyadic()) / 8;
      std::string slack = "[" + rat_text(-w) + "," + rat_text(w) + "]";
      f1 = binders + f;
      f2 = coin(0.5) ? f1 : binders + f + " + " + slack;
      f3 = binders + f + " + " + slack;
    }
    return {compile(f1).expr, compile(f2).expr, compile(f3).expr};
  }
  auto it = function_library().find(t->to_string(true));
  if (it == function_library().end())
    throw std::invalid_argument("no sampler for functions of type " + t->to_string(true));
  const auto& options = it->second;
  auto f = compile(options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng_)]).expr;
  return {f, f, f};
}

Triple TripleSampler::sample(const Rational& r, const TypePtr& t) {
  return t->is_ground() ? ground_triple(r, t) : function_triple(r, t);
}

// ---------------------------------------------------------------------------

RelationVerdict relation_holds(const Rational& r, const TypePtr& t, const Subject& s1, const Subject& s2,
                               const Subject& s3, std::size_t samples, TripleSampler& sampler) {
  RelationVerdict v;
  auto args = t->arguments();
  std::size_t attempts = 0;
  while (v.samples < samples && attempts < 4 * samples + 16) {
    ++attempts;
    std::vector<ExprPtr> a1, a2, a3;
    std::vector<Triple> triples;
    for (const auto& a : args) {
      Triple tr = sampler.sample(r, a);
      a1.push_back(tr.x1);
      a2.push_back(tr.x2);
      a3.push_back(tr.x3);
      triples.push_back(tr);
    }
    auto y1 = s1(a1), y2 = s2(a2), y3 = s3(a3);
    if (!y1 || !y2 || !y3) {
      ++v.inconclusive;
      continue;
    }
    ++v.samples;
    if (!relation_holds_ground(r, *y1, *y2, *y3)) {
      v.holds = false;
      std::ostringstream os;
      os << "r=" << rat_text(r) << " args=";
      for (const auto& tr : triples) os << tr.describe() << " ";
      os << "results=(" << ground_to_string(*y1) << ", " << ground_to_string(*y2) << ", "
         << ground_to_string(*y3) << ")";
      v.counterexample = os.str();
      return v;
    }
  }
  return v;
}

RelationVerdict logically_consistent(const TypePtr& t, const Subject& s, const std::vector<Rational>& rs,
                                     std::size_t samples_per_r, TripleSampler& sampler) {
  RelationVerdict total;
  for (const auto& r : rs) {
    RelationVerdict v = relation_holds(r, t, s, s, s, samples_per_r, sampler);
    total.samples += v.samples;
    total.inconclusive += v.inconclusive;
    if (!v.holds) {
      total.holds = false;
      total.counterexample = v.counterexample;
      return total;
    }
  }
  return total;
}

std::vector<Rational> sample_ratios(std::mt19937_64& rng, std::size_t count) {
  std::vector<Rational> rs;
  std::uniform_int_distribution<long> k(1, 16);
  for (std::size_t i = 0; i < count; ++i) rs.push_back(Rational(k(rng), 4));
  return rs;
}

std::vector<ConstantCase> constant_cases(EvalSettings s) {
  std::vector<ConstantCase> cs;
  auto add = [&](ExprPtr c) {
    auto* k = c->as<node::Const>();
    std::string name(prim_name(k->prim));
    if (prim_is_overloaded(k->prim)) name += k->carrier == Carrier::Dual ? "_delta" : "_pi";
    if (k->prim == Prim::Y) name += "[" + k->fix_type->to_string(true) + "]";
    TypePtr t = const_type(*k);
    cs.push_back({name, t, term_subject(c, s)});
  };
  for (Carrier c : {Carrier::Dual, Carrier::Real})
    for (Prim p : {Prim::Add, Prim::Sub, Prim::Mul, Prim::Div, Prim::Min, Prim::Max, Prim::Pr, Prim::Int,
                   Prim::Sup})
      add(mk_const(p, c));
  for (Prim p : {Prim::InPi, Prim::InDelta, Prim::Pos, Prim::Succ, Prim::Pred, Prim::IsZero})
    add(mk_const(p));
  for (const char* t : {"delta", "pi", "pi -> delta", "pi -> pi", "nu", "nu -> nu", "o"})
    add(mk_fix(parse_type(t)));
  return cs;
}

DualInterval broken_dual_max(const DualInterval& a, const DualInterval& b) {
  if (iv_above(a.std, b.std)) return a;
  if (iv_above(b.std, a.std)) return b;
  if (a.std.is_bottom() || b.std.is_bottom()) return {Interval::bottom(), a.inf};
  return {Interval(std::max(a.std.lower(), b.std.lower()), std::max(a.std.upper(), b.std.upper())), a.inf};
}

}  // namespace dualpcf
