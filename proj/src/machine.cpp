#include "dualpcf/machine.hpp"

#include <cstdlib>

#include "dualpcf/syntax.hpp"
#include "dualpcf/typing.hpp"

namespace dualpcf {

std::uint64_t default_step_budget() {
  if (const char* env = std::getenv("DUALPCF_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return kDefaultStepBudget;
}

std::string_view status_name(Outcome::Status s) {
  switch (s) {
    case Outcome::Status::Value: return "value";
    case Outcome::Status::Undetermined: return "undetermined";
    case Outcome::Status::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

std::optional<DualInterval> Outcome::dual() const {
  if (!ok()) return std::nullopt;
  if (auto* d = value->as<node::DualLit>()) return d->value;
  return std::nullopt;
}

std::optional<Interval> Outcome::interval() const {
  if (!ok()) return std::nullopt;
  if (auto* i = value->as<node::IvLit>()) return i->value;
  return std::nullopt;
}

std::optional<DualInterval> Outcome::as_dual() const {
  if (auto d = dual()) return d;
  if (auto i = interval()) return DualInterval(*i);
  return std::nullopt;
}

std::optional<std::uint64_t> Outcome::natural() const {
  if (!ok()) return std::nullopt;
  if (auto* n = value->as<node::Nat>()) return n->value;
  return std::nullopt;
}

std::optional<bool> Outcome::boolean() const {
  if (!ok()) return std::nullopt;
  if (auto* b = value->as<node::Bool>()) return b->value;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// Constants that keep their cost tag: int, sup, L, and Y at continuous type.
bool keeps_tag(const node::Const& c) {
  switch (c.prim) {
    case Prim::Int:
    case Prim::Sup:
    case Prim::L: return true;
    case Prim::Y: return is_continuous_type(*c.fix_type);
    default: return false;
  }
}

const node::Const* tagged_const(const ExprPtr& e, std::uint64_t* cost = nullptr) {
  auto* t = e->as<node::CostTagged>();
  if (!t) return nullptr;
  auto* c = t->body->as<node::Const>();
  if (!c || !keeps_tag(*c)) return nullptr;
  if (cost) *cost = t->cost;
  return c;
}

[[noreturn]] void stuck(const ExprPtr& e, const std::string& why) {
  throw StuckTerm(why + ": " + print(e));
}

ExprPtr real_lit(const Interval& i) { return mk_iv(i); }
ExprPtr dual_lit(const DualInterval& d) { return mk_dual(d); }

ExprPtr delta_rule(const node::Const& c, const std::vector<ExprPtr>& args, const ExprPtr& whole) {
  auto d = [&](std::size_t i) { return args[i]->as<node::DualLit>(); };
  auto r = [&](std::size_t i) { return args[i]->as<node::IvLit>(); };
  auto n = [&](std::size_t i) { return args[i]->as<node::Nat>(); };
  switch (c.prim) {
    case Prim::Add:
    case Prim::Sub:
    case Prim::Mul:
    case Prim::Min:
    case Prim::Max: {
      if (d(0) && d(1)) {
        const auto &a = d(0)->value, &b = d(1)->value;
        switch (c.prim) {
          case Prim::Add: return dual_lit(dual_add(a, b));
          case Prim::Sub: return dual_lit(dual_sub(a, b));
          case Prim::Mul: return dual_lit(dual_mul(a, b));
          case Prim::Min: return dual_lit(dual_min(a, b));
          default: return dual_lit(dual_max(a, b));
        }
      }
      if (r(0) && r(1)) {
        const auto &a = r(0)->value, &b = r(1)->value;
        switch (c.prim) {
          case Prim::Add: return real_lit(iv_add(a, b));
          case Prim::Sub: return real_lit(iv_sub(a, b));
          case Prim::Mul: return real_lit(iv_mul(a, b));
          case Prim::Min: return real_lit(iv_min(a, b));
          default: return real_lit(iv_max(a, b));
        }
      }
      break;
    }
    case Prim::Div:
      if (n(1) && d(0)) return dual_lit(dual_div_nat(d(0)->value, n(1)->value));
      if (n(1) && r(0)) return real_lit(iv_div_nat(r(0)->value, n(1)->value));
      break;
    case Prim::Pr:
      if (d(0)) return dual_lit(dual_pr(d(0)->value));
      if (r(0)) return real_lit(iv_pr(r(0)->value));
      break;
    case Prim::InPi:
      if (n(0)) return real_lit(Interval(Rational(mpz_class(std::to_string(n(0)->value)))));
      break;
    case Prim::InDelta:
      if (r(0)) return dual_lit(DualInterval(r(0)->value));
      break;
    case Prim::Pos:
      if (r(0)) {
        const Interval& x = r(0)->value;
        if (!x.is_bottom() && x.lower() > 0) return mk_bool(true);
        if (!x.is_bottom() && x.upper() < 0) return mk_bool(false);
        return mk_bool(std::nullopt);
      }
      break;
    case Prim::Succ:
      if (n(0)) return mk_nat(n(0)->value + 1);
      break;
    case Prim::Pred:
      if (n(0)) return mk_nat(n(0)->value == 0 ? 0 : n(0)->value - 1);
      break;
    case Prim::IsZero:
      if (n(0)) return mk_bool(n(0)->value == 0);
      break;
    case Prim::In:
      if (d(0)) return real_lit(d(0)->value.inf);
      break;
    default: break;
  }
  stuck(whole, "ill-typed primitive arguments");
}

// ⟨e, n⟩ at the root.
ExprPtr tag_rule(const ExprPtr& e) {
  const auto& t = std::get<node::CostTagged>(e->node());
  const ExprPtr& b = t.body;
  std::uint64_t n = t.cost;
  if (b->is<node::CostTagged>()) return b;
  if (b->is<node::Nat>() || b->is<node::Bool>() || b->is<node::IvLit>() || b->is<node::DualLit>() ||
      b->is<node::Bisect>())
    return b;
  if (auto* c = b->as<node::Const>()) {
    if (keeps_tag(*c)) stuck(e, "tagged value is not a redex");
    return b;
  }
  if (auto* i = b->as<node::If>())
    return mk_if(mk_tag(i->cond, n), mk_tag(i->then_branch, n), mk_tag(i->else_branch, n), i->type, b->loc());
  if (auto* app = b->as<node::App>()) {
    Spine s = spine_of(b);
    auto* c = s.head->as<node::Const>();
    if (c && prim_is_strict(c->prim) && s.args.size() == const_arity(*c)) {
      std::vector<ExprPtr> args;
      for (const auto& a : s.args) args.push_back(mk_tag(a, n));
      return mk_apps(s.head, args);
    }
    return mk_app(mk_tag(app->fn, n), app->arg);
  }
  stuck(e, "no rule for tagged term");
}

ExprPtr if_rule(const node::If& i, const ExprPtr& cond, const ExprPtr& whole) {
  auto* b = cond->as<node::Bool>();
  if (!b) stuck(whole, "condition is not a boolean");
  if (b->value) return *b->value ? i.then_branch : i.else_branch;
  if (i.type && is_continuous_type(*i.type)) return bottom_of(i.type);
  throw UndeterminedBranch("conditional on ⊥ at type " + (i.type ? i.type->to_string() : std::string("?")));
}

// Contract a spine whose head is a value and whose consumed arguments are
// values when the head is strict.
ExprPtr app_rule(const Spine& s, const ExprPtr& whole) {
  const ExprPtr& h = s.head;
  std::size_t used = 1;
  ExprPtr out;
  std::uint64_t n = 0;
  if (auto* c = h->as<node::Const>()) {
    if (prim_is_strict(c->prim)) {
      used = const_arity(*c);
      out = delta_rule(*c, std::vector<ExprPtr>(s.args.begin(), s.args.begin() + used), whole);
    } else if (c->prim == Prim::Y) {
      bool cont = is_continuous_type(*c->fix_type);
      out = reduce_Y(c->fix_type, s.args[0], cont ? std::optional<std::uint64_t>(0) : std::nullopt);
    } else if (c->prim == Prim::Int || c->prim == Prim::Sup) {
      out = mk_app(mk_bisect(c->prim, c->carrier, 0, 0), s.args[0]);
    } else {
      used = const_arity(*c);
      std::size_t d = c->l_types.size();
      out = reduce_L(*c, s.args[0], {s.args.begin() + 1, s.args.begin() + 1 + d},
                     {s.args.begin() + 1 + d, s.args.begin() + 1 + 2 * d}, 0);
    }
  } else if (auto* c = tagged_const(h, &n)) {
    if (c->prim == Prim::Int || c->prim == Prim::Sup) {
      out = mk_app(mk_bisect(c->prim, c->carrier, n, n), s.args[0]);
    } else if (c->prim == Prim::Y) {
      out = reduce_Y(c->fix_type, s.args[0], n);
    } else {
      used = const_arity(*c);
      std::size_t d = c->l_types.size();
      out = reduce_L(*c, s.args[0], {s.args.begin() + 1, s.args.begin() + 1 + d},
                     {s.args.begin() + 1 + d, s.args.begin() + 1 + 2 * d}, n);
    }
  } else if (auto* l = h->as<node::Lam>()) {
    out = subst(l->body, l->param, s.args[0]);
  } else if (auto* t = h->as<node::CostTagged>(); t && t->body->is<node::Lam>()) {
    const auto& l2 = std::get<node::Lam>(t->body->node());
    out = mk_tag(subst(l2.body, l2.param, s.args[0]), t->cost);
  } else if (auto* b = h->as<node::Bisect>()) {
    out = reduce_bisect(b->prim, b->carrier, s.args[0], b->depth, b->cost);
  } else {
    stuck(whole, "application of a non-function");
  }
  return mk_apps(out, std::vector<ExprPtr>(s.args.begin() + used, s.args.end()));
}

bool strict_saturated(const Spine& s, const node::Const** out) {
  auto* c = s.head->as<node::Const>();
  if (c && prim_is_strict(c->prim) && s.args.size() >= const_arity(*c)) {
    *out = c;
    return true;
  }
  return false;
}

}  // namespace

bool is_value(const ExprPtr& e) {
  switch (e->node().index()) {
    case 3:  // Var
    case 6:  // If
      return false;
    case 4: {  // App
      Spine s = spine_of(e);
      const node::Const* c = s.head->as<node::Const>();
      if (!c) c = tagged_const(s.head);
      return c && s.args.size() < const_arity(*c);
    }
    case 7: {  // CostTagged
      const auto& t = std::get<node::CostTagged>(e->node());
      return t.body->is<node::Lam>() || tagged_const(e) != nullptr;
    }
    default: return true;
  }
}

ExprPtr bottom_of(const TypePtr& t) {
  switch (t->kind()) {
    case Type::Kind::Dual: return mk_dual(DualInterval::bottom());
    case Type::Kind::Real: return mk_iv(Interval::bottom());
    case Type::Kind::Bool: return mk_bool(std::nullopt);
    case Type::Kind::Arrow: return mk_lam("u", t->from(), bottom_of(t->to()));
    case Type::Kind::Nat: break;
  }
  throw std::logic_error("ν has no bottom literal");
}

static ExprPtr var(const char* x, const TypePtr& t) { return mk_var(x, t); }

ExprPtr lift_plus(const TypePtr& t) {
  if (t->kind() == Type::Kind::Dual) {
    return mk_lam("a", t, mk_lam("b", t, mk_binop(Prim::Add, Carrier::Dual, var("a", t), var("b", t))));
  }
  const TypePtr& s = t->from();
  ExprPtr body = mk_apps(lift_plus(t->to()), {mk_app(var("f", t), var("x", s)), mk_app(var("g", t), var("x", s))});
  return mk_lam("f", t, mk_lam("g", t, mk_lam("x", s, body)));
}

ExprPtr lift_eps(const TypePtr& t) {
  if (t->kind() == Type::Kind::Dual) {
    ExprPtr unit = mk_dual(DualInterval(Interval(Rational(0)), Interval(Rational(1))));
    return mk_lam("a", t, mk_binop(Prim::Mul, Carrier::Dual, unit, var("a", t)));
  }
  const TypePtr& s = t->from();
  return mk_lam("f", t, mk_lam("x", s, mk_app(lift_eps(t->to()), mk_app(var("f", t), var("x", s)))));
}

ExprPtr lift_up(const TypePtr& t) {
  TypePtr tp = real_flavour(t);
  std::vector<TypePtr> args = t->arguments();
  ExprPtr body = var("g", tp);
  for (std::size_t i = 0; i < args.size(); ++i) body = mk_app(body, mk_var("x" + std::to_string(i), args[i]));
  body = mk_app(mk_const(Prim::InDelta), body);
  for (std::size_t i = args.size(); i-- > 0;) body = mk_lam("x" + std::to_string(i), args[i], body);
  return mk_lam("g", tp, body);
}

ExprPtr reduce_bisect(Prim p, Carrier c, const ExprPtr& f, std::uint64_t m, std::uint64_t n) {
  if (m == 0) return mk_app(mk_tag(f, n), mk_iv(Interval(Rational(0), Rational(1))));
  auto pi = Type::real();
  ExprPtr x = mk_var("x", pi);
  ExprPtr lower = mk_binop(Prim::Div, Carrier::Real, x, mk_nat(2));
  ExprPtr upper = mk_binop(Prim::Div, Carrier::Real, mk_binop(Prim::Add, Carrier::Real, x, mk_iv(Interval(Rational(1)))),
                           mk_nat(2));
  ExprPtr left = mk_app(mk_bisect(p, c, m - 1, n), mk_lam("x", pi, mk_app(f, lower)));
  ExprPtr right = mk_app(mk_bisect(p, c, m - 1, n), mk_lam("x", pi, mk_app(f, upper)));
  if (p == Prim::Sup) return mk_binop(Prim::Max, c, left, right);
  return mk_binop(Prim::Add, c, mk_binop(Prim::Div, c, left, mk_nat(2)), mk_binop(Prim::Div, c, right, mk_nat(2)));
}

ExprPtr reduce_L(const node::Const& l, const ExprPtr& f, const std::vector<ExprPtr>& points,
                 const std::vector<ExprPtr>& dirs, std::uint64_t n) {
  ExprPtr body = f;
  for (std::size_t i = 0; i < l.l_types.size(); ++i) {
    const TypePtr& t = l.l_types[i];
    ExprPtr up_p = mk_app(lift_up(t), points[i]);
    ExprPtr eps_d = mk_app(lift_eps(t), mk_app(lift_up(t), dirs[i]));
    body = mk_app(body, mk_apps(lift_plus(t), {up_p, eps_d}));
  }
  return mk_app(mk_const(Prim::In, Carrier::Dual), mk_tag(body, n));
}

ExprPtr reduce_Y(const TypePtr& sigma, const ExprPtr& f, std::optional<std::uint64_t> n) {
  ExprPtr unfold = mk_app(f, mk_app(mk_fix(sigma), f));
  if (!n) return unfold;
  if (*n == 0) return bottom_of(sigma);
  return mk_tag(unfold, *n - 1);
}

// ---------------------------------------------------------------------------

void Machine::tick() {
  if (++steps_ > opts_.step_budget) throw BudgetExhausted(steps_);
}

ExprPtr Machine::step_redex(const ExprPtr& e) {
  if (e->is<node::CostTagged>()) return tag_rule(e);
  if (auto* i = e->as<node::If>()) {
    if (!is_value(i->cond))
      return mk_if(step_redex(i->cond), i->then_branch, i->else_branch, i->type, e->loc());
    return if_rule(*i, i->cond, e);
  }
  if (e->is<node::App>()) {
    Spine s = spine_of(e);
    if (!is_value(s.head)) return mk_apps(step_redex(s.head), s.args);
    const node::Const* c = nullptr;
    if (strict_saturated(s, &c)) {
      for (std::size_t i = 0; i < const_arity(*c); ++i) {
        if (!is_value(s.args[i])) {
          s.args[i] = step_redex(s.args[i]);
          return mk_apps(s.head, s.args);
        }
      }
    }
    return app_rule(s, e);
  }
  stuck(e, "no rule applies");
}

std::optional<ExprPtr> Machine::step(const ExprPtr& e) {
  if (is_value(e)) return std::nullopt;
  tick();
  return step_redex(e);
}

ExprPtr Machine::normalize(const ExprPtr& start) {
  ExprPtr t = start;
  for (;;) {
    if (is_value(t)) return t;
    if (t->is<node::CostTagged>()) {
      tick();
      t = tag_rule(t);
      continue;
    }
    if (auto* i = t->as<node::If>()) {
      ExprPtr c = normalize(i->cond);
      tick();
      t = if_rule(*i, c, t);
      continue;
    }
    if (!t->is<node::App>()) stuck(t, "no rule applies");
    Spine s = spine_of(t);
    if (!is_value(s.head)) {
      t = mk_apps(normalize(s.head), s.args);
      continue;
    }
    const node::Const* c = nullptr;
    if (strict_saturated(s, &c)) {
      for (std::size_t i = 0; i < const_arity(*c); ++i) s.args[i] = normalize(s.args[i]);
    }
    tick();
    t = app_rule(s, t);
  }
}

template <class Finish>
Outcome Machine::guarded(const ExprPtr& config, std::uint64_t cost, Finish finish) {
  Outcome o;
  o.cost = cost;
  steps_ = 0;
  try {
    o.value = finish(config);
    if (auto* b = o.value->as<node::Bool>(); b && !b->value) {
      o.status = Outcome::Status::Undetermined;
      o.reason = "(0<) applied to an interval containing 0";
    }
  } catch (const BudgetExhausted& e) {
    o.status = Outcome::Status::BudgetExhausted;
    o.reason = e.what();
    o.value = nullptr;
  } catch (const UndeterminedBranch& e) {
    o.status = Outcome::Status::Undetermined;
    o.reason = e.what();
    o.value = nullptr;
  }
  o.steps = steps_;
  return o;
}

Outcome Machine::run(const ExprPtr& config) {
  return guarded(config, 0, [this](const ExprPtr& c) { return normalize(c); });
}

Outcome Machine::run_by_steps(const ExprPtr& config) {
  return guarded(config, 0, [this](const ExprPtr& c) {
    ExprPtr t = c;
    while (auto next = step(t)) t = *next;
    return t;
  });
}

Outcome Machine::eval_at_cost(const ExprPtr& e, std::uint64_t n) {
  Outcome o = run(mk_tag(e, n));
  o.cost = n;
  return o;
}

RefineResult eval_refine(const ExprPtr& e, const Rational& target_width, std::uint64_t max_cost,
                         MachineOptions opts) {
  RefineResult r;
  bool have = false;
  ExtendedRational target(target_width);
  for (std::uint64_t cost = 1; cost <= max_cost; cost *= 2) {
    Machine m(opts);
    Outcome o = m.eval_at_cost(e, cost);
    r.trace.emplace_back(cost, o);
    if (o.status == Outcome::Status::BudgetExhausted) {
      if (!have) r.outcome = o;
      r.ceiling_reached = true;
      return r;
    }
    if (!o.ok()) {
      if (!have) r.outcome = o;
      continue;
    }
    r.outcome = o;
    r.cost_used = cost;
    have = true;
    auto d = o.as_dual();
    if (!d || (iv_width(d->std) <= target && iv_width(d->inf) <= target)) {
      r.reached = true;
      return r;
    }
  }
  r.ceiling_reached = true;
  return r;
}

}  // namespace dualpcf
