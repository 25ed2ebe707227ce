#include "dualpcf/typing.hpp"

#include <unordered_map>

namespace dualpcf {

std::string_view type_error_kind_name(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::Mismatch: return "Mismatch";
    case TypeErrorKind::ZeroTestOnDual: return "ZeroTestOnDual";
    case TypeErrorKind::LInsideLArgument: return "LInsideLArgument";
    case TypeErrorKind::BadLShape: return "BadLShape";
    case TypeErrorKind::UnboundVar: return "UnboundVar";
  }
  return "?";
}

TypeError::TypeError(TypeErrorKind kind, SourceLoc loc, const std::string& msg)
    : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " +
                         std::string(type_error_kind_name(kind)) + ": " + msg),
      kind_(kind), loc_(loc), message_(msg) {}

static TypePtr carrier_type(Carrier c) { return c == Carrier::Dual ? Type::dual() : Type::real(); }

std::vector<TypePtr> l_argument_direction_type(const std::vector<TypePtr>& ts, SourceLoc loc) {
  if (ts.empty()) throw TypeError(TypeErrorKind::BadLShape, loc, "L needs at least one argument type");
  std::vector<TypePtr> out;
  for (const auto& t : ts) {
    if (!is_l_admissible(*t))
      throw TypeError(TypeErrorKind::BadLShape, loc,
                      "L argument type " + t->to_string() + " is neither δ nor a first order type over ground arguments");
    out.push_back(real_flavour(t));
  }
  return out;
}

TypePtr const_type(const node::Const& c) {
  auto nat = Type::nat();
  auto arr = [](TypePtr a, TypePtr b) { return Type::arrow(std::move(a), std::move(b)); };
  switch (c.prim) {
    case Prim::InPi: return arr(nat, Type::real());
    case Prim::InDelta: return arr(Type::real(), Type::dual());
    case Prim::Pos: return arr(Type::real(), Type::boolean());
    case Prim::Succ:
    case Prim::Pred: return arr(nat, nat);
    case Prim::IsZero: return arr(nat, Type::boolean());
    case Prim::In: return arr(Type::dual(), Type::real());
    case Prim::Y: return arr(arr(c.fix_type, c.fix_type), c.fix_type);
    case Prim::L: {
      auto dirs = l_argument_direction_type(c.l_types);
      std::vector<TypePtr> args = dirs;
      args.insert(args.end(), dirs.begin(), dirs.end());
      return arr(Type::curried(c.l_types, Type::dual()), Type::curried(args, Type::real()));
    }
    default: break;
  }
  if (c.carrier == Carrier::Unresolved)
    throw TypeError(TypeErrorKind::Mismatch, {}, "constant " + std::string(prim_name(c.prim)) + " has no carrier");
  TypePtr t = carrier_type(c.carrier);
  switch (c.prim) {
    case Prim::Div: return arr(t, arr(nat, t));
    case Prim::Pr: return arr(t, t);
    case Prim::Int:
    case Prim::Sup: return arr(arr(Type::real(), t), t);
    default: return arr(t, arr(t, t));
  }
}

namespace {

using Env = std::vector<std::pair<std::string, TypePtr>>;

TypePtr lookup(const Env& env, const std::string& x) {
  for (auto it = env.rbegin(); it != env.rend(); ++it)
    if (it->first == x) return it->second;
  return nullptr;
}

[[noreturn]] void mismatch(SourceLoc loc, const std::string& msg) {
  throw TypeError(TypeErrorKind::Mismatch, loc, msg);
}

bool is_kind(const TypePtr& t, Type::Kind k) { return t && t->kind() == k; }

// Synthesised type without expectations. `flexible` marks numerals and
// arithmetic on numerals only, which may still be promoted to π or δ.
struct Hint {
  TypePtr type;
  bool flexible = false;
};

class Elaborator {
 public:
  Typed elab(const ExprPtr& e, Env& env, const TypePtr& expected) {
    Typed t = elab_inner(e, env, expected);
    return expected ? coerce(std::move(t), expected, e->loc()) : t;
  }

 private:
  std::unordered_map<const Expr*, Hint> memo_;

  static Typed coerce(Typed t, const TypePtr& want, SourceLoc loc) {
    if (same_type(t.type, want)) return t;
    auto k = t.type->kind();
    if (k == Type::Kind::Nat && want->kind() == Type::Kind::Real)
      return {mk_app(mk_const(Prim::InPi, Carrier::Unresolved, loc), t.expr, loc), want};
    if (k == Type::Kind::Nat && want->kind() == Type::Kind::Dual)
      return {mk_app(mk_const(Prim::InDelta, Carrier::Unresolved, loc),
                     mk_app(mk_const(Prim::InPi, Carrier::Unresolved, loc), t.expr, loc), loc),
              want};
    if (k == Type::Kind::Real && want->kind() == Type::Kind::Dual)
      return {mk_app(mk_const(Prim::InDelta, Carrier::Unresolved, loc), t.expr, loc), want};
    mismatch(loc, "expected " + want->to_string() + ", found " + t.type->to_string());
  }

  // ---- hints ----

  Hint hint(const ExprPtr& e, Env& env) {
    auto it = memo_.find(e.get());
    if (it != memo_.end()) return it->second;
    Hint h = hint_inner(e, env);
    memo_[e.get()] = h;
    return h;
  }

  static Hint numeric_join(const std::vector<Hint>& hs) {
    bool any_real = false, all_flexible = true;
    for (const auto& h : hs) {
      if (is_kind(h.type, Type::Kind::Dual)) return {Type::dual(), false};
      if (is_kind(h.type, Type::Kind::Real)) {
        any_real = true;
        if (!h.flexible) all_flexible = false;
      }
    }
    (void)any_real;
    return {Type::real(), all_flexible};
  }

  static Hint codomain(Hint h, std::size_t n) {
    TypePtr t = h.type;
    for (std::size_t i = 0; i < n; ++i) {
      if (!t || !t->is_arrow()) return {};
      t = t->to();
    }
    return {t, h.flexible && (!t || !t->is_arrow())};
  }

  Hint hint_inner(const ExprPtr& e, Env& env) {
    if (e->is<node::Nat>()) return {Type::nat(), true};
    if (e->is<node::Bool>()) return {Type::boolean()};
    if (e->is<node::IvLit>()) return {Type::real()};
    if (e->is<node::DualLit>()) return {Type::dual()};
    if (auto* v = e->as<node::Var>()) return {lookup(env, v->name)};
    if (auto* t = e->as<node::CostTagged>()) return hint(t->body, env);
    if (auto* b = e->as<node::Bisect>()) {
      auto c = carrier_type(b->carrier);
      return {Type::arrow(Type::arrow(Type::real(), c), c)};
    }
    if (auto* l = e->as<node::Lam>()) {
      if (!l->type) return {};
      env.emplace_back(l->param, l->type);
      Hint b = hint(l->body, env);
      env.pop_back();
      if (!b.type) return {};
      return {Type::arrow(l->type, b.type), b.flexible};
    }
    if (auto* i = e->as<node::If>()) {
      Hint a = hint(i->then_branch, env), b = hint(i->else_branch, env);
      if (is_kind(a.type, Type::Kind::Real) || is_kind(a.type, Type::Kind::Dual) ||
          is_kind(b.type, Type::Kind::Real) || is_kind(b.type, Type::Kind::Dual))
        return numeric_join({a, b});
      return a.type ? a : b;
    }
    if (e->is<node::Const>()) return {};
    Spine s = spine_of(e);
    std::size_t k = s.args.size();
    if (auto* lam = s.head->as<node::Lam>(); lam && !lam->type) {
      Hint bound = hint(s.args[0], env);
      env.emplace_back(lam->param, bound.type);
      Hint body = hint(lam->body, env);
      env.pop_back();
      return codomain(body, k - 1);
    }
    if (auto* c = s.head->as<node::Const>()) {
      switch (c->prim) {
        case Prim::Add:
        case Prim::Sub:
        case Prim::Mul:
        case Prim::Min:
        case Prim::Max:
          if (k != 2) return {};
          return numeric_join({hint(s.args[0], env), hint(s.args[1], env)});
        case Prim::Div:
          if (k != 2) return {};
          return numeric_join({hint(s.args[0], env)});
        case Prim::Pr:
          if (k != 1) return {};
          return numeric_join({hint(s.args[0], env)});
        case Prim::Int:
        case Prim::Sup: {
          if (k != 1) return {};
          Hint f = codomain(hint(s.args[0], env), 1);
          return numeric_join({f});
        }
        case Prim::InPi: return k == 1 ? Hint{Type::real()} : Hint{};
        case Prim::InDelta: return k == 1 ? Hint{Type::dual()} : Hint{};
        case Prim::Pos:
        case Prim::IsZero: return k == 1 ? Hint{Type::boolean()} : Hint{};
        case Prim::Succ:
        case Prim::Pred: return k == 1 ? Hint{Type::nat()} : Hint{};
        case Prim::In: return k == 1 ? Hint{Type::real()} : Hint{};
        case Prim::L: return k == const_arity(*c) ? Hint{Type::real()} : Hint{};
        case Prim::Y: return codomain({c->fix_type}, k - 1);
      }
    }
    return codomain(hint(s.head, env), k);
  }

  // ---- checking ----

  static const Type& final_codomain(const TypePtr& t) { return t->result(); }

  Carrier arith_carrier(const node::Const& c, const std::vector<ExprPtr>& args, std::size_t numeric_args,
                        const TypePtr& expected, Env& env) {
    std::size_t full = const_arity(c);
    std::vector<Hint> hs;
    for (std::size_t i = 0; i < std::min(numeric_args, args.size()); ++i) hs.push_back(hint(args[i], env));
    Hint h = numeric_join(hs);
    if (args.size() >= full) {
      if (is_kind(expected, Type::Kind::Dual) || is_kind(h.type, Type::Kind::Dual)) return Carrier::Dual;
      return Carrier::Real;
    }
    if (expected) {
      auto k = final_codomain(expected).kind();
      if (k == Type::Kind::Dual) return Carrier::Dual;
      if (k == Type::Kind::Real) return Carrier::Real;
    }
    if (!hs.empty() && is_kind(h.type, Type::Kind::Real) && !h.flexible) return Carrier::Real;
    return Carrier::Dual;
  }

  Carrier integral_carrier(const std::vector<ExprPtr>& args, const TypePtr& expected, Env& env) {
    if (!args.empty()) {
      if (is_kind(expected, Type::Kind::Dual)) return Carrier::Dual;
      Hint f = codomain(hint(args[0], env), 1);
      if (is_kind(f.type, Type::Kind::Dual)) return Carrier::Dual;
      return Carrier::Real;
    }
    if (expected && final_codomain(expected).kind() == Type::Kind::Real) return Carrier::Real;
    return Carrier::Dual;
  }

  // The head constant with its carrier chosen from context.
  Typed resolve_const(const ExprPtr& head, const std::vector<ExprPtr>& args, const TypePtr& expected, Env& env) {
    const auto& c = std::get<node::Const>(head->node());
    node::Const r = c;
    switch (c.prim) {
      case Prim::Add:
      case Prim::Sub:
      case Prim::Mul:
      case Prim::Min:
      case Prim::Max: r.carrier = arith_carrier(c, args, 2, expected, env); break;
      case Prim::Div:
      case Prim::Pr: r.carrier = arith_carrier(c, args, 1, expected, env); break;
      case Prim::Int:
      case Prim::Sup: r.carrier = integral_carrier(args, expected, env); break;
      case Prim::L:
        l_argument_direction_type(c.l_types, head->loc());
        for (const auto& a : args) {
          if (const Expr* inner = find_prim(a, Prim::L))
            throw TypeError(TypeErrorKind::LInsideLArgument, inner->loc(), "L occurs inside an argument of L");
        }
        r.carrier = Carrier::Dual;
        break;
      case Prim::In: r.carrier = Carrier::Dual; break;
      default: r.carrier = Carrier::Unresolved; break;
    }
    ExprPtr e = std::make_shared<const Expr>(r, head->loc());
    return {e, const_type(r)};
  }

  Typed apply(Typed head, const std::vector<ExprPtr>& args, std::size_t from, Env& env, SourceLoc loc) {
    for (std::size_t i = from; i < args.size(); ++i) {
      if (!head.type->is_arrow())
        mismatch(args[i]->loc(), "too many arguments: " + head.type->to_string() + " is not a function type");
      Typed a = elab(args[i], env, head.type->from());
      head = {mk_app(head.expr, a.expr, loc), head.type->to()};
    }
    return head;
  }

  Typed elab_inner(const ExprPtr& e, Env& env, const TypePtr& expected) {
    SourceLoc loc = e->loc();
    if (auto* n = e->as<node::Nat>()) {
      (void)n;
      return {e, Type::nat()};
    }
    if (auto* b = e->as<node::Bool>()) {
      (void)b;
      return {e, Type::boolean()};
    }
    if (e->is<node::IvLit>()) return {e, Type::real()};
    if (e->is<node::DualLit>()) return {e, Type::dual()};
    if (auto* v = e->as<node::Var>()) {
      TypePtr t = lookup(env, v->name);
      if (!t) throw TypeError(TypeErrorKind::UnboundVar, loc, "unbound variable '" + v->name + "'");
      return {mk_var(v->name, t, loc), t};
    }
    if (auto* l = e->as<node::Lam>()) {
      if (!l->type) mismatch(loc, "binder '" + l->param + "' needs a type annotation");
      TypePtr body_expected;
      if (expected && expected->is_arrow() && same_type(expected->from(), l->type)) body_expected = expected->to();
      env.emplace_back(l->param, l->type);
      Typed body = elab(l->body, env, body_expected);
      env.pop_back();
      return {mk_lam(l->param, l->type, body.expr, loc), Type::arrow(l->type, body.type)};
    }
    if (auto* i = e->as<node::If>()) {
      Typed c = elab(i->cond, env, Type::boolean());
      TypePtr t = expected;
      if (!t) {
        Hint a = hint(i->then_branch, env), b = hint(i->else_branch, env);
        if (a.type && b.type && a.type->is_ground() && b.type->is_ground() &&
            (is_kind(a.type, Type::Kind::Real) || is_kind(a.type, Type::Kind::Dual) ||
             is_kind(b.type, Type::Kind::Real) || is_kind(b.type, Type::Kind::Dual)))
          t = numeric_join({a, b}).type;
      }
      Typed a = elab(i->then_branch, env, t);
      if (!t) t = a.type;
      Typed b = elab(i->else_branch, env, t);
      return {mk_if(c.expr, a.expr, b.expr, t, loc), t};
    }
    if (auto* t = e->as<node::CostTagged>()) {
      Typed b = elab(t->body, env, expected);
      return {mk_tag(b.expr, t->cost, loc), b.type};
    }
    if (auto* b = e->as<node::Bisect>()) {
      node::Bisect r = *b;
      if (r.carrier == Carrier::Unresolved) {
        r.carrier = expected && final_codomain(expected).kind() == Type::Kind::Real ? Carrier::Real : Carrier::Dual;
      }
      auto c = carrier_type(r.carrier);
      return {std::make_shared<const Expr>(r, loc), Type::arrow(Type::arrow(Type::real(), c), c)};
    }
    if (e->is<node::Const>()) return resolve_const(e, {}, expected, env);

    Spine s = spine_of(e);
    if (auto* lam = s.head->as<node::Lam>(); lam && !lam->type) {
      Typed bound = elab(s.args[0], env, nullptr);
      env.emplace_back(lam->param, bound.type);
      Typed body = elab(lam->body, env, s.args.size() == 1 ? expected : nullptr);
      env.pop_back();
      Typed head{mk_app(mk_lam(lam->param, bound.type, body.expr, s.head->loc()), bound.expr, loc), body.type};
      return apply(head, s.args, 1, env, loc);
    }
    if (auto* c = s.head->as<node::Const>()) {
      if (c->prim == Prim::Pos && !s.args.empty()) {
        Typed probe = elab(s.args[0], env, nullptr);
        if (probe.type->kind() == Type::Kind::Dual)
          throw TypeError(TypeErrorKind::ZeroTestOnDual, s.args[0]->loc(), "(0<) cannot be applied to a δ value");
      }
      Typed head = resolve_const(s.head, s.args, s.args.size() >= const_arity(*c) ? expected : expected, env);
      return apply(head, s.args, 0, env, loc);
    }
    Typed head = elab(s.head, env, nullptr);
    return apply(head, s.args, 0, env, loc);
  }
};

}  // namespace

Typed elaborate(const ExprPtr& surface) {
  Elaborator el;
  Env env;
  return el.elab(surface, env, nullptr);
}

TypePtr typecheck(const ExprPtr& surface) { return elaborate(surface).type; }

TypePtr type_of(const ExprPtr& e) {
  SourceLoc loc = e->loc();
  if (auto* c = e->as<node::Const>()) return const_type(*c);
  if (e->is<node::Nat>()) return Type::nat();
  if (e->is<node::Bool>()) return Type::boolean();
  if (e->is<node::IvLit>()) return Type::real();
  if (e->is<node::DualLit>()) return Type::dual();
  if (auto* v = e->as<node::Var>()) {
    if (!v->type) throw TypeError(TypeErrorKind::UnboundVar, loc, "variable '" + v->name + "' has no type");
    return v->type;
  }
  if (auto* l = e->as<node::Lam>()) {
    if (!l->type) mismatch(loc, "unannotated binder");
    return Type::arrow(l->type, type_of(l->body));
  }
  if (auto* i = e->as<node::If>()) {
    if (type_of(i->cond)->kind() != Type::Kind::Bool) mismatch(loc, "condition is not of type o");
    TypePtr a = type_of(i->then_branch), b = type_of(i->else_branch);
    if (!same_type(a, b) || (i->type && !same_type(a, i->type))) mismatch(loc, "branch types differ");
    return a;
  }
  if (auto* t = e->as<node::CostTagged>()) return type_of(t->body);
  if (auto* b = e->as<node::Bisect>()) {
    auto c = carrier_type(b->carrier);
    return Type::arrow(Type::arrow(Type::real(), c), c);
  }
  const auto& app = std::get<node::App>(e->node());
  TypePtr f = type_of(app.fn);
  if (!f->is_arrow()) mismatch(loc, "applying a value of type " + f->to_string());
  TypePtr a = type_of(app.arg);
  if (!same_type(f->from(), a))
    mismatch(loc, "argument of type " + a->to_string() + " where " + f->from()->to_string() + " is expected");
  return f->to();
}

}  // namespace dualpcf
