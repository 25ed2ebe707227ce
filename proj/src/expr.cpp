#include "dualpcf/expr.hpp"

#include <algorithm>
#include <functional>
#include <iterator>
#include <utility>

namespace dualpcf {

std::string_view prim_name(Prim p) {
  switch (p) {
    case Prim::Add: return "+";
    case Prim::Sub: return "-";
    case Prim::Mul: return "*";
    case Prim::Div: return "/";
    case Prim::Min: return "min";
    case Prim::Max: return "max";
    case Prim::Pr: return "pr";
    case Prim::InPi: return "in_pi";
    case Prim::InDelta: return "in_delta";
    case Prim::Pos: return "(0<)";
    case Prim::Int: return "int";
    case Prim::Sup: return "sup";
    case Prim::L: return "L";
    case Prim::Y: return "Y";
    case Prim::Succ: return "succ";
    case Prim::Pred: return "pred";
    case Prim::IsZero: return "iszero";
    case Prim::In: return "In";
  }
  return "?";
}

bool prim_is_strict(Prim p) {
  switch (p) {
    case Prim::Int:
    case Prim::Sup:
    case Prim::L:
    case Prim::Y: return false;
    default: return true;
  }
}

bool prim_is_overloaded(Prim p) {
  switch (p) {
    case Prim::Add:
    case Prim::Sub:
    case Prim::Mul:
    case Prim::Div:
    case Prim::Min:
    case Prim::Max:
    case Prim::Pr:
    case Prim::Int:
    case Prim::Sup: return true;
    default: return false;
  }
}

static std::vector<std::string> merge(const std::vector<std::string>& a,
                                      const std::vector<std::string>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  std::vector<std::string> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Expr::Expr(Node n, SourceLoc loc) : node_(std::move(n)), loc_(loc) {
  std::visit(
      [this](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          fv_.push_back(x.name);
        } else if constexpr (std::is_same_v<T, node::App>) {
          fv_ = merge(x.fn->fv_, x.arg->fv_);
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          fv_ = x.body->fv_;
          auto it = std::lower_bound(fv_.begin(), fv_.end(), x.param);
          if (it != fv_.end() && *it == x.param) fv_.erase(it);
        } else if constexpr (std::is_same_v<T, node::If>) {
          fv_ = merge(merge(x.cond->fv_, x.then_branch->fv_), x.else_branch->fv_);
        } else if constexpr (std::is_same_v<T, node::CostTagged>) {
          fv_ = x.body->fv_;
        }
      },
      node_);
}

bool Expr::has_free(std::string_view x) const {
  return std::binary_search(fv_.begin(), fv_.end(), x,
                            [](const auto& a, const auto& b) { return std::string_view(a) < std::string_view(b); });
}

ExprPtr mk_const(Prim p, Carrier c, SourceLoc loc) {
  return std::make_shared<const Expr>(node::Const{p, c, nullptr, {}}, loc);
}

ExprPtr mk_fix(TypePtr t, SourceLoc loc) {
  return std::make_shared<const Expr>(node::Const{Prim::Y, Carrier::Unresolved, std::move(t), {}}, loc);
}

ExprPtr mk_deriv(std::vector<TypePtr> ts, SourceLoc loc) {
  return std::make_shared<const Expr>(node::Const{Prim::L, Carrier::Dual, nullptr, std::move(ts)}, loc);
}

ExprPtr mk_nat(std::uint64_t v, SourceLoc loc) { return std::make_shared<const Expr>(node::Nat{v}, loc); }

ExprPtr mk_bool(std::optional<bool> v, SourceLoc loc) {
  return std::make_shared<const Expr>(node::Bool{v}, loc);
}

ExprPtr mk_var(std::string name, TypePtr t, SourceLoc loc) {
  return std::make_shared<const Expr>(node::Var{std::move(name), std::move(t)}, loc);
}

ExprPtr mk_app(ExprPtr f, ExprPtr a, SourceLoc loc) {
  if (!loc.known()) loc = f->loc();
  return std::make_shared<const Expr>(node::App{std::move(f), std::move(a)}, loc);
}

ExprPtr mk_apps(ExprPtr f, const std::vector<ExprPtr>& args) {
  for (const auto& a : args) f = mk_app(f, a);
  return f;
}

ExprPtr mk_lam(std::string x, TypePtr t, ExprPtr body, SourceLoc loc) {
  return std::make_shared<const Expr>(node::Lam{std::move(x), std::move(t), std::move(body)}, loc);
}

ExprPtr mk_if(ExprPtr c, ExprPtr a, ExprPtr b, TypePtr t, SourceLoc loc) {
  return std::make_shared<const Expr>(node::If{std::move(c), std::move(a), std::move(b), std::move(t)}, loc);
}

ExprPtr mk_tag(ExprPtr e, std::uint64_t cost, SourceLoc loc) {
  if (!loc.known()) loc = e->loc();
  return std::make_shared<const Expr>(node::CostTagged{std::move(e), cost}, loc);
}

ExprPtr mk_bisect(Prim p, Carrier c, std::uint64_t depth, std::uint64_t cost, SourceLoc loc) {
  return std::make_shared<const Expr>(node::Bisect{p, c, depth, cost}, loc);
}

ExprPtr mk_iv(Interval v, SourceLoc loc) { return std::make_shared<const Expr>(node::IvLit{std::move(v)}, loc); }

ExprPtr mk_dual(DualInterval v, SourceLoc loc) {
  return std::make_shared<const Expr>(node::DualLit{std::move(v)}, loc);
}

ExprPtr mk_binop(Prim p, Carrier c, ExprPtr a, ExprPtr b) {
  return mk_app(mk_app(mk_const(p, c), std::move(a)), std::move(b));
}

std::size_t const_arity(const node::Const& c) {
  switch (c.prim) {
    case Prim::Add:
    case Prim::Sub:
    case Prim::Mul:
    case Prim::Div:
    case Prim::Min:
    case Prim::Max: return 2;
    case Prim::L: return 1 + 2 * c.l_types.size();
    default: return 1;
  }
}

Spine spine_of(const ExprPtr& e) {
  Spine s;
  const ExprPtr* cur = &e;
  while (auto* app = (*cur)->as<node::App>()) {
    s.args.push_back(app->arg);
    cur = &app->fn;
  }
  s.head = *cur;
  std::reverse(s.args.begin(), s.args.end());
  return s;
}

static std::string fresh_name(const std::string& base, const ExprPtr& avoid1, const ExprPtr& avoid2) {
  for (int i = 1;; ++i) {
    std::string cand = base + "_" + std::to_string(i);
    if (!avoid1->has_free(cand) && !avoid2->has_free(cand)) return cand;
  }
}

ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v) {
  if (!e->has_free(x)) return e;
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Var>) {
          return v;
        } else if constexpr (std::is_same_v<T, node::App>) {
          return std::make_shared<const Expr>(node::App{subst(n.fn, x, v), subst(n.arg, x, v)}, e->loc());
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          if (!v->has_free(n.param)) {
            return std::make_shared<const Expr>(node::Lam{n.param, n.type, subst(n.body, x, v)}, e->loc());
          }
          std::string y = fresh_name(n.param, v, n.body);
          ExprPtr body = subst(n.body, n.param, mk_var(y, n.type));
          return std::make_shared<const Expr>(node::Lam{y, n.type, subst(body, x, v)}, e->loc());
        } else if constexpr (std::is_same_v<T, node::If>) {
          return std::make_shared<const Expr>(
              node::If{subst(n.cond, x, v), subst(n.then_branch, x, v), subst(n.else_branch, x, v), n.type},
              e->loc());
        } else if constexpr (std::is_same_v<T, node::CostTagged>) {
          return std::make_shared<const Expr>(node::CostTagged{subst(n.body, x, v), n.cost}, e->loc());
        } else {
          return e;
        }
      },
      e->node());
}

namespace {

struct AlphaEq {
  std::vector<std::pair<std::string, std::string>> bound;

  bool var_eq(const std::string& a, const std::string& b) const {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
      if (it->first == a || it->second == b) return it->first == a && it->second == b;
    }
    return a == b;
  }

  static bool type_eq(const TypePtr& a, const TypePtr& b) {
    if (!a || !b) return !a && !b;
    return same_type(a, b);
  }

  bool eq(const ExprPtr& a, const ExprPtr& b) {
    if (a->node().index() != b->node().index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          const T& y = std::get<T>(b->node());
          if constexpr (std::is_same_v<T, node::Const>) {
            if (x.prim != y.prim || x.carrier != y.carrier || !type_eq(x.fix_type, y.fix_type)) return false;
            if (x.l_types.size() != y.l_types.size()) return false;
            for (std::size_t i = 0; i < x.l_types.size(); ++i)
              if (!same_type(x.l_types[i], y.l_types[i])) return false;
            return true;
          } else if constexpr (std::is_same_v<T, node::Nat>) {
            return x.value == y.value;
          } else if constexpr (std::is_same_v<T, node::Bool>) {
            return x.value == y.value;
          } else if constexpr (std::is_same_v<T, node::Var>) {
            return var_eq(x.name, y.name);
          } else if constexpr (std::is_same_v<T, node::App>) {
            return eq(x.fn, y.fn) && eq(x.arg, y.arg);
          } else if constexpr (std::is_same_v<T, node::Lam>) {
            if (!type_eq(x.type, y.type)) return false;
            bound.emplace_back(x.param, y.param);
            bool r = eq(x.body, y.body);
            bound.pop_back();
            return r;
          } else if constexpr (std::is_same_v<T, node::If>) {
            return eq(x.cond, y.cond) && eq(x.then_branch, y.then_branch) && eq(x.else_branch, y.else_branch);
          } else if constexpr (std::is_same_v<T, node::CostTagged>) {
            return x.cost == y.cost && eq(x.body, y.body);
          } else if constexpr (std::is_same_v<T, node::Bisect>) {
            return x.prim == y.prim && x.carrier == y.carrier && x.depth == y.depth && x.cost == y.cost;
          } else {
            return x.value == y.value;
          }
        },
        a->node());
  }
};

}  // namespace

bool alpha_equal(const ExprPtr& a, const ExprPtr& b) {
  AlphaEq eq;
  return eq.eq(a, b);
}

static bool any_node(const ExprPtr& e, const std::function<bool(const Expr&)>& pred) {
  if (pred(*e)) return true;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::App>) {
          return any_node(n.fn, pred) || any_node(n.arg, pred);
        } else if constexpr (std::is_same_v<T, node::Lam>) {
          return any_node(n.body, pred);
        } else if constexpr (std::is_same_v<T, node::If>) {
          return any_node(n.cond, pred) || any_node(n.then_branch, pred) || any_node(n.else_branch, pred);
        } else if constexpr (std::is_same_v<T, node::CostTagged>) {
          return any_node(n.body, pred);
        } else {
          return false;
        }
      },
      e->node());
}

bool is_eval_only(const ExprPtr& e) {
  return any_node(e, [](const Expr& x) {
    if (x.is<node::CostTagged>() || x.is<node::Bisect>() || x.is<node::IvLit>() || x.is<node::DualLit>())
      return true;
    if (auto* b = x.as<node::Bool>()) return !b->value.has_value();
    if (auto* c = x.as<node::Const>()) return c->prim == Prim::In;
    return false;
  });
}

const Expr* find_prim(const ExprPtr& e, Prim p) {
  const Expr* found = nullptr;
  any_node(e, [&](const Expr& x) {
    auto* c = x.as<node::Const>();
    if (c && c->prim == p) {
      found = &x;
      return true;
    }
    return false;
  });
  return found;
}

std::size_t expr_size(const ExprPtr& e) {
  std::size_t n = 0;
  any_node(e, [&](const Expr&) {
    ++n;
    return false;
  });
  return n;
}

}  // namespace dualpcf
