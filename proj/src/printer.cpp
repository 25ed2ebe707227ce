#include "dualpcf/syntax.hpp"

namespace dualpcf {
namespace {

// 0 open forms (λ, if, let), 1 sums, 2 products, 3 applications, 4 atoms
class Printer {
 public:
  explicit Printer(PrintOptions opts) : opts_(opts) {}

  std::string show(const ExprPtr& e, int ctx) {
    int prec = 0;
    std::string s = render(e, prec);
    return prec < ctx ? "(" + s + ")" : s;
  }

 private:
  PrintOptions opts_;

  std::string type(const TypePtr& t) const { return t->to_string(opts_.ascii); }

  std::string constant(const node::Const& c) const {
    switch (c.prim) {
      case Prim::Add:
      case Prim::Sub:
      case Prim::Mul:
      case Prim::Div: return "(" + std::string(prim_name(c.prim)) + ")";
      case Prim::Y: return "Y[" + type(c.fix_type) + "]";
      case Prim::L: {
        std::string s = "L[";
        for (std::size_t i = 0; i < c.l_types.size(); ++i) s += (i ? ", " : "") + type(c.l_types[i]);
        return s + "]";
      }
      default: return std::string(prim_name(c.prim));
    }
  }

  std::string render(const ExprPtr& e, int& prec) {
    prec = 4;
    if (auto* c = e->as<node::Const>()) return constant(*c);
    if (auto* n = e->as<node::Nat>()) return std::to_string(n->value);
    if (auto* b = e->as<node::Bool>()) return !b->value ? "⊥" : *b->value ? "tt" : "ff";
    if (auto* v = e->as<node::Var>()) return v->name;
    if (auto* iv = e->as<node::IvLit>()) return iv->value.to_string();
    if (auto* d = e->as<node::DualLit>()) return d->value.to_string();
    if (auto* t = e->as<node::CostTagged>()) return "⟨" + show(t->body, 0) + ", " + std::to_string(t->cost) + "⟩";
    if (auto* b = e->as<node::Bisect>())
      return "⟨" + std::string(prim_name(b->prim)) + ", (" + std::to_string(b->depth) + "," +
             std::to_string(b->cost) + ")⟩";
    if (auto* l = e->as<node::Lam>()) {
      prec = 0;
      return (opts_.ascii ? "fun " : "λ") + l->param + ":" + type(l->type) + ". " + show(l->body, 0);
    }
    if (auto* i = e->as<node::If>()) {
      prec = 0;
      return "if " + show(i->cond, 0) + " then " + show(i->then_branch, 0) + " else " + show(i->else_branch, 0);
    }
    const auto& app = std::get<node::App>(e->node());
    if (auto* lam = app.fn->as<node::Lam>(); lam && !lam->type) {
      prec = 0;
      return "let " + lam->param + " = " + show(app.arg, 0) + " in " + show(lam->body, 0);
    }
    Spine s = spine_of(e);
    if (auto* c = s.head->as<node::Const>(); c && s.args.size() == 2) {
      switch (c->prim) {
        case Prim::Add:
        case Prim::Sub:
          prec = 1;
          return show(s.args[0], 1) + " " + std::string(prim_name(c->prim)) + " " + show(s.args[1], 2);
        case Prim::Mul:
        case Prim::Div:
          prec = 2;
          return show(s.args[0], 2) + " " + std::string(prim_name(c->prim)) + " " + show(s.args[1], 3);
        case Prim::Min:
        case Prim::Max:
          return std::string(prim_name(c->prim)) + "(" + show(s.args[0], 0) + ", " + show(s.args[1], 0) + ")";
        default: break;
      }
    }
    prec = 3;
    std::string out = show(s.head, 3);
    for (const auto& a : s.args) out += " " + show(a, 4);
    return out;
  }
};

}  // namespace

std::string print(const ExprPtr& e, PrintOptions opts) {
  Printer p(opts);
  return p.show(e, 0);
}

}  // namespace dualpcf
