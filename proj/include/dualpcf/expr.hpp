#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dualpcf/numeric.hpp"
#include "dualpcf/type.hpp"

namespace dualpcf {

struct SourceLoc {
  int line = 0;
  int column = 0;
  bool known() const { return line > 0; }
};

enum class Prim : std::uint8_t {
  Add, Sub, Mul, Div, Min, Max, Pr,
  InPi, InDelta, Pos,
  Int, Sup, L, Y,
  Succ, Pred, IsZero,
  In,
};

// Which value domain an overloaded constant works on. Parsed terms start
// out Unresolved; elaboration picks Real (π) or Dual (δ).
enum class Carrier : std::uint8_t { Unresolved, Real, Dual };

std::string_view prim_name(Prim p);
bool prim_is_strict(Prim p);
bool prim_is_overloaded(Prim p);

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace node {

struct Const {
  Prim prim;
  Carrier carrier = Carrier::Unresolved;
  TypePtr fix_type;              // Y only
  std::vector<TypePtr> l_types;  // L only
};
struct Nat { std::uint64_t value; };
// nullopt is ⊥_o, produced only by (0<) during evaluation
struct Bool { std::optional<bool> value; };
struct Var {
  std::string name;
  TypePtr type;  // filled in by elaboration
};
struct App { ExprPtr fn, arg; };
struct Lam {
  std::string param;
  TypePtr type;  // null for an unannotated let binder before elaboration
  ExprPtr body;
};
struct If {
  ExprPtr cond, then_branch, else_branch;
  TypePtr type;  // filled in by elaboration
};

// evaluation-only forms
struct CostTagged { ExprPtr body; std::uint64_t cost; };
struct Bisect {  // ⟨int,(m,n)⟩ and ⟨sup,(m,n)⟩
  Prim prim;
  Carrier carrier;
  std::uint64_t depth, cost;
};
struct IvLit { Interval value; };
struct DualLit { DualInterval value; };

}  // namespace node

class Expr {
 public:
  using Node = std::variant<node::Const, node::Nat, node::Bool, node::Var, node::App, node::Lam,
                            node::If, node::CostTagged, node::Bisect, node::IvLit, node::DualLit>;

  Expr(Node n, SourceLoc loc);

  const Node& node() const { return node_; }
  SourceLoc loc() const { return loc_; }
  // sorted, duplicate free
  const std::vector<std::string>& free_vars() const { return fv_; }
  bool closed() const { return fv_.empty(); }
  bool has_free(std::string_view x) const;

  template <class T> const T* as() const { return std::get_if<T>(&node_); }
  template <class T> bool is() const { return std::holds_alternative<T>(node_); }

 private:
  Node node_;
  SourceLoc loc_;
  std::vector<std::string> fv_;
};

ExprPtr mk_const(Prim p, Carrier c = Carrier::Unresolved, SourceLoc loc = {});
ExprPtr mk_fix(TypePtr t, SourceLoc loc = {});
ExprPtr mk_deriv(std::vector<TypePtr> ts, SourceLoc loc = {});
ExprPtr mk_nat(std::uint64_t v, SourceLoc loc = {});
ExprPtr mk_bool(std::optional<bool> v, SourceLoc loc = {});
ExprPtr mk_var(std::string name, TypePtr t = nullptr, SourceLoc loc = {});
ExprPtr mk_app(ExprPtr f, ExprPtr a, SourceLoc loc = {});
ExprPtr mk_apps(ExprPtr f, const std::vector<ExprPtr>& args);
ExprPtr mk_lam(std::string x, TypePtr t, ExprPtr body, SourceLoc loc = {});
ExprPtr mk_if(ExprPtr c, ExprPtr a, ExprPtr b, TypePtr t = nullptr, SourceLoc loc = {});
ExprPtr mk_tag(ExprPtr e, std::uint64_t cost, SourceLoc loc = {});
ExprPtr mk_bisect(Prim p, Carrier c, std::uint64_t depth, std::uint64_t cost, SourceLoc loc = {});
ExprPtr mk_iv(Interval v, SourceLoc loc = {});
ExprPtr mk_dual(DualInterval v, SourceLoc loc = {});
// carrier-resolved binary primitive application, used by the machine and macros
ExprPtr mk_binop(Prim p, Carrier c, ExprPtr a, ExprPtr b);

// Number of arguments a constant consumes before it can fire.
std::size_t const_arity(const node::Const& c);

struct Spine {
  ExprPtr head;
  std::vector<ExprPtr> args;
};
Spine spine_of(const ExprPtr& e);

// Capture-avoiding e[v/x].
ExprPtr subst(const ExprPtr& e, const std::string& x, const ExprPtr& v);

bool alpha_equal(const ExprPtr& a, const ExprPtr& b);
bool is_eval_only(const ExprPtr& e);  // any evaluation-only node anywhere
const Expr* find_prim(const ExprPtr& e, Prim p);
std::size_t expr_size(const ExprPtr& e);

}  // namespace dualpcf
