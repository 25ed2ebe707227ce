#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dualpcf/corpus.hpp"
#include "dualpcf/syntax.hpp"

using namespace dualpcf;

namespace {

ExprPtr px(const std::string& s) { return parse(s, {true}); }

ExprPtr plus(ExprPtr a, ExprPtr b) { return mk_apps(mk_const(Prim::Add), {std::move(a), std::move(b)}); }

}  // namespace

TEST_CASE("parse the absolute value") {
  ExprPtr e = parse("λx:δ. max(x, 0 − x)");
  auto* lam = e->as<node::Lam>();
  REQUIRE(lam);
  CHECK(lam->param == "x");
  CHECK(same_type(lam->type, Type::dual()));
  Spine s = spine_of(lam->body);
  REQUIRE(s.head->as<node::Const>());
  CHECK(s.head->as<node::Const>()->prim == Prim::Max);
  CHECK(s.args.size() == 2);
  CHECK(alpha_equal(e, parse("fun y: delta. max(y, 0 - y)")));
  CHECK(alpha_equal(e, parse("\\z: δ. max(z, 0 - z)")));
}

TEST_CASE("syntax errors") {
  CHECK_THROWS_AS(parse("λ"), ParseError);
  CHECK_THROWS_AS(parse("fun x. x"), ParseError);  // binders need a type
  CHECK_THROWS_AS(parse("1 +"), ParseError);
  CHECK_THROWS_AS(parse("f 1"), ParseError);       // unbound
  CHECK_THROWS_AS(parse("[0,1]"), ParseError);     // literal outside extended mode
  CHECK_THROWS_AS(parse("Y[delta -> ] f"), ParseError);
  try {
    parse("let x = 1 in\n  y");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.loc().line == 2);
    CHECK(e.loc().column == 3);
  }
}

TEST_CASE("types") {
  CHECK(same_type(parse_type("pi -> delta -> delta"), parse_type("π → (δ → δ)")));
  CHECK(parse_type("(pi -> delta) -> delta")->to_string() == "(π → δ) → δ");
  CHECK(parse_type("(pi -> delta) -> delta")->to_string(true) == "(pi -> delta) -> delta");
  CHECK(parse_type("o")->kind() == Type::Kind::Bool);
  CHECK(parse_type("nu")->kind() == Type::Kind::Nat);
}

TEST_CASE("printing") {
  CHECK(print(mk_lam("x", Type::dual(), mk_var("x"))) == "λx:δ. x");
  CHECK(print(mk_lam("x", Type::dual(), mk_var("x")), {true}) == "fun x:delta. x");
  CHECK(print(mk_dual(parse_dual("[0,0] + eps [-1,1]"))) == "[0,0] + eps [-1,1]");
  CHECK(print(mk_tag(mk_const(Prim::Int, Carrier::Dual), 3)) == "⟨int, 3⟩");
  CHECK(print(mk_bisect(Prim::Sup, Carrier::Real, 2, 5)) == "⟨sup, (2,5)⟩");
  CHECK(print(px("1 - (2 - 3)")) == "1 - (2 - 3)");
  CHECK(print(px("(1 - 2) - 3")) == "1 - 2 - 3");
  CHECK(print(px("(1 + 2) * 3")) == "(1 + 2) * 3");
  CHECK(print(px("Y[pi -> pi] (fun f: pi -> pi. f)")) == "Y[π → π] (λf:π → π. f)");
  CHECK(print(px("L[pi -> delta, delta]")) == "L[π → δ, δ]");
}

TEST_CASE("print then parse gives the same term for every corpus program") {
  for (const auto& s : corpus_sources()) {
    CAPTURE(s.name);
    ExprPtr e = parse(s.text);
    for (bool ascii : {false, true}) {
      ExprPtr back = parse(print(e, {ascii}));
      CHECK(alpha_equal(e, back));
    }
    // elaborated programs print back to terms that elaborate to themselves
    Typed t = elaborate(e);
    CHECK(alpha_equal(t.expr, elaborate(px(print(t.expr))).expr));
  }
  for (const auto& f : first_order_functions()) {
    ExprPtr e = parse(f.source);
    CHECK(alpha_equal(e, parse(print(e))));
  }
}

TEST_CASE("evaluation only forms round trip") {
  for (const char* s : {"⟨(fun x: delta. x * x) [3,3], 4⟩", "⟨int, (2,3)⟩ (fun t: pi. in_delta t)",
                        "In ([1,2] + eps [3,4])", "[-inf,inf] + eps [-inf,inf]", "⟨⟨[1,1], 2⟩, 3⟩",
                        "(fun x: delta. x) ([1/2,3/4] + eps [-1,1])"}) {
    CAPTURE(s);
    ExprPtr e = px(s);
    CHECK(alpha_equal(e, px(print(e))));
    CHECK(is_eval_only(e));
  }
  CHECK_FALSE(is_eval_only(parse("fun x: delta. x")));
}

TEST_CASE("comments and sugar") {
  ExprPtr e = parse("# leading comment\nlet sq = fun x: delta. x * x # trailing\nin sq 3");
  CHECK(e->closed());
  ExprPtr a = parse("int[0,2] (fun t: pi. t)");
  // (b - a) * int (λy. f ((b - a) * y + a))
  Spine s = spine_of(a);
  REQUIRE(s.head->as<node::Const>());
  CHECK(s.head->as<node::Const>()->prim == Prim::Mul);
  CHECK(find_prim(a, Prim::Int) != nullptr);
  CHECK(alpha_equal(parse("max(1, 2)"), parse("(max 1) 2")));
  CHECK(alpha_equal(parse("(+) 1 2"), parse("1 + 2")));
}

TEST_CASE("substitution") {
  ExprPtr x = mk_var("x");
  ExprPtr three = mk_nat(3);
  CHECK(alpha_equal(subst(plus(x, x), "x", three), plus(three, three)));
  ExprPtr closed = parse("fun y: delta. y");
  CHECK(subst(closed, "x", three).get() == closed.get());
  // shadowed binder untouched
  ExprPtr shadow = mk_lam("x", Type::dual(), mk_var("x"));
  CHECK(alpha_equal(subst(shadow, "x", three), shadow));
  // capture avoidance: (λy. x + y)[y/x] = λz. y + z
  ExprPtr body = mk_lam("y", Type::dual(), plus(x, mk_var("y")));
  ExprPtr r = subst(body, "x", mk_var("y"));
  ExprPtr expected = mk_lam("z", Type::dual(), plus(mk_var("y"), mk_var("z")));
  CHECK(alpha_equal(r, expected));
  CHECK(r->free_vars() == std::vector<std::string>{"y"});
}

TEST_CASE("free variables and size") {
  ExprPtr e = mk_app(mk_lam("x", Type::dual(), plus(mk_var("x"), mk_var("z"))), mk_var("w"));
  CHECK(e->free_vars() == std::vector<std::string>{"w", "z"});
  CHECK(e->has_free("z"));
  CHECK_FALSE(e->has_free("x"));
  CHECK(expr_size(mk_nat(1)) == 1);
}
