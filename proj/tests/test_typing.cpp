#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>

#include "dualpcf/corpus.hpp"
#include "dualpcf/syntax.hpp"

using namespace dualpcf;

namespace {

std::string type_str(const std::string& src) { return typecheck(parse(src))->to_string(true); }

TypeErrorKind error_kind(const std::string& src) {
  try {
    typecheck(parse(src));
  } catch (const TypeError& e) {
    return e.kind();
  }
  FAIL("no type error for " << src);
  return TypeErrorKind::Mismatch;
}

}  // namespace

TEST_CASE("simple programs") {
  CHECK(type_str("λx:δ. max(x, 0 − x)") == "delta -> delta");
  CHECK(type_str("fun x: pi. x + 1") == "pi -> pi");
  CHECK(type_str("int (fun t: pi. in_delta t)") == "delta");
  CHECK(type_str("int (fun t: pi. t)") == "pi");
  CHECK(type_str("sup (fun t: pi. t * t)") == "pi");
  CHECK(type_str("(0<) (1/2)") == "o");
  CHECK(type_str("iszero (succ zero)") == "o");
  CHECK(type_str("Y[delta] (fun y: delta. y / 2 + 1)") == "delta");
  CHECK(type_str("fun x: delta. pr x") == "delta -> delta");
  CHECK(type_str("fun b: o. if b then 1 else 2") == "o -> nu");
}

TEST_CASE("numerals are promoted where needed") {
  Typed t = elaborate(parse("fun x: delta. x + 1"));
  CHECK(print(t.expr, {true}) == "fun x:delta. x + in_delta (in_pi 1)");
  Typed u = elaborate(parse("fun x: pi. in_delta x * 3"));
  CHECK(print(u.expr, {true}) == "fun x:pi. in_delta x * in_delta (in_pi 3)");
  CHECK(type_str("(fun f: pi -> delta. f 2) (fun y: pi. in_delta y)") == "delta");
}

TEST_CASE("the derivative operator") {
  CHECK(type_str("L[delta] (fun x: delta. x * x) 3 1") == "pi");
  CHECK(type_str("L[pi -> delta] (fun g: pi -> delta. g 1)") == "(pi -> pi) -> (pi -> pi) -> pi");
  CHECK(type_str("L[delta, delta] (fun x: delta. fun y: delta. x * y) 1 2") == "pi -> pi -> pi");
  CHECK(type_str("L[delta, delta] (fun x: delta. fun y: delta. x * y) 1 2 3 4") == "pi");
}

TEST_CASE("error kinds") {
  CHECK(error_kind("fun x: delta. if (0<) x then 1 else 0") == TypeErrorKind::ZeroTestOnDual);
  CHECK(error_kind("L[delta] (fun x: delta. x + in_delta (L[delta] (fun y: delta. y) 0 1)) 0 1") ==
        TypeErrorKind::LInsideLArgument);
  CHECK(error_kind("L[nu] (fun n: nu. 1)") == TypeErrorKind::BadLShape);
  CHECK(error_kind("L[(pi -> delta) -> delta] (fun F: (pi -> delta) -> delta. F (fun t: pi. t))") ==
        TypeErrorKind::BadLShape);
  CHECK(error_kind("if 1 then 2 else 3") == TypeErrorKind::Mismatch);
  CHECK(error_kind("(fun x: nu. x) (1/2)") == TypeErrorKind::Mismatch);
  CHECK(error_kind("succ (1/2)") == TypeErrorKind::Mismatch);
  CHECK(error_kind("(fun x: delta. x) 1 2") == TypeErrorKind::Mismatch);
  CHECK(error_kind("fun x: delta. in_delta x") == TypeErrorKind::Mismatch);
  CHECK_THROWS_AS(elaborate(mk_var("q")), TypeError);
  try {
    elaborate(mk_var("q"));
  } catch (const TypeError& e) {
    CHECK(e.kind() == TypeErrorKind::UnboundVar);
  }
  CHECK(type_error_kind_name(TypeErrorKind::ZeroTestOnDual) == "ZeroTestOnDual");
}

TEST_CASE("type predicates") {
  CHECK(is_continuous_type(*Type::dual()));
  CHECK(is_continuous_type(*parse_type("(pi -> delta) -> delta")));
  CHECK_FALSE(is_continuous_type(*Type::nat()));
  CHECK(is_first_order_type(*parse_type("delta -> delta -> delta")));
  CHECK_FALSE(is_first_order_type(*parse_type("(delta -> delta) -> delta")));
  CHECK(is_l_admissible(*parse_type("pi -> nu -> delta")));
  CHECK_FALSE(is_l_admissible(*parse_type("(pi -> delta) -> delta")));
}

TEST_CASE("direction types") {
  auto dirs = l_argument_direction_type({Type::dual()});
  REQUIRE(dirs.size() == 1);
  CHECK(same_type(dirs[0], Type::real()));
  dirs = l_argument_direction_type({parse_type("pi -> delta")});
  CHECK(same_type(dirs[0], parse_type("pi -> pi")));
  CHECK_THROWS_AS(l_argument_direction_type({Type::nat()}), TypeError);
}

TEST_CASE("elaborated terms pass the strict checker") {
  for (const auto& p : load_corpus()) {
    CAPTURE(p.name);
    CHECK(same_type(type_of(p.program.expr), p.program.type));
    CHECK_FALSE(p.program.expr->free_vars().size());
  }
  for (const auto& f : first_order_functions()) {
    Typed t = elaborate(parse(f.source));
    CHECK(same_type(t.type, parse_type("delta -> delta")));
    CHECK(same_type(type_of(t.expr), t.type));
  }
  // the strict checker refuses unresolved carriers and missing coercions
  CHECK_THROWS_AS(type_of(parse("1 + 2")), TypeError);
  CHECK_THROWS_AS(type_of(parse("fun x: delta. x + in_pi 1")), TypeError);
}

TEST_CASE("corpus program types") {
  std::map<std::string, std::string> expected = {
      {"abs_deriv", "pi"},        {"chebyshev_functional", "pi"}, {"cube_root", "pi"},
      {"factorial_nat", "nu"},    {"int_id", "delta"},            {"ivp_const_field", "pi"},
      {"lagrangian_action", "pi"}, {"legendre_fenchel_halfsq", "pi"}, {"linear_functional", "pi"},
      {"nested_int_xyz", "pi"},   {"sup_id", "delta"},            {"thomas_fermi_cbrt", "pi"},
  };
  auto corpus = load_corpus();
  CHECK(corpus.size() == expected.size());
  for (const auto& p : corpus) {
    CAPTURE(p.name);
    CHECK(p.program.type->to_string(true) == expected[p.name]);
  }
}
