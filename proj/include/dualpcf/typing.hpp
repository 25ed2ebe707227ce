#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dualpcf/expr.hpp"

namespace dualpcf {

enum class TypeErrorKind { Mismatch, ZeroTestOnDual, LInsideLArgument, BadLShape, UnboundVar };

std::string_view type_error_kind_name(TypeErrorKind k);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, SourceLoc loc, const std::string& msg);
  TypeErrorKind kind() const { return kind_; }
  SourceLoc loc() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  TypeErrorKind kind_;
  SourceLoc loc_;
  std::string message_;
};

struct Typed {
  ExprPtr expr;  // carriers resolved, coercions inserted, binders and ifs annotated
  TypePtr type;
};

// Bidirectional elaboration of a surface term.
Typed elaborate(const ExprPtr& surface);
TypePtr typecheck(const ExprPtr& surface);

// Strict checker for elaborated and evaluation-only terms: no coercions,
// every constant must have a resolved carrier.
TypePtr type_of(const ExprPtr& core);

TypePtr const_type(const node::Const& c);

// τ⃗ ↦ τ⃗_π; throws BadLShape for an inadmissible τᵢ
std::vector<TypePtr> l_argument_direction_type(const std::vector<TypePtr>& ts, SourceLoc loc = {});

}  // namespace dualpcf
