#pragma once

#include <memory>
#include <string>
#include <vector>

namespace dualpcf {

class Type;
using TypePtr = std::shared_ptr<const Type>;

// o | ν | π | δ | τ → τ
class Type {
 public:
  enum class Kind { Bool, Nat, Real, Dual, Arrow };

  static TypePtr boolean();
  static TypePtr nat();
  static TypePtr real();
  static TypePtr dual();
  static TypePtr arrow(TypePtr from, TypePtr to);
  // a1 → a2 → ... → result
  static TypePtr curried(const std::vector<TypePtr>& args, TypePtr result);

  Kind kind() const { return kind_; }
  bool is_arrow() const { return kind_ == Kind::Arrow; }
  bool is_ground() const { return kind_ != Kind::Arrow; }
  const TypePtr& from() const { return from_; }
  const TypePtr& to() const { return to_; }

  // final codomain after stripping all arrows
  const Type& result() const;
  std::vector<TypePtr> arguments() const;

  std::string to_string(bool ascii = false) const;

  Type(Kind k, TypePtr from, TypePtr to) : kind_(k), from_(std::move(from)), to_(std::move(to)) {}

 private:
  Kind kind_;
  TypePtr from_, to_;
};

bool same_type(const Type& a, const Type& b);
inline bool same_type(const TypePtr& a, const TypePtr& b) { return same_type(*a, *b); }

// δ → (… → (δ → δ)), including δ itself
bool is_first_order_type(const Type& t);
// τ1 → … → τn → δ with every τi δ or first order
bool is_second_order_type(const Type& t);
// final codomain π or δ
bool is_continuous_type(const Type& t);
// admissible argument type of L: δ, or σ1 → … → σn → δ with ground σi
bool is_l_admissible(const Type& t);
// τ_π: δ ↦ π, σ1 → … → δ ↦ σ1 → … → π
TypePtr real_flavour(const TypePtr& t);

}  // namespace dualpcf
