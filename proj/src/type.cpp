#include "dualpcf/type.hpp"

namespace dualpcf {

TypePtr Type::boolean() {
  static const TypePtr t = std::make_shared<const Type>(Kind::Bool, nullptr, nullptr);
  return t;
}

TypePtr Type::nat() {
  static const TypePtr t = std::make_shared<const Type>(Kind::Nat, nullptr, nullptr);
  return t;
}

TypePtr Type::real() {
  static const TypePtr t = std::make_shared<const Type>(Kind::Real, nullptr, nullptr);
  return t;
}

TypePtr Type::dual() {
  static const TypePtr t = std::make_shared<const Type>(Kind::Dual, nullptr, nullptr);
  return t;
}

TypePtr Type::arrow(TypePtr from, TypePtr to) {
  return std::make_shared<const Type>(Kind::Arrow, std::move(from), std::move(to));
}

TypePtr Type::curried(const std::vector<TypePtr>& args, TypePtr result) {
  for (auto it = args.rbegin(); it != args.rend(); ++it) result = arrow(*it, result);
  return result;
}

const Type& Type::result() const {
  const Type* t = this;
  while (t->is_arrow()) t = t->to_.get();
  return *t;
}

std::vector<TypePtr> Type::arguments() const {
  std::vector<TypePtr> out;
  for (const Type* t = this; t->is_arrow(); t = t->to_.get()) out.push_back(t->from_);
  return out;
}

std::string Type::to_string(bool ascii) const {
  switch (kind_) {
    case Kind::Bool: return "o";
    case Kind::Nat: return ascii ? "nu" : "ν";
    case Kind::Real: return ascii ? "pi" : "π";
    case Kind::Dual: return ascii ? "delta" : "δ";
    case Kind::Arrow: break;
  }
  std::string lhs = from_->to_string(ascii);
  if (from_->is_arrow()) lhs = "(" + lhs + ")";
  return lhs + (ascii ? " -> " : " → ") + to_->to_string(ascii);
}

bool same_type(const Type& a, const Type& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  if (!a.is_arrow()) return true;
  return same_type(*a.from(), *b.from()) && same_type(*a.to(), *b.to());
}

bool is_first_order_type(const Type& t) {
  if (t.kind() == Type::Kind::Dual) return true;
  return t.is_arrow() && t.from()->kind() == Type::Kind::Dual && is_first_order_type(*t.to());
}

bool is_second_order_type(const Type& t) {
  if (t.kind() == Type::Kind::Dual) return true;
  return t.is_arrow() && is_first_order_type(*t.from()) && is_second_order_type(*t.to());
}

bool is_continuous_type(const Type& t) {
  auto k = t.result().kind();
  return k == Type::Kind::Real || k == Type::Kind::Dual;
}

bool is_l_admissible(const Type& t) {
  if (t.kind() == Type::Kind::Dual) return true;
  return t.is_arrow() && t.from()->is_ground() && is_l_admissible(*t.to());
}

TypePtr real_flavour(const TypePtr& t) {
  if (t->kind() == Type::Kind::Dual) return Type::real();
  if (!t->is_arrow()) return t;
  return Type::arrow(t->from(), real_flavour(t->to()));
}

}  // namespace dualpcf
