#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "dualpcf/expr.hpp"

namespace dualpcf {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceLoc loc, const std::string& msg)
      : std::runtime_error(std::to_string(loc.line) + ":" + std::to_string(loc.column) + ": " + msg),
        loc_(loc), message_(msg) {}
  SourceLoc loc() const { return loc_; }
  const std::string& message() const { return message_; }

 private:
  SourceLoc loc_;
  std::string message_;
};

struct ParseOptions {
  // accept evaluation-only forms: [a,b], [a,b] + eps [c,d], ⟨e, n⟩,
  // ⟨int, (m,n)⟩, In, ⊥
  bool extended = false;
};

ExprPtr parse(std::string_view source, ParseOptions opts = {});
TypePtr parse_type(std::string_view source);

struct PrintOptions {
  bool ascii = false;  // \ -> delta pi nu instead of λ → δ π ν
};

std::string print(const ExprPtr& e, PrintOptions opts = {});

}  // namespace dualpcf
