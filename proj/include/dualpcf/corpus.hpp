#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualpcf/typing.hpp"

namespace dualpcf {

struct CorpusSource {
  std::string_view name;
  std::string_view text;
};

// The .dpcf files of corpus/, embedded at build time, sorted by name.
const std::vector<CorpusSource>& corpus_sources();

struct CorpusProgram {
  std::string name;
  std::string description;  // header comment lines other than metadata
  std::string source;
  std::optional<Rational> target_width;      // "# width: w", refine until both widths are within w
  std::optional<std::uint64_t> fixed_cost;  // "# cost: n", a single evaluation
  bool advanced = false;                 // "# tags: advanced"
  Typed program;
};

// Reads the header comments, then parses and elaborates. Parse and type
// errors propagate unchanged.
CorpusProgram load_program(std::string name, std::string source);

// Parses and elaborates every corpus entry; throws on the first failure.
std::vector<CorpusProgram> load_corpus();
std::optional<CorpusProgram> find_corpus_program(std::string_view name);

struct FirstOrderFunction {
  std::string name;
  std::string source;  // closed term of type δ → δ
};

// L-free first order functions used by the soundness suite.
const std::vector<FirstOrderFunction>& first_order_functions();

}  // namespace dualpcf
