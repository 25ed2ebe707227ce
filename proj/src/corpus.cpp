#include "dualpcf/corpus.hpp"

#include <sstream>

#include "dualpcf/syntax.hpp"

namespace dualpcf {

static std::string trimmed(std::string s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

CorpusProgram load_program(std::string name, std::string source) {
  CorpusProgram p;
  p.name = std::move(name);
  p.source = std::move(source);
  std::istringstream in(p.source);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) != 0) break;
    std::string body = trimmed(line.substr(1));
    if (body.rfind("width:", 0) == 0) {
      p.target_width = parse_rational(body.substr(6));
    } else if (body.rfind("cost:", 0) == 0) {
      p.fixed_cost = std::stoull(trimmed(body.substr(5)));
    } else if (body.rfind("tags:", 0) == 0) {
      p.advanced = body.find("advanced") != std::string::npos;
    } else if (!body.empty()) {
      p.description += (p.description.empty() ? "" : " ") + body;
    }
  }
  p.program = elaborate(parse(p.source));
  return p;
}

static CorpusProgram load_one(const CorpusSource& src) {
  try {
    return load_program(std::string(src.name), std::string(src.text));
  } catch (const std::exception& e) {
    throw std::runtime_error("corpus program " + std::string(src.name) + ": " + e.what());
  }
}

std::vector<CorpusProgram> load_corpus() {
  std::vector<CorpusProgram> out;
  for (const auto& s : corpus_sources()) out.push_back(load_one(s));
  return out;
}

std::optional<CorpusProgram> find_corpus_program(std::string_view name) {
  for (const auto& s : corpus_sources())
    if (s.name == name) return load_one(s);
  return std::nullopt;
}

const std::vector<FirstOrderFunction>& first_order_functions() {
  static const std::vector<FirstOrderFunction> fs = {
      {"abs", "fun x: delta. max(x, 0 - x)"},
      {"square", "fun x: delta. x * x"},
      {"cube", "fun x: delta. x * x * x"},
      {"clamp", "fun x: delta. pr x"},
      {"relu", "fun x: delta. max(x, 0)"},
      {"tent", "fun x: delta. min(x, 1 - x)"},
      {"abs_minus_abs", "fun x: delta. max(x, 0 - x) - max(x, 0 - x)"},
      {"quadratic", "fun x: delta. x * x - 2 * x + 1/3"},
      {"shifted_clamp", "fun x: delta. pr (2 * x - 1)"},
      {"square_floor", "fun x: delta. max(x * x, 1/4)"},
      {"unit_clamp", "fun x: delta. min(max(x, 0), 1)"},
      {"x_relu", "fun x: delta. x * max(x, 0)"},
      {"abs_times_x", "fun x: delta. max(x, 0 - x) * x"},
      {"cubic_roots", "fun x: delta. (x + 1/2) * (x - 1/3) * x"},
      {"v_shape", "fun x: delta. max(x - 1, 1 - 2 * x)"},
      {"clamped_cube", "fun x: delta. pr (x * x * x)"},
      {"min_square", "fun x: delta. min(x * x, x)"},
      {"affine", "fun x: delta. 3 * x - 5/4"},
      {"abs_floor", "fun x: delta. max(max(x, 0 - x), 1/2)"},
      {"mixed", "fun x: delta. x / 3 + min(x, 0) * 2"},
  };
  return fs;
}

}  // namespace dualpcf
