#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dualpcf/machine.hpp"
#include "json.hpp"

namespace dualpcf {

struct CostRecord {
  std::uint64_t cost = 0;
  std::string status;  // value | undetermined | budget-exhausted
  std::uint64_t steps = 0;
  std::optional<ExtendedRational> std_width, inf_width;
};

struct RunReport {
  std::string program;
  std::string type;  // ascii rendering
  std::string status;
  std::vector<std::uint64_t> schedule;
  std::vector<CostRecord> widths;
  std::optional<DualInterval> final_value;  // δ and π results; π has inf [0,0]
  std::string final_text;                   // printed normal form, or the failure reason
  std::uint64_t cost = 0;
  std::uint64_t steps = 0;  // all evaluations together
  std::uint64_t step_budget = 0;
  bool budget_exhausted = false;
  bool reached = false;  // target width met, or a single cost evaluated
  double wall_ms = 0;
};

RunReport report_from_outcome(std::string program, const TypePtr& type, const Outcome& o,
                              std::uint64_t step_budget, double wall_ms);
RunReport report_from_refine(std::string program, const TypePtr& type, const RefineResult& r,
                             std::uint64_t step_budget, double wall_ms);

// Widths of successive values never increase.
bool widths_non_increasing(const RunReport& r);

nlohmann::json interval_json(const Interval& i);
Interval interval_from_json(const nlohmann::json& j);
// {"std":{"lo","hi"},"inf":{"lo","hi"}} with exact endpoint strings
nlohmann::json dual_json(const DualInterval& d);
DualInterval dual_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunReport& r);
RunReport report_from_json(const nlohmann::json& j);

}  // namespace dualpcf
