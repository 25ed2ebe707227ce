#include "dualpcf/report.hpp"

#include "dualpcf/syntax.hpp"

namespace dualpcf {

using nlohmann::json;

namespace {

CostRecord record_of(const Outcome& o) {
  CostRecord c;
  c.cost = o.cost;
  c.status = std::string(status_name(o.status));
  c.steps = o.steps;
  if (auto d = o.as_dual()) {
    c.std_width = iv_width(d->std);
    c.inf_width = iv_width(d->inf);
  }
  return c;
}

void fill_final(RunReport& r, const Outcome& o) {
  r.status = std::string(status_name(o.status));
  r.final_value = o.as_dual();
  r.final_text = o.value ? print(o.value, {true}) : o.reason;
  r.cost = o.cost;
  r.budget_exhausted = o.status == Outcome::Status::BudgetExhausted;
}

json width_json(const std::optional<ExtendedRational>& w) { return w ? json(w->to_string()) : json(nullptr); }

std::optional<ExtendedRational> width_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return parse_extended(j.get<std::string>());
}

}  // namespace

RunReport report_from_outcome(std::string program, const TypePtr& type, const Outcome& o,
                              std::uint64_t step_budget, double wall_ms) {
  RunReport r;
  r.program = std::move(program);
  r.type = type->to_string(true);
  r.schedule = {o.cost};
  r.widths = {record_of(o)};
  fill_final(r, o);
  r.steps = o.steps;
  r.step_budget = step_budget;
  r.reached = o.ok();
  r.wall_ms = wall_ms;
  return r;
}

RunReport report_from_refine(std::string program, const TypePtr& type, const RefineResult& rr,
                             std::uint64_t step_budget, double wall_ms) {
  RunReport r;
  r.program = std::move(program);
  r.type = type->to_string(true);
  for (const auto& [cost, o] : rr.trace) {
    r.schedule.push_back(cost);
    r.widths.push_back(record_of(o));
    r.steps += o.steps;
    if (o.status == Outcome::Status::BudgetExhausted) r.budget_exhausted = true;
  }
  fill_final(r, rr.outcome);
  r.budget_exhausted = r.budget_exhausted || rr.outcome.status == Outcome::Status::BudgetExhausted;
  r.step_budget = step_budget;
  r.reached = rr.reached;
  r.wall_ms = wall_ms;
  return r;
}

bool widths_non_increasing(const RunReport& r) {
  std::optional<ExtendedRational> s, i;
  for (const auto& c : r.widths) {
    if (!c.std_width) continue;
    if (s && (*c.std_width > *s || *c.inf_width > *i)) return false;
    s = c.std_width;
    i = c.inf_width;
  }
  return true;
}

json interval_json(const Interval& i) { return {{"lo", i.lo().to_string()}, {"hi", i.hi().to_string()}}; }

Interval interval_from_json(const json& j) {
  return Interval::from_endpoints(parse_extended(j.at("lo").get<std::string>()),
                                  parse_extended(j.at("hi").get<std::string>()));
}

json dual_json(const DualInterval& d) { return {{"std", interval_json(d.std)}, {"inf", interval_json(d.inf)}}; }

DualInterval dual_from_json(const json& j) {
  return {interval_from_json(j.at("std")), interval_from_json(j.at("inf"))};
}

json to_json(const RunReport& r) {
  json widths = json::array();
  for (const auto& c : r.widths)
    widths.push_back({{"cost", c.cost},
                      {"status", c.status},
                      {"steps", c.steps},
                      {"std", width_json(c.std_width)},
                      {"inf", width_json(c.inf_width)}});
  json j = {{"program", r.program},
            {"type", r.type},
            {"status", r.status},
            {"schedule", r.schedule},
            {"widths", widths},
            {"text", r.final_text},
            {"cost", r.cost},
            {"steps", r.steps},
            {"budget", {{"limit", r.step_budget}, {"exhausted", r.budget_exhausted}}},
            {"reached", r.reached},
            {"wall_ms", r.wall_ms}};
  j["final"] = r.final_value ? dual_json(*r.final_value) : json(nullptr);
  return j;
}

RunReport report_from_json(const json& j) {
  RunReport r;
  r.program = j.at("program").get<std::string>();
  r.type = j.at("type").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.schedule = j.at("schedule").get<std::vector<std::uint64_t>>();
  for (const auto& w : j.at("widths")) {
    CostRecord c;
    c.cost = w.at("cost").get<std::uint64_t>();
    c.status = w.at("status").get<std::string>();
    c.steps = w.at("steps").get<std::uint64_t>();
    c.std_width = width_from(w.at("std"));
    c.inf_width = width_from(w.at("inf"));
    r.widths.push_back(std::move(c));
  }
  if (!j.at("final").is_null()) r.final_value = dual_from_json(j.at("final"));
  r.final_text = j.at("text").get<std::string>();
  r.cost = j.at("cost").get<std::uint64_t>();
  r.steps = j.at("steps").get<std::uint64_t>();
  r.step_budget = j.at("budget").at("limit").get<std::uint64_t>();
  r.budget_exhausted = j.at("budget").at("exhausted").get<bool>();
  r.reached = j.at("reached").get<bool>();
  r.wall_ms = j.at("wall_ms").get<double>();
  return r;
}

}  // namespace dualpcf
