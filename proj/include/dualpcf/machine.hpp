#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualpcf/expr.hpp"

namespace dualpcf {

constexpr std::uint64_t kDefaultStepBudget = 10'000'000;

// DUALPCF_BUDGET if set to a positive integer, else kDefaultStepBudget.
std::uint64_t default_step_budget();

class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::uint64_t steps)
      : std::runtime_error("step budget exhausted after " + std::to_string(steps) + " steps"), steps_(steps) {}
  std::uint64_t steps() const { return steps_; }

 private:
  std::uint64_t steps_;
};

// No rule applies to a non-value. Unreachable on well-typed closed terms.
class StuckTerm : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A conditional on ⊥_o at a non-continuous type.
class UndeterminedBranch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outcome {
  enum class Status { Value, Undetermined, BudgetExhausted };

  Status status = Status::Value;
  ExprPtr value;  // normal form when status == Value
  std::string reason;
  std::uint64_t steps = 0;
  std::uint64_t cost = 0;

  bool ok() const { return status == Status::Value; }
  std::optional<DualInterval> dual() const;       // δ results
  std::optional<Interval> interval() const;       // π results
  // δ as is, π embedded with a zero infinitesimal part
  std::optional<DualInterval> as_dual() const;
  std::optional<std::uint64_t> natural() const;
  std::optional<bool> boolean() const;
};

std::string_view status_name(Outcome::Status s);

bool is_value(const ExprPtr& e);

// ⊥ of a continuous type: the ⊥ literal wrapped in λs.
ExprPtr bottom_of(const TypePtr& t);

// Closed macro terms used by the L rule.
ExprPtr lift_plus(const TypePtr& t);
ExprPtr lift_eps(const TypePtr& t);
// τ_π → τ: pointwise in_δ
ExprPtr lift_up(const TypePtr& t);

// One unfolding of ⟨int,(m,n)⟩ f or ⟨sup,(m,n)⟩ f.
ExprPtr reduce_bisect(Prim p, Carrier c, const ExprPtr& f, std::uint64_t m, std::uint64_t n);
ExprPtr reduce_L(const node::Const& l, const ExprPtr& f, const std::vector<ExprPtr>& points,
                 const std::vector<ExprPtr>& dirs, std::uint64_t n);
// ⟨Y_σ, n⟩ f for continuous σ, or the untagged unfolding when n is empty.
ExprPtr reduce_Y(const TypePtr& sigma, const ExprPtr& f, std::optional<std::uint64_t> n);

struct MachineOptions {
  std::uint64_t step_budget = default_step_budget();
};

class Machine {
 public:
  explicit Machine(MachineOptions opts = {}) : opts_(opts) {}

  // Exactly one reduction step, or nullopt on a value. Throws StuckTerm,
  // UndeterminedBranch.
  std::optional<ExprPtr> step(const ExprPtr& e);

  // Normal form of a closed configuration. Performs the same contractions,
  // in the same order, as iterating step; counts them against the budget.
  ExprPtr normalize(const ExprPtr& e);

  Outcome run(const ExprPtr& config);
  Outcome run_by_steps(const ExprPtr& config);
  Outcome eval_at_cost(const ExprPtr& e, std::uint64_t n);

  std::uint64_t steps() const { return steps_; }
  void reset() { steps_ = 0; }

 private:
  MachineOptions opts_;
  std::uint64_t steps_ = 0;

  void tick();
  ExprPtr step_redex(const ExprPtr& e);
  template <class Finish> Outcome guarded(const ExprPtr& config, std::uint64_t cost, Finish finish);
};

struct RefineResult {
  Outcome outcome;  // last successful evaluation, or the failure if none
  std::uint64_t cost_used = 0;
  bool reached = false;          // both widths within the target
  bool ceiling_reached = false;  // cost ceiling or step budget stopped the search
  std::vector<std::pair<std::uint64_t, Outcome>> trace;
};

// Costs 1, 2, 4, ... up to max_cost.
RefineResult eval_refine(const ExprPtr& e, const Rational& target_width, std::uint64_t max_cost = 64,
                         MachineOptions opts = {});

}  // namespace dualpcf
