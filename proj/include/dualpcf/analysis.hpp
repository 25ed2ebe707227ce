#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "dualpcf/machine.hpp"
#include "dualpcf/typing.hpp"

namespace dualpcf {

// ---------------------------------------------------------------------------
// Logical relations

// A ground value. nullopt in the ν and o alternatives is ⊥.
using Ground = std::variant<DualInterval, Interval, std::optional<std::uint64_t>, std::optional<bool>>;

std::string ground_to_string(const Ground& g);
// The value of a normal form of ground type; nullopt for a non-value or an
// unfinished evaluation.
std::optional<Ground> ground_of(const Outcome& o, const Type& t);
ExprPtr ground_literal(const Ground& g);

// St(x3) ⊑ St(x1) ⊓ St(x2) and r·In(x3) ↑ St(x2) − St(x1)
bool relation_holds_ground(const Rational& r, const DualInterval& x1, const DualInterval& x2,
                           const DualInterval& x3);
// π, ν and o read as δ with a hidden zero infinitesimal part
bool relation_holds_ground(const Rational& r, const Ground& x1, const Ground& x2, const Ground& x3);

// Something of type τ1 → … → τk → ground that can be applied to closed
// argument terms. nullopt means inconclusive (budget exhausted).
using Subject = std::function<std::optional<Ground>(const std::vector<ExprPtr>& args)>;

struct EvalSettings {
  std::uint64_t cost = 4;
  std::uint64_t step_budget = 200'000;
};

// Applies a closed term to the arguments and evaluates at a fixed cost.
Subject term_subject(ExprPtr f, EvalSettings s = {});
// Host function on ground arguments, given as literals.
Subject host_subject(std::function<Ground(const std::vector<Ground>&)> f);

struct Triple {
  ExprPtr x1, x2, x3;
  std::string describe() const;
};

struct SamplerOptions {
  unsigned max_exponent = 10;  // dyadic endpoints k/2^j, j ≤ max_exponent
  long max_numerator = 3 << 10;
  double bottom_probability = 0.08;
  double point_probability = 0.3;
};

// Random triples related by R^r at a given type. Ground triples come from
// dyadic endpoints and ⊥ components; first order continuous triples follow
// the pattern (f, f + r·g, f + ([0,r] + ε)·g); other function triples are
// self related definable terms.
class TripleSampler {
 public:
  TripleSampler(std::uint64_t seed, SamplerOptions opts = {});
  Triple sample(const Rational& r, const TypePtr& t);
  Rational random_dyadic();
  Interval random_interval();
  DualInterval random_dual();
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  SamplerOptions opts_;

  bool coin(double p);
  Triple ground_triple(const Rational& r, const TypePtr& t);
  Triple function_triple(const Rational& r, const TypePtr& t);
  std::string random_body(const std::vector<std::string>& vars, int depth);
};

struct RelationVerdict {
  bool holds = true;
  std::size_t samples = 0;       // conclusive samples
  std::size_t inconclusive = 0;  // budget exhausted somewhere
  std::string counterexample;    // first failing instance
};

// Samples related argument triples for the arguments of τ and checks that
// the three results are related.
RelationVerdict relation_holds(const Rational& r, const TypePtr& t, const Subject& s1, const Subject& s2,
                               const Subject& s3, std::size_t samples, TripleSampler& sampler);
// Self-relatedness R^r(f, f, f) for each r.
RelationVerdict logically_consistent(const TypePtr& t, const Subject& s, const std::vector<Rational>& rs,
                                     std::size_t samples_per_r, TripleSampler& sampler);

// Five random dyadic r in (0, 4].
std::vector<Rational> sample_ratios(std::mt19937_64& rng, std::size_t count = 5);

struct ConstantCase {
  std::string name;
  TypePtr type;
  Subject subject;
};

// Every constant of the language except L and In, at each carrier and at a
// representative set of fixed point types.
std::vector<ConstantCase> constant_cases(EvalSettings s = {});

// max with the meet of the infinitesimal parts dropped in the overlap case
DualInterval broken_dual_max(const DualInterval& a, const DualInterval& b);

// ---------------------------------------------------------------------------
// Finite differences

class OracleInconclusive : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleGrid {
  unsigned k_min = 3, k_max = 12;  // r = 2^-k
  unsigned points = 9;             // y symmetric around x with radius 2^-k
  Rational tolerance = dyadic(1, 8);
  Rational eval_width = dyadic(1, 30);  // target width for St f(y)
  std::uint64_t max_cost = 64;
  std::uint64_t step_budget = 1'000'000;
};

struct Quotient {
  Rational y, r;
  Interval value;
};

struct OracleEstimate {
  std::vector<Quotient> quotients;
  std::vector<std::pair<unsigned, Interval>> levels;  // (k, hull of that level)
  Interval hull;                                       // hull of the finest level
};

// Difference quotients (St f(y + r x') − St f(y)) / r for f : δ → δ.
OracleEstimate finite_diff_oracle(const ExprPtr& f, const Rational& x, const Rational& dx,
                                  const OracleGrid& grid = {});

struct SoundnessVerdict {
  bool holds = true;
  std::vector<std::pair<std::uint64_t, Interval>> machine;  // (n, In f(x + ε x'))
  OracleEstimate oracle;
  std::string violation;
};

// The oracle hull must lie inside In(f(x + ε x')) inflated by the tolerance,
// at every cost in the schedule.
SoundnessVerdict check_L_soundness(const ExprPtr& f, const Rational& x, const Rational& dx,
                                   const std::vector<std::uint64_t>& costs = {0, 1, 2, 4},
                                   const OracleGrid& grid = {});

// Five (x, x') pairs; several sit on kinks of the first order corpus functions.
std::vector<std::pair<Rational, Rational>> soundness_points();

struct RefinementVerdict {
  bool holds = true;
  std::vector<Outcome> results;  // one per cost evaluated
  std::size_t exhausted = 0;     // costs not evaluated to a value
  std::string violation;
};

// eval_at_cost(e, costs[i]) ⊑ eval_at_cost(e, costs[i+1]). Once a cost
// exhausts the step budget, larger costs are counted as exhausted without
// being run.
RefinementVerdict check_monotone_refinement(const ExprPtr& e, const std::vector<std::uint64_t>& costs,
                                            MachineOptions opts = {});

// Information order on ground results: b refines a.
bool ground_refines(const Ground& a, const Ground& b);

struct RobustnessVerdict {
  bool holds = true;
  std::size_t samples = 0;
  std::string violation;
};

// St f(x + ε a) = St f(x + ε b) for random x, a, b; f : δ → δ.
RobustnessVerdict check_standard_robustness(const ExprPtr& f, std::size_t samples, std::mt19937_64& rng,
                                            EvalSettings s = {});

}  // namespace dualpcf
