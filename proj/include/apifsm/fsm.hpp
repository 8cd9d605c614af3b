#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apifsm/encoder.hpp"
#include "apifsm/predicate.hpp"
#include "apifsm/sat.hpp"
#include "apifsm/semantics.hpp"
#include "apifsm/source_model.hpp"

namespace apifsm {

using Valuation = std::map<Predicate, bool>;

/// `pred` or `!pred`.
std::string literal_text(const Predicate& p, bool value);

/// Partial valuation of state predicates; the empty valuation is σ₀.
struct AbstractState {
  Valuation valuation;

  bool is_initial() const { return valuation.empty(); }
  /// this ⊑ other: decides everything other decides, identically.
  bool refines(const AbstractState& other) const;
  /// Literals joined by `separator`, or "init" for σ₀.
  std::string label(const std::string& separator = ", ") const;

  auto operator<=>(const AbstractState&) const = default;
  bool operator==(const AbstractState&) const = default;
};

struct StateSpace {
  enum class Mode { AllConcrete, Custom };

  Mode mode = Mode::AllConcrete;
  PredicateSet predicates;            // predicates the states range over
  std::vector<AbstractState> states;  // σ₀ first
};

/// σ₀ plus every total valuation of `choice` (all of `p_st` when absent).
/// Throws ConfigError when the choice contains a non-state predicate.
StateSpace state_space(const PredicateSet& p_st, const std::optional<PredicateSet>& choice = std::nullopt);

/// σ₀ plus the given states. They must be pairwise non-refining partial
/// valuations over `p_st` and every total valuation must refine one of them.
StateSpace custom_state_space(const PredicateSet& p_st, const std::vector<Valuation>& states);

/// DNF over the indeterminacy predicates at method entry.
struct Guard {
  PredicateSet variables;                       // P_nd, canonical order
  std::vector<std::vector<bool>> conjuncts;     // sorted, distinct, total
  std::optional<std::vector<std::vector<bool>>> care;  // valuations consistent with the source state

  bool is_false() const { return conjuncts.empty(); }
  /// Covers every valuation in the care set (all valuations without one).
  bool is_true() const;
  bool holds(const std::vector<bool>& valuation) const;
  /// Sorts and deduplicates conjuncts and care.
  void normalize();

  bool operator==(const Guard&) const = default;
};

/// A simplified guard: disjunction of cubes; each cube maps a predicate to
/// its required value. No cubes is false, one empty cube is true.
struct GuardExpression {
  std::vector<Valuation> cubes;

  bool is_true() const { return cubes.size() == 1 && cubes.front().empty(); }
  bool is_false() const { return cubes.empty(); }
  bool evaluate(const Valuation& valuation) const;
  /// e.g. `idOpt=null ∧ idMain≠idOpt ∧ idMain≠null`.
  std::string to_string() const;
};

/// `a=b`, `v∈c`, `empty(c)`, `exc` and their negations.
std::string guard_literal(const Predicate& p, bool value);

/// Two-level minimisation of the DNF. Valuations outside the care set are
/// don't-cares when `use_care` is set. The result is checked against the
/// guard by truth table.
GuardExpression simplify_guard(const Guard& guard, bool use_care = true);

struct Transition {
  std::size_t from = 0;
  std::string method;
  Guard guard;
  std::size_t to = 0;

  bool operator==(const Transition&) const = default;
};

struct Fsm {
  std::vector<AbstractState> states;
  std::size_t initial = 0;
  std::vector<std::string> alphabet;
  std::vector<Transition> transitions;

  static std::string state_id(std::size_t index) { return "s" + std::to_string(index); }
  bool operator==(const Fsm&) const = default;
};

/// A method encoded once and reused for every state pair.
struct PreparedMethod {
  std::string label;
  Context context;
  PredicateSet predicates;
  PredicateSet nd_predicates;
  MethodEncoding encoding;
  Formula entry_axioms;  // axioms@0
  CnfInstance cnf;
  std::vector<int> projection;  // P_nd@0
  std::vector<int> trace;       // every original variable
};

PreparedMethod prepare_method(const ApiUnitModel& unit, const MethodModel& method, const std::string& label,
                              const SemanticsCatalog& catalog, const ContextSelection& selection, bool include_exc);

/// φ₀ = σ₁@0 ∧ [[meth]] ∧ σ₂@last, as a formula (pins included).
Formula transition_formula(const PreparedMethod& method, const AbstractState& from, const AbstractState& to);

struct TransitionStats {
  std::size_t solver_calls = 0;
};

/// Guard of σ₁ →meth σ₂; false iff φ₀ is unsatisfiable.
Guard compute_transition(const PreparedMethod& method, const AbstractState& from, const AbstractState& to,
                         const SolverConfig& solver = {}, BlockingMode blocking = BlockingMode::Projection,
                         TransitionStats* stats = nullptr);

struct ExtractionOptions {
  const SemanticsCatalog* catalog = nullptr;  // builtin when null
  ContextSelection context;
  std::optional<std::vector<std::string>> state_predicates;  // all of P_st when absent
  std::optional<std::vector<Valuation>> custom_states;
  SolverConfig solver;
  BlockingMode blocking = BlockingMode::Projection;
  bool prune_unreachable = false;
  unsigned threads = 1;
};

struct TaskReport {
  std::size_t from = 0;
  std::string method;
  std::size_t to = 0;
  std::size_t nd_predicates = 0;
  std::size_t solver_calls = 0;
};

struct ExtractionReport {
  PredicateSet state_predicates;  // P_st of the common context
  StateSpace space;
  std::vector<TaskReport> tasks;
};

/// Common-context P_st of a unit.
PredicateSet unit_state_predicates(const ApiUnitModel& unit, const SemanticsCatalog& catalog,
                                   const ContextSelection& selection);

/// The state space an extraction with these options would use.
StateSpace unit_state_space(const ApiUnitModel& unit, const ExtractionOptions& options);

/// Labels and bodies: the constructor (named after the unit) then each public method.
std::vector<std::pair<std::string, MethodModel>> fsm_methods(const ApiUnitModel& unit);

/// Guard computation used by extract_fsm; swapped out by the oracle.
using TransitionFunction =
    std::function<Guard(const PreparedMethod&, const AbstractState&, const AbstractState&, TransitionStats*)>;

Fsm extract_fsm(const ApiUnitModel& unit, const ExtractionOptions& options = {}, ExtractionReport* report = nullptr);
Fsm extract_fsm_with(const ApiUnitModel& unit, const ExtractionOptions& options, const TransitionFunction& compute,
                     ExtractionReport* report = nullptr);

/// Drops states unreachable from the initial state, renumbering the rest.
Fsm prune_unreachable(const Fsm& fsm);

}  // namespace apifsm
