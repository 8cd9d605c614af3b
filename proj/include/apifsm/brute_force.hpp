#pragma once

#include <set>
#include <vector>

#include "apifsm/fsm.hpp"
#include "apifsm/predicate.hpp"

namespace apifsm {

/// Upper bound on the variables the exhaustive oracle accepts.
inline constexpr std::size_t kOracleVariableLimit = 24;

/// Every projection onto `projection` of an assignment to the formula's
/// variables (together with the projection's) that satisfies it. Exhaustive
/// search with three-valued pruning; no CNF or solver involved. Throws
/// std::length_error past `limit` variables.
std::set<std::vector<bool>> brute_force_projections(const Formula& f, const std::vector<IndexedVariable>& projection,
                                                    std::size_t limit = kOracleVariableLimit);

/// The guard of σ₁ →meth σ₂ computed by exhaustive enumeration.
Guard brute_force_transition(const PreparedMethod& method, const AbstractState& from, const AbstractState& to,
                             std::size_t limit = kOracleVariableLimit);

/// |P|·(last+1) of a prepared method: the oracle's variable budget.
std::size_t oracle_size(const PreparedMethod& method);

/// The FSM with every guard computed by brute_force_transition.
Fsm brute_force_fsm(const ApiUnitModel& unit, const ExtractionOptions& options = {},
                    std::size_t limit = kOracleVariableLimit);

}  // namespace apifsm
