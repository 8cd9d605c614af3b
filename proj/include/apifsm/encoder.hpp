#pragma once

#include <map>
#include <string>
#include <vector>

#include "apifsm/predicate.hpp"
#include "apifsm/semantics.hpp"
#include "apifsm/source_model.hpp"

namespace apifsm {

/// Which symbols enter a context: everything ("auto") or an explicit list.
/// Symbols a method body refers to and catalog constants are always kept.
struct ContextSelection {
  bool automatic = true;
  std::vector<std::string> symbols;
};

/// Collection field name to its implementation kind.
std::map<std::string, std::string> collection_kinds(const ApiUnitModel& unit);

/// Catalog entries for every operator in the constructor and methods.
/// Throws UnknownOperation for operators without semantics.
std::vector<const OpSemantics*> used_semantics(const ApiUnitModel& unit, const SemanticsCatalog& catalog);

/// True iff some operator semantics used by the unit mentions exc.
bool unit_uses_exc(const ApiUnitModel& unit, const SemanticsCatalog& catalog);

/// Field and constant symbols shared by every method of the unit, all tagged
/// State: fields, literals occurring in the unit and catalog constants.
Context common_context(const ApiUnitModel& unit, const SemanticsCatalog& catalog,
                       const ContextSelection& selection = {});

/// The common context plus the method's parameters (tagged Indeterminacy).
/// Throws ConfigError when the selection names an unknown symbol.
Context build_context(const ApiUnitModel& unit, const MethodModel& method, const SemanticsCatalog& catalog,
                      const ContextSelection& selection = {});

/// Everything needed to encode statements of one method.
struct EncodingEnv {
  EncodingEnv(const Context& ctx, PredicateSet predicates, const SemanticsCatalog& catalog,
              std::map<std::string, std::string> kinds);

  const Context& ctx;
  PredicateSet predicates;
  const SemanticsCatalog& catalog;
  std::map<std::string, std::string> kinds;
  Formula axioms;  // unindexed
};

/// [[s]]^{i,j} for a single statement; j is the statement's own index.
Formula encode_statement(const Statement& statement, int i, int j, const EncodingEnv& env);
/// [[s1; ...; sn]]^{i,j}; an empty block requires i == j and yields true.
Formula encode_block(const Block& block, int i, int j, const EncodingEnv& env);

struct MethodEncoding {
  Formula formula;
  int last = 0;
};

/// axioms^0 ∧ [[body]]^{0,last(body)}.
MethodEncoding encode_method(const MethodModel& method, const EncodingEnv& env);

}  // namespace apifsm
