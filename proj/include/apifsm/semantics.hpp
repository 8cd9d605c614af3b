#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "apifsm/predicate.hpp"
#include "apifsm/source_model.hpp"

namespace apifsm {

/// Predicate semantics of one library operation: formal collections and
/// values, the predicates the operation may affect (templates over the
/// formals), and its transition formula over those predicates and their
/// primed copies.
struct OpSemantics {
  std::string operation;
  std::string collection_kind;
  std::vector<std::string> collection_formals;  // the receiver is the first
  std::vector<std::string> value_formals;
  /// Number of call arguments, matched positionally to the first value formals.
  std::size_t arguments = 0;
  /// Constant value symbols the formula refers to verbatim (e.g. null).
  std::vector<std::string> constants;
  PredicateSet affected;
  Formula formula;

  bool mentions_exc() const;
};

class SemanticsCatalog {
 public:
  /// HashSet/LinkedHashSet and TreeSet entries for construct, add, remove
  /// and clear.
  static const SemanticsCatalog& builtin();

  /// Parses catalog JSON: {"aliases": {kind: kind}, "interfaces": [type],
  /// "entries": [{"operation", "kind", "collections", "values", "arguments",
  /// "constants", "affects", "formula"}]}. Throws ConfigError.
  static SemanticsCatalog from_json(std::string_view text, const std::string& origin = "catalog");
  static SemanticsCatalog from_file(const std::filesystem::path& path);

  /// Validates and inserts an entry, replacing any entry with the same key.
  void add(OpSemantics entry);
  void add_alias(const std::string& kind, const std::string& target);
  void add_interface(const std::string& type) { interfaces_.insert(type); }
  /// Adds the other catalog's entries, aliases and interfaces.
  void merge(const SemanticsCatalog& other);

  /// Throws UnknownOperation when no entry exists. Aliased kinds resolve to
  /// their target (LinkedHashSet behaves as HashSet).
  const OpSemantics& lookup(std::string_view operation, std::string_view kind) const;
  bool has(std::string_view operation, std::string_view kind) const;

  std::string resolve_kind(std::string_view kind) const;
  /// Every concrete kind, aliases included.
  std::set<std::string> kinds() const;
  const std::set<std::string>& interfaces() const { return interfaces_; }

  /// Parse options recognising this catalog's kinds and interfaces.
  ParseOptions parse_options() const;

 private:
  std::map<std::pair<std::string, std::string>, OpSemantics> entries_;
  std::map<std::string, std::string> aliases_;
  std::set<std::string> interfaces_;
};

struct Expansion {
  /// Instantiated transition formula conjoined with the frame p' = p for every
  /// predicate outside `touched` (unindexed: steps kCurrent/kPrimed).
  Formula formula;
  PredicateSet touched;
};

/// Expands an invocation: the receiver binds the first collection formal and
/// the k-th argument the k-th value formal; unmatched formals are instantiated
/// with every context symbol of their sort, separately for the formula and
/// for each affected-predicate template, only where they occur.
Expansion expand(const OpSemantics& semantics, const PlainOp& invocation, const Context& ctx,
                 const PredicateSet& predicates);

}  // namespace apifsm
