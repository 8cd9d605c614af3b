#pragma once

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace apifsm {

enum class Sort { Collection, Value };

/// State symbols are fixed per object state (fields, constants); indeterminacy
/// symbols are unknown at analysis time (method parameters).
enum class Role { State, Indeterminacy };

struct Symbol {
  std::string name;
  Sort sort = Sort::Value;
  Role role = Role::State;

  auto operator<=>(const Symbol&) const = default;
};

class Predicate;

/// The symbol universe an extraction is parameterised by.
class Context {
 public:
  Context() = default;
  Context(std::vector<Symbol> collections, std::vector<Symbol> values);

  /// Adds a symbol. Re-adding an identical symbol is a no-op; a clash in sort
  /// or role throws std::invalid_argument.
  void add(const Symbol& symbol);

  const std::vector<Symbol>& collections() const { return collections_; }
  const std::vector<Symbol>& values() const { return values_; }

  const Symbol* find(std::string_view name) const;
  bool has(std::string_view name) const { return find(name) != nullptr; }

  /// True iff every symbol the predicate refers to is a state symbol.
  /// Throws UnknownSymbol for predicates over foreign symbols.
  bool is_state(const Predicate& predicate) const;

  bool operator==(const Context&) const = default;

 private:
  std::vector<Symbol> collections_;
  std::vector<Symbol> values_;
};

enum class PredicateKind { Eq, Contains, Empty, Exc };

/// eq(a,b), contains(c,v), empty(c) or exc. Equalities are stored with their
/// arguments in lexicographic order so eq(a,b) and eq(b,a) coincide. Whether an
/// equality is over values or collections follows from the context.
class Predicate {
 public:
  Predicate() = default;  // exc

  static Predicate eq(std::string a, std::string b);
  static Predicate contains(std::string collection, std::string value);
  static Predicate empty(std::string collection);
  static Predicate exc();

  /// Parses the textual form produced by to_string().
  static Predicate parse(std::string_view text);

  PredicateKind kind() const { return kind_; }
  const std::string& first() const { return first_; }
  const std::string& second() const { return second_; }

  std::vector<std::string> symbols() const;
  std::string to_string() const;

  auto operator<=>(const Predicate&) const = default;
  bool operator==(const Predicate&) const = default;

 private:
  Predicate(PredicateKind kind, std::string first, std::string second)
      : kind_(kind), first_(std::move(first)), second_(std::move(second)) {}

  PredicateKind kind_ = PredicateKind::Exc;
  std::string first_;
  std::string second_;
};

using PredicateSet = std::vector<Predicate>;

/// p^i: the valuation of predicate p after operator i.
struct IndexedVariable {
  Predicate predicate;
  int step = 0;

  std::string to_string() const;
  auto operator<=>(const IndexedVariable&) const = default;
  bool operator==(const IndexedVariable&) const = default;
};

/// Unindexed formulas over P and P' reuse IndexedVariable with these steps.
inline constexpr int kCurrent = 0;
inline constexpr int kPrimed = 1;

/// Immutable Boolean formula; nodes are shared between copies.
class Formula {
 public:
  enum class Kind { Const, Var, Not, And, Or, Implies, Iff };

  Formula();  // Const(true)

  Kind kind() const { return node_->kind; }
  bool value() const { return node_->value; }
  const IndexedVariable& variable() const { return node_->variable; }
  const std::vector<Formula>& children() const { return node_->children; }

  bool is_const(bool v) const { return kind() == Kind::Const && value() == v; }
  const void* identity() const { return node_.get(); }

  /// Raw node constructor used where structure must be kept verbatim.
  static Formula make(Kind kind, std::vector<Formula> children);

  friend Formula constant(bool value);
  friend Formula var(IndexedVariable variable);

 private:
  struct Node {
    Kind kind = Kind::Const;
    bool value = true;
    IndexedVariable variable;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

Formula constant(bool value);
Formula var(IndexedVariable variable);
Formula var(const Predicate& predicate, int step);
Formula negate(const Formula& f);
Formula conjunction(std::vector<Formula> operands);
Formula disjunction(std::vector<Formula> operands);
Formula implies(const Formula& premise, const Formula& conclusion);
Formula iff(const Formula& a, const Formula& b);

/// Rebuilds f with every variable replaced by mapper(variable); connectives are
/// kept exactly.
Formula map_variables(const Formula& f, const std::function<Formula(const IndexedVariable&)>& mapper);

/// phi^{i,j}: current-step predicates become step i, primed ones step j.
Formula index_formula(const Formula& f, int i, int j);
/// phi^i for a formula without primed predicates.
Formula index_formula(const Formula& f, int i);

std::set<IndexedVariable> variables(const Formula& f);
std::set<Predicate> predicates(const Formula& f);
std::size_t connective_count(const Formula& f);

using Assignment = std::function<bool(const IndexedVariable&)>;
bool evaluate(const Formula& f, const Assignment& assignment);
bool evaluate(const Formula& f, const std::map<IndexedVariable, bool>& assignment);

/// Three-valued evaluation; lookup returns nullopt for unassigned variables.
std::optional<bool> evaluate_partial(
    const Formula& f, const std::function<std::optional<bool>(const IndexedVariable&)>& lookup);

/// SMT-LIB flavoured rendering, e.g. (and |empty(c)@1| (not |exc@1|)).
std::string to_smt(const Formula& f);

/// Parses the catalog formula grammar: atoms eq(x,y), contains(c,v), empty(c),
/// exc, true, false; a trailing ' primes an atom; connectives ! & | -> <->
/// (in decreasing precedence, -> right associative) and parentheses.
Formula parse_formula(std::string_view text);

/// All eq over unordered value pairs and collection pairs, contains(c,v),
/// empty(c), plus exc when requested; sorted.
PredicateSet predicate_universe(const Context& ctx, bool include_exc);

/// Conjunction of the same:value, same:collection and empty axiom instances
/// over the context (unindexed, at step kCurrent).
Formula instantiate_axioms(const Context& ctx, const PredicateSet& predicates);

PredicateSet state_predicates(const Context& ctx, const PredicateSet& predicates);
PredicateSet indeterminacy_predicates(const Context& ctx, const PredicateSet& predicates);

}  // namespace apifsm
