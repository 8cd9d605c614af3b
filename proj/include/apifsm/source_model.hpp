#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "apifsm/predicate.hpp"

namespace apifsm {

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind {
  Identifier,
  StringLiteral,
  Number,
  KwClass,
  KwIf,
  KwElse,
  KwWhile,
  KwNew,
  KwNull,
  KwThis,
  KwVoid,
  KwReserved,  // any other Java keyword (for, return, try, ...)
  Dot,
  Comma,
  Semicolon,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Less,
  Greater,
  Assign,
  Eq,
  Neq,
  Not,
  AndAnd,
  OrOr,
  At,
  Other,  // legal Java punctuation outside the subset (+, [, ?, ...)
  End,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  int line = 0;
  int column = 0;
};

/// Splits UTF-8 source into tokens, dropping whitespace and comments.
/// Throws LexError on characters that cannot start a Java token.
std::vector<Token> tokenize(std::string_view source);

// ---------------------------------------------------------------------------
// Statement trees

/// Branching condition: comparisons of values and contains()/isEmpty() on
/// collections, combined with !, && and ||.
struct Condition {
  enum class Kind { Equal, NotEqual, Contains, IsEmpty, Not, And, Or };

  Kind kind = Kind::Equal;
  std::string left;   // Equal/NotEqual lhs, Contains/IsEmpty collection
  std::string right;  // Equal/NotEqual rhs, Contains value
  std::vector<Condition> operands;

  static Condition equal(std::string a, std::string b) { return {Kind::Equal, std::move(a), std::move(b), {}}; }
  static Condition not_equal(std::string a, std::string b) {
    return {Kind::NotEqual, std::move(a), std::move(b), {}};
  }
  static Condition contains(std::string c, std::string v) { return {Kind::Contains, std::move(c), std::move(v), {}}; }
  static Condition is_empty(std::string c) { return {Kind::IsEmpty, std::move(c), {}, {}}; }
  static Condition negation(Condition c) { return {Kind::Not, {}, {}, {std::move(c)}}; }
  static Condition all_of(std::vector<Condition> cs) { return {Kind::And, {}, {}, std::move(cs)}; }
  static Condition any_of(std::vector<Condition> cs) { return {Kind::Or, {}, {}, std::move(cs)}; }

  bool operator==(const Condition&) const = default;
};

struct Statement;
using Block = std::vector<Statement>;

/// receiver.operation(arguments) or `receiver = new Kind<>()` (operation
/// "construct"). Arguments are value symbols: identifiers, null or literals.
struct PlainOp {
  std::string receiver;
  std::string operation;
  std::vector<std::string> arguments;
  std::string constructed_kind;  // only for construct
  int index = 0;
  int line = 0;

  bool operator==(const PlainOp& o) const {
    return receiver == o.receiver && operation == o.operation && arguments == o.arguments &&
           constructed_kind == o.constructed_kind && index == o.index;
  }
};

struct IfElse {
  Condition condition;
  Block then_branch;
  Block else_branch;
  int index = 0;  // numbered at the closing brace
  int line = 0;

  bool operator==(const IfElse& o) const;
};

struct While {
  Condition condition;
  Block body;
  int index = 0;  // numbered at the closing brace
  int line = 0;

  bool operator==(const While& o) const;
};

struct Statement {
  std::variant<PlainOp, IfElse, While> node;

  int index() const;
  bool operator==(const Statement&) const = default;
};

inline constexpr std::string_view kConstruct = "construct";

/// last(s): index of the final operator of a block, or `entry` when empty.
int last_index(const Block& block, int entry = 0);
/// Number of operators (plain and branching) in a block, recursively.
int operator_count(const Block& block);

// ---------------------------------------------------------------------------
// Units

struct Parameter {
  std::string name;
  std::string type;
  Sort sort = Sort::Value;

  bool operator==(const Parameter&) const = default;
};

struct MethodModel {
  std::string name;
  std::vector<Parameter> parameters;
  Block body;
  bool is_public = true;
  int line = 0;

  bool operator==(const MethodModel& o) const {
    return name == o.name && parameters == o.parameters && body == o.body && is_public == o.is_public;
  }
};

struct FieldModel {
  std::string name;
  std::string type;
  Sort sort = Sort::Collection;
  std::string kind;  // resolved implementation kind, collections only
  int line = 0;

  bool operator==(const FieldModel& o) const {
    return name == o.name && type == o.type && sort == o.sort && kind == o.kind;
  }
};

struct ApiUnitModel {
  std::string name;
  std::vector<std::string> implements;
  std::vector<FieldModel> fields;
  std::optional<MethodModel> constructor;
  std::vector<MethodModel> methods;

  const FieldModel* field(std::string_view name) const;
  const MethodModel* method(std::string_view name) const;
  /// Public method names in declaration order.
  std::vector<std::string> api_methods() const;
  /// The declared constructor, or an empty public one.
  MethodModel constructor_or_default() const;
  /// Every value literal (null, string literals) appearing anywhere, sorted.
  std::set<std::string> literals() const;

  bool operator==(const ApiUnitModel&) const = default;
};

struct ParseOptions {
  /// Concrete collection classes, e.g. HashSet.
  std::set<std::string> collection_kinds{"HashSet", "LinkedHashSet", "TreeSet"};
  /// Interface types that declare a collection without fixing its kind.
  std::set<std::string> collection_interfaces{"Set", "SortedSet", "NavigableSet", "Collection"};
  /// Field name (or Unit.field) to implementation kind; wins over the source.
  std::map<std::string, std::string> kind_overrides;
};

/// Parses one class. Operators are numbered 1..n in source order, branching
/// statements at their closing brace; if-without-else gets an empty else.
ApiUnitModel parse_unit(const std::vector<Token>& tokens, const ParseOptions& options = {});
ApiUnitModel parse_unit(std::string_view source, const ParseOptions& options = {});

/// Parses and numbers a bare statement list with no symbol checks. Used for
/// snippets; layout rules are enforced.
Block parse_statements(std::string_view source);

/// Renders the unit back to source in the normalised layout.
std::string print_unit(const ApiUnitModel& unit);

/// True if the name is a value literal (null or a string literal).
bool is_literal(std::string_view symbol);

/// Maps a condition onto an unindexed predicate formula (step kCurrent).
/// Throws UnknownSymbol if an operand is missing from the context.
Formula lower_condition(const Condition& condition, const Context& ctx);

}  // namespace apifsm
