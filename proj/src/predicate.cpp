#include "apifsm/predicate.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

#include "apifsm/error.hpp"

namespace apifsm {

// ---------------------------------------------------------------------------
// Context

Context::Context(std::vector<Symbol> collections, std::vector<Symbol> values) {
  for (auto& s : collections) {
    s.sort = Sort::Collection;
    add(s);
  }
  for (auto& s : values) {
    s.sort = Sort::Value;
    add(s);
  }
}

void Context::add(const Symbol& symbol) {
  if (const Symbol* existing = find(symbol.name)) {
    if (*existing == symbol) return;
    throw std::invalid_argument("symbol '" + symbol.name + "' declared twice with different sort or role");
  }
  auto& bucket = symbol.sort == Sort::Collection ? collections_ : values_;
  auto pos = std::lower_bound(bucket.begin(), bucket.end(), symbol,
                              [](const Symbol& a, const Symbol& b) { return a.name < b.name; });
  bucket.insert(pos, symbol);
}

const Symbol* Context::find(std::string_view name) const {
  for (const auto* bucket : {&collections_, &values_}) {
    auto it = std::lower_bound(bucket->begin(), bucket->end(), name,
                               [](const Symbol& s, std::string_view n) { return s.name < n; });
    if (it != bucket->end() && it->name == name) return &*it;
  }
  return nullptr;
}

bool Context::is_state(const Predicate& predicate) const {
  for (const auto& name : predicate.symbols()) {
    const Symbol* s = find(name);
    if (s == nullptr) throw UnknownSymbol(name);
    if (s->role != Role::State) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Predicate

Predicate Predicate::eq(std::string a, std::string b) {
  if (a == b) throw std::invalid_argument("eq(" + a + "," + b + ") relates a symbol to itself");
  if (b < a) std::swap(a, b);
  return Predicate(PredicateKind::Eq, std::move(a), std::move(b));
}

Predicate Predicate::contains(std::string collection, std::string value) {
  return Predicate(PredicateKind::Contains, std::move(collection), std::move(value));
}

Predicate Predicate::empty(std::string collection) {
  return Predicate(PredicateKind::Empty, std::move(collection), {});
}

Predicate Predicate::exc() { return Predicate(PredicateKind::Exc, {}, {}); }

std::vector<std::string> Predicate::symbols() const {
  switch (kind_) {
    case PredicateKind::Eq:
    case PredicateKind::Contains:
      return {first_, second_};
    case PredicateKind::Empty:
      return {first_};
    case PredicateKind::Exc:
      return {};
  }
  return {};
}

std::string Predicate::to_string() const {
  switch (kind_) {
    case PredicateKind::Eq:
      return "eq(" + first_ + "," + second_ + ")";
    case PredicateKind::Contains:
      return "contains(" + first_ + "," + second_ + ")";
    case PredicateKind::Empty:
      return "empty(" + first_ + ")";
    case PredicateKind::Exc:
      return "exc";
  }
  return {};
}

std::string IndexedVariable::to_string() const {
  return predicate.to_string() + "@" + std::to_string(step);
}

// ---------------------------------------------------------------------------
// Formula construction

Formula::Formula() : node_(std::make_shared<const Node>()) {}

Formula Formula::make(Kind kind, std::vector<Formula> children) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->children = std::move(children);
  return Formula(std::move(node));
}

Formula constant(bool value) {
  static const Formula kTrue = [] {
    auto n = std::make_shared<Formula::Node>();
    n->value = true;
    return Formula(std::move(n));
  }();
  static const Formula kFalse = [] {
    auto n = std::make_shared<Formula::Node>();
    n->value = false;
    return Formula(std::move(n));
  }();
  return value ? kTrue : kFalse;
}

Formula var(IndexedVariable variable) {
  auto node = std::make_shared<Formula::Node>();
  node->kind = Formula::Kind::Var;
  node->variable = std::move(variable);
  return Formula(std::move(node));
}

Formula var(const Predicate& predicate, int step) { return var(IndexedVariable{predicate, step}); }

Formula negate(const Formula& f) {
  if (f.kind() == Formula::Kind::Const) return constant(!f.value());
  if (f.kind() == Formula::Kind::Not) return f.children().front();
  return Formula::make(Formula::Kind::Not, {f});
}

namespace {

Formula fold(Formula::Kind kind, std::vector<Formula> operands) {
  const bool absorbing = kind == Formula::Kind::Or;  // true absorbs Or, false absorbs And
  std::vector<Formula> kept;
  kept.reserve(operands.size());
  for (auto& op : operands) {
    if (op.kind() == Formula::Kind::Const) {
      if (op.value() == absorbing) return constant(absorbing);
      continue;
    }
    if (op.kind() == kind) {
      for (const auto& child : op.children()) kept.push_back(child);
    } else {
      kept.push_back(std::move(op));
    }
  }
  if (kept.empty()) return constant(!absorbing);
  if (kept.size() == 1) return kept.front();
  return Formula::make(kind, std::move(kept));
}

}  // namespace

Formula conjunction(std::vector<Formula> operands) { return fold(Formula::Kind::And, std::move(operands)); }

Formula disjunction(std::vector<Formula> operands) { return fold(Formula::Kind::Or, std::move(operands)); }

Formula implies(const Formula& premise, const Formula& conclusion) {
  if (premise.kind() == Formula::Kind::Const) return premise.value() ? conclusion : constant(true);
  if (conclusion.is_const(true)) return constant(true);
  return Formula::make(Formula::Kind::Implies, {premise, conclusion});
}

Formula iff(const Formula& a, const Formula& b) {
  if (a.kind() == Formula::Kind::Const) return a.value() ? b : negate(b);
  if (b.kind() == Formula::Kind::Const) return b.value() ? a : negate(a);
  return Formula::make(Formula::Kind::Iff, {a, b});
}

// ---------------------------------------------------------------------------
// Traversals

Formula map_variables(const Formula& f, const std::function<Formula(const IndexedVariable&)>& mapper) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      return f;
    case Formula::Kind::Var:
      return mapper(f.variable());
    default: {
      std::vector<Formula> children;
      children.reserve(f.children().size());
      for (const auto& c : f.children()) children.push_back(map_variables(c, mapper));
      return Formula::make(f.kind(), std::move(children));
    }
  }
}

Formula index_formula(const Formula& f, int i, int j) {
  return map_variables(f, [&](const IndexedVariable& v) {
    if (v.step != kCurrent && v.step != kPrimed)
      throw std::invalid_argument("formula is already indexed: " + v.to_string());
    return var(v.predicate, v.step == kCurrent ? i : j);
  });
}

Formula index_formula(const Formula& f, int i) {
  return map_variables(f, [&](const IndexedVariable& v) {
    if (v.step != kCurrent) throw std::invalid_argument("unexpected primed predicate " + v.predicate.to_string());
    return var(v.predicate, i);
  });
}

namespace {

void collect(const Formula& f, std::set<IndexedVariable>& out) {
  if (f.kind() == Formula::Kind::Var) {
    out.insert(f.variable());
    return;
  }
  for (const auto& c : f.children()) collect(c, out);
}

}  // namespace

std::set<IndexedVariable> variables(const Formula& f) {
  std::set<IndexedVariable> out;
  collect(f, out);
  return out;
}

std::set<Predicate> predicates(const Formula& f) {
  std::set<Predicate> out;
  for (const auto& v : variables(f)) out.insert(v.predicate);
  return out;
}

std::size_t connective_count(const Formula& f) {
  if (f.kind() == Formula::Kind::Const || f.kind() == Formula::Kind::Var) return 0;
  std::size_t n = 1;
  for (const auto& c : f.children()) n += connective_count(c);
  return n;
}

bool evaluate(const Formula& f, const Assignment& assignment) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      return f.value();
    case Formula::Kind::Var:
      return assignment(f.variable());
    case Formula::Kind::Not:
      return !evaluate(f.children()[0], assignment);
    case Formula::Kind::And:
      for (const auto& c : f.children())
        if (!evaluate(c, assignment)) return false;
      return true;
    case Formula::Kind::Or:
      for (const auto& c : f.children())
        if (evaluate(c, assignment)) return true;
      return false;
    case Formula::Kind::Implies:
      return !evaluate(f.children()[0], assignment) || evaluate(f.children()[1], assignment);
    case Formula::Kind::Iff:
      return evaluate(f.children()[0], assignment) == evaluate(f.children()[1], assignment);
  }
  return false;
}

bool evaluate(const Formula& f, const std::map<IndexedVariable, bool>& assignment) {
  return evaluate(f, [&](const IndexedVariable& v) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw std::out_of_range("unassigned variable " + v.to_string());
    return it->second;
  });
}

std::optional<bool> evaluate_partial(
    const Formula& f, const std::function<std::optional<bool>(const IndexedVariable&)>& lookup) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      return f.value();
    case Formula::Kind::Var:
      return lookup(f.variable());
    case Formula::Kind::Not: {
      auto v = evaluate_partial(f.children()[0], lookup);
      if (!v) return std::nullopt;
      return !*v;
    }
    case Formula::Kind::And: {
      bool unknown = false;
      for (const auto& c : f.children()) {
        auto v = evaluate_partial(c, lookup);
        if (!v) unknown = true;
        else if (!*v) return false;
      }
      if (unknown) return std::nullopt;
      return true;
    }
    case Formula::Kind::Or: {
      bool unknown = false;
      for (const auto& c : f.children()) {
        auto v = evaluate_partial(c, lookup);
        if (!v) unknown = true;
        else if (*v) return true;
      }
      if (unknown) return std::nullopt;
      return false;
    }
    case Formula::Kind::Implies: {
      auto a = evaluate_partial(f.children()[0], lookup);
      if (a && !*a) return true;
      auto b = evaluate_partial(f.children()[1], lookup);
      if (b && *b) return true;
      if (a && b) return false;
      return std::nullopt;
    }
    case Formula::Kind::Iff: {
      auto a = evaluate_partial(f.children()[0], lookup);
      if (!a) return std::nullopt;
      auto b = evaluate_partial(f.children()[1], lookup);
      if (!b) return std::nullopt;
      return *a == *b;
    }
  }
  return std::nullopt;
}

namespace {

void write_smt(const Formula& f, std::ostream& out) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      out << (f.value() ? "true" : "false");
      return;
    case Formula::Kind::Var:
      out << '|' << f.variable().to_string() << '|';
      return;
    default:
      break;
  }
  static constexpr const char* kNames[] = {"", "", "not", "and", "or", "=>", "="};
  out << '(' << kNames[static_cast<int>(f.kind())];
  for (const auto& c : f.children()) {
    out << ' ';
    write_smt(c, out);
  }
  out << ')';
}

}  // namespace

std::string to_smt(const Formula& f) {
  std::ostringstream out;
  write_smt(f, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Text parsing (predicates and catalog formulas)

namespace {

class TextCursor {
 public:
  explicit TextCursor(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }
  bool accept(std::string_view token) {
    skip_space();
    if (text_.substr(pos_, token.size()) == token) {
      pos_ += token.size();
      return true;
    }
    return false;
  }
  void expect(std::string_view token) {
    if (!accept(token)) fail("expected '" + std::string(token) + "'");
  }
  bool peek_identifier_start() {
    skip_space();
    return pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                   text_[pos_] == '$');
  }
  std::string identifier() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                                   text_[pos_] == '$'))
      ++pos_;
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }
  // Symbol names are identifiers or double-quoted literals kept verbatim.
  std::string symbol() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '"') {
      std::size_t start = pos_++;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\') ++pos_;
        ++pos_;
      }
      if (pos_ >= text_.size()) fail("unterminated string literal");
      ++pos_;
      return std::string(text_.substr(start, pos_ - start));
    }
    return identifier();
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw std::invalid_argument(message + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

Predicate parse_predicate_at(TextCursor& in) {
  std::string head = in.identifier();
  if (head == "exc") return Predicate::exc();
  in.expect("(");
  std::string a = in.symbol();
  if (head == "empty") {
    in.expect(")");
    return Predicate::empty(a);
  }
  in.expect(",");
  std::string b = in.symbol();
  in.expect(")");
  if (head == "eq") return Predicate::eq(a, b);
  if (head == "contains") return Predicate::contains(a, b);
  in.fail("unknown predicate '" + head + "'");
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : in_(text) {}

  Formula parse() {
    Formula f = equivalence();
    if (!in_.at_end()) in_.fail("trailing input");
    return f;
  }

 private:
  Formula equivalence() {
    Formula lhs = implication();
    while (in_.accept("<->")) lhs = Formula::make(Formula::Kind::Iff, {lhs, implication()});
    return lhs;
  }
  Formula implication() {
    Formula lhs = disjunct();
    if (in_.accept("->")) return Formula::make(Formula::Kind::Implies, {lhs, implication()});
    return lhs;
  }
  Formula disjunct() {
    std::vector<Formula> ops{conjunct()};
    while (in_.accept("|")) ops.push_back(conjunct());
    return ops.size() == 1 ? ops.front() : Formula::make(Formula::Kind::Or, std::move(ops));
  }
  Formula conjunct() {
    std::vector<Formula> ops{unary()};
    while (in_.accept("&")) ops.push_back(unary());
    return ops.size() == 1 ? ops.front() : Formula::make(Formula::Kind::And, std::move(ops));
  }
  Formula unary() {
    if (in_.accept("!")) return Formula::make(Formula::Kind::Not, {unary()});
    if (in_.accept("(")) {
      Formula inner = equivalence();
      in_.expect(")");
      return inner;
    }
    if (in_.accept("true")) return constant(true);
    if (in_.accept("false")) return constant(false);
    Predicate p = parse_predicate_at(in_);
    int step = in_.accept("'") ? kPrimed : kCurrent;
    return var(p, step);
  }

  TextCursor in_;
};

}  // namespace

Predicate Predicate::parse(std::string_view text) {
  TextCursor in(text);
  Predicate p = parse_predicate_at(in);
  if (!in.at_end()) in.fail("trailing input");
  return p;
}

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

// ---------------------------------------------------------------------------
// Universe and axioms

PredicateSet predicate_universe(const Context& ctx, bool include_exc) {
  PredicateSet out;
  const auto& cs = ctx.collections();
  const auto& vs = ctx.values();
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b) out.push_back(Predicate::eq(vs[a].name, vs[b].name));
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b) out.push_back(Predicate::eq(cs[a].name, cs[b].name));
  for (const auto& c : cs)
    for (const auto& v : vs) out.push_back(Predicate::contains(c.name, v.name));
  for (const auto& c : cs) out.push_back(Predicate::empty(c.name));
  if (include_exc) out.push_back(Predicate::exc());
  std::sort(out.begin(), out.end());
  return out;
}

Formula instantiate_axioms(const Context& ctx, const PredicateSet& /*predicates*/) {
  const auto& cs = ctx.collections();
  const auto& vs = ctx.values();
  auto at = [](const Predicate& p) { return var(p, kCurrent); };
  std::vector<Formula> instances;
  // same:value(c, v1, v2)
  for (const auto& c : cs)
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a + 1; b < vs.size(); ++b)
        instances.push_back(implies(at(Predicate::eq(vs[a].name, vs[b].name)),
                                    iff(at(Predicate::contains(c.name, vs[a].name)),
                                        at(Predicate::contains(c.name, vs[b].name)))));
  // same:collection(c1, c2, v)
  for (std::size_t a = 0; a < cs.size(); ++a)
    for (std::size_t b = a + 1; b < cs.size(); ++b)
      for (const auto& v : vs)
        instances.push_back(implies(at(Predicate::eq(cs[a].name, cs[b].name)),
                                    iff(at(Predicate::contains(cs[a].name, v.name)),
                                        at(Predicate::contains(cs[b].name, v.name)))));
  // empty(c, v)
  for (const auto& c : cs)
    for (const auto& v : vs)
      instances.push_back(implies(at(Predicate::empty(c.name)), negate(at(Predicate::contains(c.name, v.name)))));
  return conjunction(std::move(instances));
}

PredicateSet state_predicates(const Context& ctx, const PredicateSet& predicates) {
  PredicateSet out;
  for (const auto& p : predicates)
    if (ctx.is_state(p)) out.push_back(p);
  return out;
}

PredicateSet indeterminacy_predicates(const Context& ctx, const PredicateSet& predicates) {
  PredicateSet out;
  for (const auto& p : predicates)
    if (!ctx.is_state(p)) out.push_back(p);
  return out;
}

}  // namespace apifsm
