#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "apifsm/error.hpp"
#include "apifsm/source_model.hpp"

namespace apifsm {

bool IfElse::operator==(const IfElse& o) const {
  return condition == o.condition && then_branch == o.then_branch && else_branch == o.else_branch &&
         index == o.index;
}

bool While::operator==(const While& o) const {
  return condition == o.condition && body == o.body && index == o.index;
}

int Statement::index() const {
  return std::visit([](const auto& n) { return n.index; }, node);
}

int last_index(const Block& block, int entry) { return block.empty() ? entry : block.back().index(); }

int operator_count(const Block& block) {
  int n = 0;
  for (const auto& s : block) {
    ++n;
    if (const auto* i = std::get_if<IfElse>(&s.node)) n += operator_count(i->then_branch) + operator_count(i->else_branch);
    if (const auto* w = std::get_if<While>(&s.node)) n += operator_count(w->body);
  }
  return n;
}

bool is_literal(std::string_view symbol) { return symbol == "null" || (!symbol.empty() && symbol.front() == '"'); }

const FieldModel* ApiUnitModel::field(std::string_view n) const {
  for (const auto& f : fields)
    if (f.name == n) return &f;
  return nullptr;
}

const MethodModel* ApiUnitModel::method(std::string_view n) const {
  for (const auto& m : methods)
    if (m.name == n) return &m;
  return nullptr;
}

std::vector<std::string> ApiUnitModel::api_methods() const {
  std::vector<std::string> out;
  for (const auto& m : methods)
    if (m.is_public) out.push_back(m.name);
  return out;
}

MethodModel ApiUnitModel::constructor_or_default() const {
  if (constructor) return *constructor;
  MethodModel m;
  m.name = name;
  return m;
}

namespace {

void collect_literals(const Condition& c, std::set<std::string>& out) {
  for (const auto* s : {&c.left, &c.right})
    if (is_literal(*s)) out.insert(*s);
  for (const auto& o : c.operands) collect_literals(o, out);
}

void collect_literals(const Block& block, std::set<std::string>& out) {
  for (const auto& s : block) {
    if (const auto* op = std::get_if<PlainOp>(&s.node)) {
      for (const auto& a : op->arguments)
        if (is_literal(a)) out.insert(a);
    } else if (const auto* i = std::get_if<IfElse>(&s.node)) {
      collect_literals(i->condition, out);
      collect_literals(i->then_branch, out);
      collect_literals(i->else_branch, out);
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      collect_literals(w->condition, out);
      collect_literals(w->body, out);
    }
  }
}

}  // namespace

std::set<std::string> ApiUnitModel::literals() const {
  std::set<std::string> out;
  if (constructor) collect_literals(constructor->body, out);
  for (const auto& m : methods) collect_literals(m.body, out);
  return out;
}

namespace {

const std::set<std::string_view> kModifiers{"public",    "private",      "protected", "static",  "final",
                                            "abstract",  "synchronized", "transient", "volatile", "strictfp"};
const std::set<std::string_view> kPrimitives{"boolean", "byte", "char", "short", "int", "long", "float", "double"};

struct ScopeSymbol {
  Sort sort;
  bool is_field;
};

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, const ParseOptions& options) : toks_(tokens), options_(options) {
    if (toks_.empty() || toks_.back().kind != TokenKind::End)
      throw std::invalid_argument("token sequence must end with End");
  }

  ApiUnitModel unit() {
    skip_preamble();
    ApiUnitModel unit;
    while (accept_modifier()) {
    }
    expect(TokenKind::KwClass, "expected class declaration");
    unit.name = expect(TokenKind::Identifier, "expected class name").text;
    if (peek().kind == TokenKind::Less) unsupported(peek(), "generic classes are not supported");
    if (peek_word("extends")) {
      advance();
      parse_type();
    }
    if (peek_word("implements")) {
      advance();
      unit.implements.push_back(parse_type());
      while (accept(TokenKind::Comma)) unit.implements.push_back(parse_type());
    }
    expect(TokenKind::LBrace, "expected '{' after class header");
    while (peek().kind != TokenKind::RBrace) {
      if (peek().kind == TokenKind::End) parse_error(peek(), "unexpected end of input inside class body");
      member(unit);
    }
    advance();
    if (peek().kind != TokenKind::End) unsupported(peek(), "only one class per source file is supported");
    resolve_kinds(unit);
    return unit;
  }

  Block statements() {
    Block block;
    while (peek().kind != TokenKind::End) block.push_back(statement());
    int counter = 0;
    number(block, counter);
    check_layout();
    return block;
  }

 private:
  // --- token helpers -------------------------------------------------------

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& advance() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(TokenKind kind) {
    if (peek().kind != kind) return false;
    advance();
    return true;
  }
  const Token& expect(TokenKind kind, const std::string& message) {
    if (peek().kind != kind) {
      if (peek().kind == TokenKind::Other) unsupported(peek(), "operator '" + peek().text + "' is not supported");
      parse_error(peek(), message + ", found " + describe(peek()));
    }
    return advance();
  }
  bool peek_word(std::string_view word, std::size_t ahead = 0) const {
    return peek(ahead).kind == TokenKind::KwReserved && peek(ahead).text == word;
  }
  bool accept_modifier() {
    if (peek().kind == TokenKind::KwReserved && kModifiers.count(peek().text)) {
      advance();
      return true;
    }
    return false;
  }
  static std::string describe(const Token& t) {
    if (t.kind == TokenKind::End) return "end of input";
    return "'" + t.text + "'";
  }
  [[noreturn]] static void parse_error(const Token& t, const std::string& message) {
    throw ParseError(message, t.line, t.column);
  }
  [[noreturn]] static void unsupported(const Token& t, const std::string& message) {
    throw UnsupportedError(message, t.line, t.column);
  }

  // --- declarations --------------------------------------------------------

  void skip_preamble() {
    while (peek_word("package") || peek_word("import")) {
      while (peek().kind != TokenKind::Semicolon) {
        if (peek().kind == TokenKind::End) parse_error(peek(), "unterminated declaration");
        advance();
      }
      advance();
    }
  }

  void skip_annotations() {
    while (accept(TokenKind::At)) {
      expect(TokenKind::Identifier, "expected annotation name");
      if (accept(TokenKind::LParen)) {
        int depth = 1;
        while (depth > 0) {
          if (peek().kind == TokenKind::End) parse_error(peek(), "unterminated annotation");
          if (peek().kind == TokenKind::LParen) ++depth;
          if (peek().kind == TokenKind::RParen) --depth;
          advance();
        }
      }
    }
  }

  std::string parse_type() {
    const Token& head = peek();
    std::string text;
    if (head.kind == TokenKind::Identifier || (head.kind == TokenKind::KwReserved && kPrimitives.count(head.text))) {
      text = advance().text;
    } else {
      parse_error(head, "expected type, found " + describe(head));
    }
    while (peek().kind == TokenKind::Dot && peek(1).kind == TokenKind::Identifier) {
      advance();
      text += "." + advance().text;
    }
    if (accept(TokenKind::Less)) {
      text += "<";
      if (peek().kind != TokenKind::Greater) {
        text += parse_type();
        while (accept(TokenKind::Comma)) text += ", " + parse_type();
      }
      expect(TokenKind::Greater, "expected '>'");
      text += ">";
    }
    if (peek().kind == TokenKind::Other) unsupported(peek(), "array and wildcard types are not supported");
    return text;
  }

  static std::string base_type(const std::string& type) {
    std::string base = type.substr(0, type.find('<'));
    auto dot = base.rfind('.');
    return dot == std::string::npos ? base : base.substr(dot + 1);
  }

  bool is_collection_type(const std::string& type) const {
    std::string base = base_type(type);
    return options_.collection_kinds.count(base) || options_.collection_interfaces.count(base);
  }

  void member(ApiUnitModel& unit) {
    skip_annotations();
    bool is_public = false;
    bool is_static = false;
    while (peek().kind == TokenKind::KwReserved && kModifiers.count(peek().text)) {
      if (peek().text == "public") is_public = true;
      if (peek().text == "static") is_static = true;
      advance();
    }
    const Token& start = peek();
    if (is_static) unsupported(start, "static members are not supported");
    if (start.kind == TokenKind::Identifier && start.text == unit.name && peek(1).kind == TokenKind::LParen) {
      advance();
      if (unit.constructor) unsupported(start, "multiple constructors are not supported");
      MethodModel ctor;
      ctor.name = unit.name;
      ctor.is_public = is_public;
      ctor.line = start.line;
      ctor.parameters = parameters(unit);
      ctor.body = body(unit, ctor.parameters);
      unit.constructor = std::move(ctor);
      return;
    }
    if (start.kind == TokenKind::KwVoid) {
      advance();
      const Token& name = expect(TokenKind::Identifier, "expected method name");
      if (unit.method(name.text) || name.text == unit.name)
        unsupported(name, "overloaded method '" + name.text + "' is not supported");
      MethodModel m;
      m.name = name.text;
      m.is_public = is_public;
      m.line = name.line;
      m.parameters = parameters(unit);
      if (peek_word("throws")) unsupported(peek(), "throws clauses are not supported");
      m.body = body(unit, m.parameters);
      unit.methods.push_back(std::move(m));
      return;
    }
    if (start.kind == TokenKind::KwClass || peek_word("interface") || peek_word("enum"))
      unsupported(start, "nested type declarations are not supported");
    std::string type = parse_type();
    const Token& name = expect(TokenKind::Identifier, "expected member name");
    if (peek().kind == TokenKind::LParen) unsupported(name, "method '" + name.text + "' must return void");
    if (peek().kind == TokenKind::Assign)
      unsupported(peek(), "field initializers are not supported; initialise '" + name.text + "' in the constructor");
    expect(TokenKind::Semicolon, "expected ';' after field declaration");
    if (unit.field(name.text)) parse_error(name, "field '" + name.text + "' declared twice");
    FieldModel f;
    f.name = name.text;
    f.type = type;
    f.line = name.line;
    f.sort = is_collection_type(type) ? Sort::Collection : Sort::Value;
    unit.fields.push_back(std::move(f));
  }

  std::vector<Parameter> parameters(const ApiUnitModel& unit) {
    expect(TokenKind::LParen, "expected '('");
    std::vector<Parameter> out;
    if (peek().kind != TokenKind::RParen) {
      do {
        skip_annotations();
        while (peek_word("final")) advance();
        Parameter p;
        p.type = parse_type();
        const Token& name = expect(TokenKind::Identifier, "expected parameter name");
        p.name = name.text;
        p.sort = is_collection_type(p.type) ? Sort::Collection : Sort::Value;
        for (const auto& q : out)
          if (q.name == p.name) parse_error(name, "duplicate parameter '" + p.name + "'");
        if (unit.field(p.name)) parse_error(name, "parameter '" + p.name + "' shadows a field");
        out.push_back(std::move(p));
      } while (accept(TokenKind::Comma));
    }
    expect(TokenKind::RParen, "expected ')'");
    return out;
  }

  Block body(const ApiUnitModel& unit, const std::vector<Parameter>& params) {
    scope_.clear();
    for (const auto& f : unit.fields) scope_[f.name] = {f.sort, true};
    for (const auto& p : params) scope_[p.name] = {p.sort, false};
    checking_ = true;
    occupancy_.clear();
    brace_lines_.clear();
    expect(TokenKind::LBrace, "expected '{' to open the body");
    Block block;
    while (peek().kind != TokenKind::RBrace) {
      if (peek().kind == TokenKind::End) parse_error(peek(), "unexpected end of input inside body");
      block.push_back(statement());
    }
    advance();
    int counter = 0;
    number(block, counter);
    check_layout();
    for (const auto& s : block) collect_constructions(s);
    return block;
  }

  // --- statements ----------------------------------------------------------

  Statement statement() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::KwIf:
        return if_statement();
      case TokenKind::KwWhile:
        return while_statement();
      case TokenKind::KwThis:
      case TokenKind::Identifier:
        return plain_operation();
      case TokenKind::KwReserved:
        if (kPrimitives.count(t.text) || t.text == "final")
          unsupported(t, "local variable declarations are not supported");
        unsupported(t, "'" + t.text + "' statements are not supported");
      case TokenKind::LBrace:
        unsupported(t, "nested blocks are not supported");
      case TokenKind::Semicolon:
        unsupported(t, "empty statements are not supported");
      default:
        parse_error(t, "expected statement, found " + describe(t));
    }
  }

  // Reads `x`, `this.x`, `null` or a string literal.
  std::pair<std::string, const Token*> operand() {
    const Token& t = peek();
    if (t.kind == TokenKind::KwNull || t.kind == TokenKind::StringLiteral) {
      advance();
      return {t.text, &t};
    }
    if (t.kind == TokenKind::KwThis) {
      advance();
      expect(TokenKind::Dot, "expected '.' after 'this'");
      const Token& name = expect(TokenKind::Identifier, "expected field name");
      if (checking_) {
        auto it = scope_.find(name.text);
        if (it == scope_.end() || !it->second.is_field) parse_error(name, "'" + name.text + "' is not a field");
      }
      return {name.text, &name};
    }
    if (t.kind == TokenKind::Identifier) {
      advance();
      return {t.text, &t};
    }
    if (t.kind == TokenKind::Number || (t.kind == TokenKind::KwReserved && (t.text == "true" || t.text == "false")))
      unsupported(t, "only null and string literals are supported as values");
    parse_error(t, "expected value, found " + describe(t));
  }

  std::optional<Sort> sort_of(const std::string& name, const Token& at) const {
    if (is_literal(name)) return Sort::Value;
    if (!checking_) return std::nullopt;
    auto it = scope_.find(name);
    if (it == scope_.end()) parse_error(at, "undeclared symbol '" + name + "'");
    return it->second.sort;
  }

  void require_sort(const std::string& name, const Token& at, Sort wanted, const char* role) const {
    auto s = sort_of(name, at);
    if (s && *s != wanted)
      parse_error(at, std::string(role) + " '" + name + "' must be a " +
                          (wanted == Sort::Collection ? "collection" : "value"));
  }

  void no_nested_call(const Token& at) const {
    if (peek().kind == TokenKind::LParen || peek().kind == TokenKind::Dot)
      unsupported(at, "nested method calls are not supported");
  }

  Statement plain_operation() {
    const Token& first = peek();
    if (first.kind == TokenKind::Identifier &&
        (peek(1).kind == TokenKind::Identifier || peek(1).kind == TokenKind::Less))
      unsupported(first, "local variable declarations are not supported");
    auto [receiver, at] = operand();
    PlainOp op;
    op.receiver = receiver;
    op.line = first.line;
    if (accept(TokenKind::Assign)) {
      const Token& nw = peek();
      if (nw.kind != TokenKind::KwNew) unsupported(nw, "only 'new' collection construction may be assigned");
      advance();
      std::string type = parse_type();
      std::string kind = base_type(type);
      if (!options_.collection_kinds.count(kind))
        unsupported(nw, "collection kind '" + kind + "' is not supported");
      expect(TokenKind::LParen, "expected '('");
      if (peek().kind != TokenKind::RParen) unsupported(peek(), "constructor arguments are not supported");
      expect(TokenKind::RParen, "expected ')'");
      require_sort(receiver, *at, Sort::Collection, "assigned symbol");
      if (checking_ && !scope_.at(receiver).is_field) unsupported(*at, "only fields may be assigned");
      op.operation = std::string(kConstruct);
      op.constructed_kind = kind;
    } else {
      expect(TokenKind::Dot, "expected '.' or '='");
      const Token& method = expect(TokenKind::Identifier, "expected operation name");
      op.operation = method.text;
      expect(TokenKind::LParen, "expected '('");
      if (peek().kind != TokenKind::RParen) {
        do {
          auto [arg, arg_at] = operand();
          no_nested_call(*arg_at);
          require_sort(arg, *arg_at, Sort::Value, "argument");
          op.arguments.push_back(arg);
        } while (accept(TokenKind::Comma));
      }
      expect(TokenKind::RParen, "expected ')'");
      require_sort(receiver, *at, Sort::Collection, "receiver");
    }
    const Token& semi = expect(TokenKind::Semicolon, "expected ';'");
    occupy(first.line, semi.line, first);
    return Statement{std::move(op)};
  }

  struct Braced {
    Block block;
    const Token* open;
    const Token* close;
  };

  Braced braced_block(const Token& owner) {
    if (peek().kind != TokenKind::LBrace)
      throw FormatError("branches of '" + owner.text + "' must be enclosed in braces", peek().line, peek().column);
    Braced out{{}, &advance(), nullptr};
    while (peek().kind != TokenKind::RBrace) {
      if (peek().kind == TokenKind::End) parse_error(peek(), "unexpected end of input inside block");
      out.block.push_back(statement());
    }
    out.close = &advance();
    return out;
  }

  Statement if_statement() {
    const Token& kw = advance();
    expect(TokenKind::LParen, "expected '(' after 'if'");
    IfElse node;
    node.line = kw.line;
    node.condition = condition();
    expect(TokenKind::RParen, "expected ')'");
    Braced then = braced_block(kw);
    occupy(kw.line, then.open->line, kw);
    node.then_branch = std::move(then.block);
    if (accept(TokenKind::KwElse)) {
      const Token& else_kw = toks_[pos_ - 1];
      if (peek().kind == TokenKind::KwIf)
        throw FormatError("'else if' must be written as a braced else block", peek().line, peek().column);
      Braced other = braced_block(else_kw);
      // `} else {` holds braces only; the final closing brace is the operator.
      for (int l = then.close->line; l <= other.open->line; ++l) brace_lines_.insert(l);
      occupy(other.close->line, other.close->line, *other.close);
      node.else_branch = std::move(other.block);
    } else {
      occupy(then.close->line, then.close->line, *then.close);
    }
    return Statement{std::move(node)};
  }

  Statement while_statement() {
    const Token& kw = advance();
    expect(TokenKind::LParen, "expected '(' after 'while'");
    While node;
    node.line = kw.line;
    node.condition = condition();
    expect(TokenKind::RParen, "expected ')'");
    Braced body = braced_block(kw);
    occupy(kw.line, body.open->line, kw);
    occupy(body.close->line, body.close->line, *body.close);
    node.body = std::move(body.block);
    return Statement{std::move(node)};
  }

  // --- conditions ----------------------------------------------------------

  Condition condition() {
    std::vector<Condition> ops{conjunct()};
    while (accept(TokenKind::OrOr)) ops.push_back(conjunct());
    return ops.size() == 1 ? std::move(ops.front()) : Condition::any_of(std::move(ops));
  }

  Condition conjunct() {
    std::vector<Condition> ops{unary()};
    while (accept(TokenKind::AndAnd)) ops.push_back(unary());
    return ops.size() == 1 ? std::move(ops.front()) : Condition::all_of(std::move(ops));
  }

  Condition unary() {
    if (accept(TokenKind::Not)) return Condition::negation(unary());
    if (accept(TokenKind::LParen)) {
      Condition inner = condition();
      expect(TokenKind::RParen, "expected ')'");
      return inner;
    }
    return atom();
  }

  Condition atom() {
    auto [lhs, lhs_at] = operand();
    if (accept(TokenKind::Dot)) {
      const Token& method = expect(TokenKind::Identifier, "expected method name");
      expect(TokenKind::LParen, "expected '('");
      Condition c;
      if (method.text == "isEmpty") {
        require_sort(lhs, *lhs_at, Sort::Collection, "receiver");
        c = Condition::is_empty(lhs);
      } else if (method.text == "contains" || method.text == "equals") {
        auto [arg, arg_at] = operand();
        no_nested_call(*arg_at);
        if (method.text == "contains") {
          require_sort(lhs, *lhs_at, Sort::Collection, "receiver");
          require_sort(arg, *arg_at, Sort::Value, "argument");
          c = Condition::contains(lhs, arg);
        } else {
          check_same_sort(lhs, *lhs_at, arg, *arg_at);
          c = Condition::equal(lhs, arg);
        }
      } else {
        unsupported(method, "only contains(), isEmpty() and equals() may appear in conditions");
      }
      expect(TokenKind::RParen, "expected ')'");
      if (peek().kind == TokenKind::Eq || peek().kind == TokenKind::Neq || peek().kind == TokenKind::Dot)
        unsupported(peek(), "conditions must be plain comparisons");
      return c;
    }
    if (peek().kind == TokenKind::LParen) unsupported(*lhs_at, "method calls other than contains/isEmpty/equals");
    if (peek().kind == TokenKind::Eq || peek().kind == TokenKind::Neq) {
      bool equal = advance().kind == TokenKind::Eq;
      auto [rhs, rhs_at] = operand();
      no_nested_call(*rhs_at);
      check_same_sort(lhs, *lhs_at, rhs, *rhs_at);
      return equal ? Condition::equal(lhs, rhs) : Condition::not_equal(lhs, rhs);
    }
    if (peek().kind == TokenKind::Less || peek().kind == TokenKind::Greater || peek().kind == TokenKind::Other)
      unsupported(peek(), "only equality comparisons are supported");
    unsupported(*lhs_at, "a bare symbol is not a condition");
  }

  void check_same_sort(const std::string& a, const Token& a_at, const std::string& b, const Token& b_at) const {
    auto sa = sort_of(a, a_at);
    auto sb = sort_of(b, b_at);
    if (sa && sb && *sa != *sb) parse_error(b_at, "cannot compare a collection with a value");
  }

  // --- numbering and layout ------------------------------------------------

  static void number(Block& block, int& counter) {
    for (auto& s : block) {
      std::visit(
          [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IfElse>) {
              number(n.then_branch, counter);
              number(n.else_branch, counter);
            } else if constexpr (std::is_same_v<T, While>) {
              number(n.body, counter);
            }
            n.index = ++counter;
          },
          s.node);
    }
  }

  void occupy(int first_line, int last_line, const Token& at) {
    for (int l = first_line; l <= last_line; ++l) {
      auto [it, inserted] = occupancy_.emplace(l, at.column);
      if (!inserted) throw FormatError("at most one operator per line is allowed", l, at.column);
    }
  }

  void check_layout() const {
    for (int line : brace_lines_)
      if (occupancy_.count(line))
        throw FormatError("closing braces must be on a line without operators", line, occupancy_.at(line));
  }

  // --- kinds ---------------------------------------------------------------

  void collect_constructions(const Statement& s) {
    if (const auto* op = std::get_if<PlainOp>(&s.node)) {
      if (op->operation == kConstruct) constructed_[op->receiver].push_back({op->constructed_kind, op->line});
    } else if (const auto* i = std::get_if<IfElse>(&s.node)) {
      for (const auto& c : i->then_branch) collect_constructions(c);
      for (const auto& c : i->else_branch) collect_constructions(c);
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      for (const auto& c : w->body) collect_constructions(c);
    }
  }

  void resolve_kinds(ApiUnitModel& unit) {
    for (auto& f : unit.fields) {
      if (f.sort != Sort::Collection) continue;
      std::string declared = base_type(f.type);
      if (options_.collection_kinds.count(declared)) f.kind = declared;
      for (const auto& [kind, line] : constructed_[f.name]) {
        if (f.kind.empty()) f.kind = kind;
        else if (f.kind != kind && !options_.kind_overrides.count(f.name) &&
                 !options_.kind_overrides.count(unit.name + "." + f.name))
          throw ParseError("field '" + f.name + "' is constructed as both " + f.kind + " and " + kind, line, 1);
      }
      for (const auto& key : {unit.name + "." + f.name, f.name}) {
        auto it = options_.kind_overrides.find(key);
        if (it != options_.kind_overrides.end()) {
          if (!options_.collection_kinds.count(it->second))
            throw ConfigError("collection_kinds." + key + ": unsupported collection kind '" + it->second + "'");
          f.kind = it->second;
          break;
        }
      }
      if (f.kind.empty())
        throw UnsupportedError("cannot determine the implementation kind of collection field '" + f.name + "'",
                               f.line, 1);
    }
  }

  const std::vector<Token>& toks_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
  bool checking_ = false;
  std::map<std::string, ScopeSymbol> scope_;
  std::map<int, int> occupancy_;  // line -> column of the operator holding it
  std::set<int> brace_lines_;
  std::map<std::string, std::vector<std::pair<std::string, int>>> constructed_;
};

}  // namespace

ApiUnitModel parse_unit(const std::vector<Token>& tokens, const ParseOptions& options) {
  return Parser(tokens, options).unit();
}

ApiUnitModel parse_unit(std::string_view source, const ParseOptions& options) {
  return parse_unit(tokenize(source), options);
}

Block parse_statements(std::string_view source) {
  ParseOptions options;
  return Parser(tokenize(source), options).statements();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_condition(const Condition& c, std::ostream& out, bool nested) {
  switch (c.kind) {
    case Condition::Kind::Equal:
      out << c.left << " == " << c.right;
      return;
    case Condition::Kind::NotEqual:
      out << c.left << " != " << c.right;
      return;
    case Condition::Kind::Contains:
      out << c.left << ".contains(" << c.right << ")";
      return;
    case Condition::Kind::IsEmpty:
      out << c.left << ".isEmpty()";
      return;
    case Condition::Kind::Not: {
      const auto& inner = c.operands.front();
      bool wrap = inner.kind != Condition::Kind::Contains && inner.kind != Condition::Kind::IsEmpty &&
                  inner.kind != Condition::Kind::Not;
      out << '!';
      if (wrap) out << '(';
      print_condition(inner, out, false);
      if (wrap) out << ')';
      return;
    }
    case Condition::Kind::And:
    case Condition::Kind::Or: {
      if (nested) out << '(';
      const char* sep = c.kind == Condition::Kind::And ? " && " : " || ";
      for (std::size_t i = 0; i < c.operands.size(); ++i) {
        if (i) out << sep;
        print_condition(c.operands[i], out, true);
      }
      if (nested) out << ')';
      return;
    }
  }
}

void print_block(const Block& block, std::ostream& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 4, ' ');
  for (const auto& s : block) {
    if (const auto* op = std::get_if<PlainOp>(&s.node)) {
      if (op->operation == kConstruct) {
        out << pad << op->receiver << " = new " << op->constructed_kind << "<>();\n";
      } else {
        out << pad << op->receiver << '.' << op->operation << '(';
        for (std::size_t i = 0; i < op->arguments.size(); ++i) out << (i ? ", " : "") << op->arguments[i];
        out << ");\n";
      }
    } else if (const auto* i = std::get_if<IfElse>(&s.node)) {
      out << pad << "if (";
      print_condition(i->condition, out, false);
      out << ") {\n";
      print_block(i->then_branch, out, depth + 1);
      out << pad << "} else {\n";
      print_block(i->else_branch, out, depth + 1);
      out << pad << "}\n";
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      out << pad << "while (";
      print_condition(w->condition, out, false);
      out << ") {\n";
      print_block(w->body, out, depth + 1);
      out << pad << "}\n";
    }
  }
}

void print_method(const MethodModel& m, bool is_ctor, std::ostream& out) {
  out << "\n    " << (m.is_public ? "public " : "") << (is_ctor ? "" : "void ") << m.name << '(';
  for (std::size_t i = 0; i < m.parameters.size(); ++i)
    out << (i ? ", " : "") << m.parameters[i].type << ' ' << m.parameters[i].name;
  out << ") {\n";
  print_block(m.body, out, 2);
  out << "    }\n";
}

}  // namespace

std::string print_unit(const ApiUnitModel& unit) {
  std::ostringstream out;
  out << "class " << unit.name;
  for (std::size_t i = 0; i < unit.implements.size(); ++i)
    out << (i ? ", " : " implements ") << unit.implements[i];
  out << " {\n";
  for (const auto& f : unit.fields) out << "    private " << f.type << ' ' << f.name << ";\n";
  if (unit.constructor) print_method(*unit.constructor, true, out);
  for (const auto& m : unit.methods) print_method(m, false, out);
  out << "}\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Lowering

Formula lower_condition(const Condition& c, const Context& ctx) {
  auto known = [&](const std::string& name) {
    if (!ctx.has(name)) throw UnknownSymbol(name);
    return name;
  };
  auto equality = [&](const std::string& a, const std::string& b) {
    known(a);
    known(b);
    if (a == b) return constant(true);
    return var(Predicate::eq(a, b), kCurrent);
  };
  switch (c.kind) {
    case Condition::Kind::Equal:
      return equality(c.left, c.right);
    case Condition::Kind::NotEqual:
      return negate(equality(c.left, c.right));
    case Condition::Kind::Contains:
      return var(Predicate::contains(known(c.left), known(c.right)), kCurrent);
    case Condition::Kind::IsEmpty:
      return var(Predicate::empty(known(c.left)), kCurrent);
    case Condition::Kind::Not:
      return negate(lower_condition(c.operands.front(), ctx));
    case Condition::Kind::And:
    case Condition::Kind::Or: {
      std::vector<Formula> ops;
      for (const auto& o : c.operands) ops.push_back(lower_condition(o, ctx));
      return c.kind == Condition::Kind::And ? conjunction(std::move(ops)) : disjunction(std::move(ops));
    }
  }
  return constant(true);
}

}  // namespace apifsm
