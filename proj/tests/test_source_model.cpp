#include <doctest.h>

#include <functional>
#include <numeric>
#include <random>

#include "apifsm/error.hpp"
#include "apifsm/source_model.hpp"
#include "support.hpp"

using namespace apifsm;

namespace {

std::vector<TokenKind> kinds(std::string_view text) {
  std::vector<TokenKind> out;
  for (const auto& t : tokenize(text)) out.push_back(t.kind);
  out.pop_back();
  return out;
}

std::string wrap(const std::string& body, const std::string& params = "String v") {
  return "class U {\n    private Set<String> c;\n    private Set<String> d;\n\n    public U() {\n        c = new "
         "HashSet<>();\n        d = new TreeSet<>();\n    }\n\n    public void m(" +
         params + ") {\n" + body + "    }\n}\n";
}

const PlainOp& op_at(const Block& b, std::size_t k) { return std::get<PlainOp>(b.at(k).node); }

std::vector<int> indices(const Block& block) {
  std::vector<int> out;
  for (const auto& s : block) {
    if (const auto* i = std::get_if<IfElse>(&s.node)) {
      for (int x : indices(i->then_branch)) out.push_back(x);
      for (int x : indices(i->else_branch)) out.push_back(x);
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      for (int x : indices(w->body)) out.push_back(x);
    }
    out.push_back(s.index());
  }
  return out;
}

int max_index(const Block& block) {
  int m = 0;
  for (int x : indices(block)) m = std::max(m, x);
  return m;
}

bool closing_brace_rule(const Block& block) {
  for (const auto& s : block) {
    if (const auto* i = std::get_if<IfElse>(&s.node)) {
      if (max_index(i->then_branch) >= i->index || max_index(i->else_branch) >= i->index) return false;
      if (!closing_brace_rule(i->then_branch) || !closing_brace_rule(i->else_branch)) return false;
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      if (max_index(w->body) >= w->index || !closing_brace_rule(w->body)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("tokenize splits operators") {
  CHECK(kinds("idSet.add(id);") == std::vector<TokenKind>{TokenKind::Identifier, TokenKind::Dot,
                                                           TokenKind::Identifier, TokenKind::LParen,
                                                           TokenKind::Identifier, TokenKind::RParen,
                                                           TokenKind::Semicolon});
  CHECK(kinds("if (idMain != idOpt) {") == std::vector<TokenKind>{TokenKind::KwIf, TokenKind::LParen,
                                                                   TokenKind::Identifier, TokenKind::Neq,
                                                                   TokenKind::Identifier, TokenKind::RParen,
                                                                   TokenKind::LBrace});
  auto toks = tokenize("a\n  b // c\n/* d\n e */ \"x\\\"y\"");
  CHECK(toks[1].line == 2);
  CHECK(toks[1].column == 3);
  CHECK(toks[2].kind == TokenKind::StringLiteral);
  CHECK(toks[2].line == 4);
}

TEST_CASE("tokenize reports unknown characters with position") {
  try {
    tokenize("a.add(b);\n  #");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(tokenize("/* open"), LexError);
}

TEST_CASE("two operators on one line are rejected") {
  CHECK_THROWS_AS(parse_unit(wrap("        c.add(v); c.clear();\n")), FormatError);
  CHECK_THROWS_AS(parse_statements("idSet.add(id); idSet.clear();"), FormatError);
  CHECK_THROWS_AS(parse_unit(wrap("        if (v == null) { c.add(v);\n        }\n")), FormatError);
  CHECK_THROWS_AS(parse_unit(wrap("        if (v == null) {\n            c.add(v);\n        } c.clear();\n")),
                  FormatError);
  CHECK_THROWS_AS(parse_unit(wrap("        if (v == null) {\n            c.add(v);\n        } else { c.clear();\n"
                                  "        }\n")),
                  FormatError);
}

TEST_CASE("running example numbering") {
  auto unit = testing::example_unit("HashSet");
  CHECK(unit.name == "ExampleImpl");
  REQUIRE(unit.fields.size() == 1);
  CHECK(unit.fields[0].kind == "HashSet");
  CHECK(unit.api_methods() == std::vector<std::string>{"add", "removeId"});

  const auto* add = unit.method("add");
  REQUIRE(add);
  CHECK(operator_count(add->body) == 1);
  CHECK(last_index(add->body) == 1);

  const auto* rem = unit.method("removeId");
  REQUIRE(rem);
  REQUIRE(rem->body.size() == 2);
  CHECK(op_at(rem->body, 0).index == 1);
  CHECK(op_at(rem->body, 0).arguments == std::vector<std::string>{"idMain"});
  const auto& branch = std::get<IfElse>(rem->body[1].node);
  CHECK(branch.index == 3);
  CHECK(op_at(branch.then_branch, 0).index == 2);
  CHECK(branch.else_branch.empty());
  CHECK(branch.condition == Condition::not_equal("idMain", "idOpt"));
  CHECK(last_index(rem->body) == 3);
}

TEST_CASE("empty bodies and while numbering") {
  auto unit = parse_unit(wrap(""));
  CHECK(unit.method("m")->body.empty());
  CHECK(last_index(unit.method("m")->body) == 0);
  CHECK(last_index({}, 4) == 4);

  auto looped = parse_unit(wrap("        while (!c.isEmpty()) {\n            c.remove(v);\n        }\n"));
  const auto& w = std::get<While>(looped.method("m")->body.at(0).node);
  CHECK(w.index == 2);
  CHECK(op_at(w.body, 0).index == 1);
  CHECK(w.condition == Condition::negation(Condition::is_empty("c")));
}

TEST_CASE("if without else gets an empty else") {
  auto unit = parse_unit(wrap("        if (c.contains(v)) {\n            c.remove(v);\n        }\n        c.add(v);\n"));
  const auto& body = unit.method("m")->body;
  const auto& branch = std::get<IfElse>(body.at(0).node);
  CHECK(branch.else_branch.empty());
  CHECK(branch.index == 2);
  CHECK(op_at(body, 1).index == 3);
}

TEST_CASE("constructs outside the subset are rejected") {
  CHECK_THROWS_AS(parse_unit(wrap("        for (;;) {\n        }\n")), UnsupportedError);
  CHECK_THROWS_AS(parse_unit(wrap("        if (c.contains(d.size())) {\n        }\n")), UnsupportedError);
  CHECK_THROWS_AS(parse_unit(wrap("        c.add(v);\n        return;\n")), UnsupportedError);
  CHECK_THROWS_AS(parse_unit(wrap("        c.add(x);\n")), ParseError);
  CHECK_THROWS_AS(parse_unit(wrap("        v.add(c);\n")), ParseError);
  CHECK_THROWS_AS(parse_unit(wrap("        c.add(v\n")), ParseError);
  CHECK_THROWS_AS(parse_unit(wrap("", "String c")), ParseError);
  CHECK_THROWS_AS(parse_unit("class A {\n    private Set<String> s;\n}\n"), UnsupportedError);
  CHECK_THROWS_AS(parse_unit("class A {\n    private Set<String> s;\n    public A() {\n        s = new "
                             "ArrayList<>();\n    }\n}\n"),
                  UnsupportedError);
}

TEST_CASE("collection kind overrides") {
  ParseOptions options;
  options.kind_overrides["idSet"] = "TreeSet";
  auto unit = parse_unit(testing::read_file(testing::sample("hashset/ExampleImpl.java")), options);
  CHECK(unit.fields[0].kind == "TreeSet");
  options.kind_overrides = {{"ExampleImpl.idSet", "LinkedHashSet"}};
  CHECK(parse_unit(testing::read_file(testing::sample("hashset/ExampleImpl.java")), options).fields[0].kind ==
        "LinkedHashSet");
}

TEST_CASE("literals are collected") {
  auto unit = parse_unit(wrap("        c.add(\"a\");\n        if (v == null) {\n            d.remove(v);\n"
                              "        }\n"));
  CHECK(unit.literals() == std::set<std::string>{"\"a\"", "null"});
}

TEST_CASE("lowering conditions") {
  Context ctx;
  ctx.add({"s", Sort::Collection, Role::State});
  for (const char* v : {"a", "b", "idMain", "idOpt"}) ctx.add({v, Sort::Value, Role::Indeterminacy});
  ctx.add({"c", Sort::Collection, Role::State});
  CHECK(to_smt(lower_condition(Condition::not_equal("idMain", "idOpt"), ctx)) == "(not |eq(idMain,idOpt)@0|)");
  CHECK(to_smt(lower_condition(Condition::is_empty("c"), ctx)) == "|empty(c)@0|");
  auto both = Condition::all_of({Condition::equal("a", "b"), Condition::negation(Condition::contains("s", "a"))});
  CHECK(to_smt(lower_condition(both, ctx)) == "(and |eq(a,b)@0| (not |contains(s,a)@0|))");
  CHECK(lower_condition(Condition::equal("a", "a"), ctx).is_const(true));
  CHECK_THROWS_AS(lower_condition(Condition::is_empty("zzz"), ctx), UnknownSymbol);
}

namespace {

// Random well-formed bodies in the normalised layout.
class BodyGenerator {
 public:
  explicit BodyGenerator(unsigned seed) : rng_(seed) {}

  std::string block(int depth, int budget) {
    std::string out;
    int n = static_cast<int>(rng_() % 4);
    for (int k = 0; k < n && budget > 0; ++k, --budget) out += statement(depth, budget);
    return out;
  }

 private:
  std::string pad(int depth) { return std::string(static_cast<std::size_t>(depth) * 4, ' '); }
  std::string pick(std::initializer_list<const char*> xs) { return *(xs.begin() + rng_() % xs.size()); }

  std::string condition(int depth) {
    switch (rng_() % (depth > 3 ? 4 : 7)) {
      case 0: return pick({"v", "w"}) + " == " + pick({"w", "null", "\"k\""});
      case 1: return pick({"v", "w"}) + " != " + pick({"null", "v"});
      case 2: return pick({"c", "d"}) + ".contains(" + pick({"v", "w", "null"}) + ")";
      case 3: return pick({"c", "d"}) + ".isEmpty()";
      case 4: return "!" + pick({"c", "d"}) + ".isEmpty()";
      case 5: return "(" + condition(depth + 1) + ") && " + condition(depth + 1);
      default: return "!(" + condition(depth + 1) + " || " + condition(depth + 1) + ")";
    }
  }

  std::string statement(int depth, int budget) {
    std::string p = pad(depth + 2);
    switch (rng_() % (depth > 2 ? 3 : 5)) {
      case 0: return p + pick({"c", "d"}) + ".add(" + pick({"v", "w", "null", "\"k\""}) + ");\n";
      case 1: return p + pick({"c", "d"}) + ".remove(" + pick({"v", "w"}) + ");\n";
      case 2: return p + pick({"c", "d"}) + ".clear();\n";
      case 3: {
        std::string out = p + "if (" + condition(0) + ") {\n" + block(depth + 1, budget - 1);
        if (rng_() % 2) out += p + "} else {\n" + block(depth + 1, budget - 1);
        return out + p + "}\n";
      }
      default:
        return p + "while (" + condition(0) + ") {\n" + block(depth + 1, budget - 1) + p + "}\n";
    }
  }

  std::mt19937 rng_;
};

}  // namespace

TEST_CASE("print and reparse is the identity; numbering is a permutation") {
  for (unsigned seed = 1; seed <= 200; ++seed) {
    BodyGenerator gen(seed);
    std::string source = wrap(gen.block(0, 8), "String v, String w");
    ApiUnitModel unit;
    REQUIRE_NOTHROW(unit = parse_unit(source));
    auto printed = print_unit(unit);
    ApiUnitModel again = parse_unit(printed);
    CHECK(again == unit);
    CHECK(print_unit(again) == printed);

    const auto& body = unit.method("m")->body;
    auto idx = indices(body);
    std::sort(idx.begin(), idx.end());
    std::vector<int> expected(idx.size());
    std::iota(expected.begin(), expected.end(), 1);
    CHECK(idx == expected);
    CHECK(operator_count(body) == static_cast<int>(idx.size()));
    CHECK(closing_brace_rule(body));
  }
}
