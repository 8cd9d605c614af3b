#include <doctest.h>

#include "apifsm/brute_force.hpp"
#include "apifsm/encoder.hpp"
#include "apifsm/error.hpp"
#include "support.hpp"

using namespace apifsm;

namespace {

std::string wrap(const std::string& kind, const std::string& body, const std::string& params = "String v") {
  return "class U {\n    private Set<String> c;\n\n    public U() {\n        c = new " + kind +
         "<>();\n    }\n\n    public void m(" + params + ") {\n" + body + "    }\n}\n";
}

struct Encoded {
  ApiUnitModel unit;
  Context ctx;
  PredicateSet predicates;
  MethodEncoding encoding;
};

Encoded encode(const std::string& source, bool exc = false) {
  const auto& cat = SemanticsCatalog::builtin();
  Encoded e;
  e.unit = parse_unit(source, cat.parse_options());
  const auto& m = *e.unit.method("m");
  e.ctx = build_context(e.unit, m, cat);
  e.predicates = predicate_universe(e.ctx, exc);
  EncodingEnv env(e.ctx, e.predicates, cat, collection_kinds(e.unit));
  e.encoding = encode_method(m, env);
  return e;
}

}  // namespace

TEST_CASE("single add") {
  auto e = encode(wrap("HashSet", "        c.add(v);\n"));
  CHECK(e.encoding.last == 1);
  auto models = brute_force_projections(e.encoding.formula, {{Predicate::contains("c", "v"), 1},
                                                            {Predicate::empty("c"), 1}});
  CHECK(models == std::set<std::vector<bool>>{{true, false}});
  // Entry state is unconstrained apart from the axioms.
  auto entry = brute_force_projections(e.encoding.formula, {{Predicate::contains("c", "v"), 0},
                                                           {Predicate::empty("c"), 0}});
  CHECK(entry.size() == 3);
}

TEST_CASE("a loop exits with its condition false") {
  auto e = encode(wrap("HashSet", "        while (!c.isEmpty()) {\n            c.remove(v);\n        }\n"));
  CHECK(e.encoding.last == 2);
  auto models = brute_force_projections(e.encoding.formula, {{Predicate::empty("c"), 2}});
  CHECK(models == std::set<std::vector<bool>>{{true}});
  // The axioms hold at the loop exit too.
  auto exit = brute_force_projections(e.encoding.formula, {{Predicate::contains("c", "v"), 2}});
  CHECK(exit == std::set<std::vector<bool>>{{false}});
}

TEST_CASE("removeId structure") {
  auto unit = testing::example_unit("HashSet");
  const auto& cat = SemanticsCatalog::builtin();
  const auto& m = *unit.method("removeId");
  auto ctx = build_context(unit, m, cat);
  auto P = predicate_universe(ctx, false);
  EncodingEnv env(ctx, P, cat, collection_kinds(unit));
  auto enc = encode_method(m, env);
  CHECK(enc.last == 3);
  auto vars = variables(enc.formula);
  for (const auto& v : vars) CHECK((v.step >= 0 && v.step <= 3));
  CHECK(vars.size() == P.size() * 4);

  // With idMain≠idOpt both are gone at the end; with idMain=idOpt the else copy applies.
  auto f = conjunction({enc.formula, negate(var(Predicate::eq("idMain", "idOpt"), 0))});
  auto gone = brute_force_projections(f, {{Predicate::contains("idSet", "idMain"), 3},
                                          {Predicate::contains("idSet", "idOpt"), 3}});
  CHECK(gone == std::set<std::vector<bool>>{{false, false}});
  auto g = conjunction({enc.formula, var(Predicate::eq("idMain", "idOpt"), 0)});
  auto same = brute_force_projections(g, {{Predicate::contains("idSet", "idMain"), 3},
                                          {Predicate::contains("idSet", "idMain"), 2}});
  CHECK(same == std::set<std::vector<bool>>{{false, false}});
}

TEST_CASE("empty body is the entry axioms") {
  auto e = encode(wrap("HashSet", ""));
  CHECK(e.encoding.last == 0);
  for (const auto& v : variables(e.encoding.formula)) CHECK(v.step == 0);
  auto models = brute_force_projections(e.encoding.formula, {{Predicate::contains("c", "v"), 0},
                                                            {Predicate::empty("c"), 0}});
  CHECK(models.size() == 3);
  CHECK(models.count({true, true}) == 0);
}

TEST_CASE("if copies the shorter branch forward") {
  auto e = encode(wrap("HashSet", "        if (c.contains(v)) {\n            c.remove(v);\n        } else {\n"
                                  "            c.add(v);\n            c.clear();\n        }\n"));
  CHECK(e.encoding.last == 4);
  auto models = brute_force_projections(e.encoding.formula, {{Predicate::contains("c", "v"), 0},
                                                            {Predicate::contains("c", "v"), 4},
                                                            {Predicate::empty("c"), 4}});
  for (const auto& m : models) {
    if (m[0]) CHECK_FALSE(m[1]);
    else CHECK((m[2] && !m[1]));
  }
  CHECK(models.count({false, false, true}) == 1);
}

TEST_CASE("TreeSet context includes null and exc") {
  auto unit = testing::example_unit("TreeSet");
  const auto& cat = SemanticsCatalog::builtin();
  CHECK(unit_uses_exc(unit, cat));
  CHECK_FALSE(unit_uses_exc(testing::example_unit("HashSet"), cat));
  const auto& m = *unit.method("removeId");
  auto ctx = build_context(unit, m, cat);
  CHECK(ctx.has("null"));
  CHECK(ctx.is_state(Predicate::contains("idSet", "null")));
  CHECK_FALSE(ctx.is_state(Predicate::eq("idMain", "null")));
  auto P = predicate_universe(ctx, true);
  CHECK(P.size() == 8);
  EncodingEnv env(ctx, P, cat, collection_kinds(unit));
  auto enc = encode_method(m, env);
  CHECK(variables(enc.formula).size() == 32);
}

TEST_CASE("common context lists fields and literals") {
  const auto& cat = SemanticsCatalog::builtin();
  auto unit = parse_unit(wrap("HashSet", "        c.add(\"k\");\n"), cat.parse_options());
  auto ctx = common_context(unit, cat);
  CHECK(ctx.has("c"));
  CHECK(ctx.has("\"k\""));
  CHECK_FALSE(ctx.has("v"));
  CHECK(collection_kinds(unit) == std::map<std::string, std::string>{{"c", "HashSet"}});
}

TEST_CASE("explicit context selection") {
  const auto& cat = SemanticsCatalog::builtin();
  auto unit = testing::example_unit("HashSet");
  ContextSelection sel;
  sel.automatic = false;
  sel.symbols = {"idSet"};
  auto ctx = build_context(unit, *unit.method("add"), cat, sel);
  CHECK(ctx.has("id"));  // referenced by the body
  CHECK_FALSE(ctx.has("idMain"));
  sel.symbols = {"idSet", "ghost"};
  CHECK_THROWS_AS(build_context(unit, *unit.method("add"), cat, sel), ConfigError);
}

TEST_CASE("unknown operations surface early") {
  const auto& cat = SemanticsCatalog::builtin();
  auto unit = parse_unit(wrap("HashSet", "        c.retainAll(v);\n"), cat.parse_options());
  CHECK_THROWS_AS(used_semantics(unit, cat), UnknownOperation);
}
