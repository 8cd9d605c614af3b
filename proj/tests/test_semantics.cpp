#include <doctest.h>

#include "apifsm/brute_force.hpp"
#include "apifsm/error.hpp"
#include "apifsm/semantics.hpp"

using namespace apifsm;

namespace {

Context ctx_of(std::vector<std::string> cs, std::vector<std::string> vs) {
  Context ctx;
  for (auto& c : cs) ctx.add({c, Sort::Collection, Role::State});
  for (auto& v : vs) ctx.add({v, Sort::Value, is_literal(v) ? Role::State : Role::Indeterminacy});
  return ctx;
}

PlainOp call(std::string receiver, std::string op, std::vector<std::string> args = {}) {
  PlainOp p;
  p.receiver = std::move(receiver);
  p.operation = std::move(op);
  p.arguments = std::move(args);
  return p;
}

std::vector<std::string> names(const PredicateSet& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

// Projections of the expansion's models onto the given primed/unprimed variables.
std::set<std::vector<bool>> project(const Expansion& e, std::vector<IndexedVariable> vars) {
  return brute_force_projections(e.formula, vars);
}

}  // namespace

TEST_CASE("lookup resolves aliases and reports missing entries") {
  const auto& cat = SemanticsCatalog::builtin();
  CHECK(&cat.lookup("add", "LinkedHashSet") == &cat.lookup("add", "HashSet"));
  CHECK(cat.lookup("remove", "TreeSet").collection_kind == "TreeSet");
  CHECK_THROWS_AS(cat.lookup("retainAll", "HashSet"), UnknownOperation);
  CHECK(cat.kinds().count("LinkedHashSet") == 1);
  CHECK(cat.lookup("add", "TreeSet").mentions_exc());
  CHECK_FALSE(cat.lookup("add", "HashSet").mentions_exc());
}

TEST_CASE("HashSet entries carry the documented formulas") {
  const auto& cat = SemanticsCatalog::builtin();
  CHECK(to_smt(cat.lookup("add", "HashSet").formula) == "(and |contains(c,v)@1| (not |empty(c)@1|))");
  CHECK(to_smt(cat.lookup("clear", "HashSet").formula) == "|empty(c)@1|");
  CHECK(names(cat.lookup("clear", "HashSet").affected) == std::vector<std::string>{"contains(c,v)", "empty(c)"});
  CHECK(to_smt(cat.lookup("remove", "HashSet").formula) ==
        "(and (not |contains(c,v)@1|) (=> |empty(c)@0| |empty(c)@1|))");
}

TEST_CASE("expand clear instantiates the unmatched value") {
  Context ctx = ctx_of({"idSet"}, {"id"});
  auto P = predicate_universe(ctx, false);
  auto e = expand(SemanticsCatalog::builtin().lookup("clear", "HashSet"), call("idSet", "clear"), ctx, P);
  CHECK(to_smt(e.formula) == "|empty(idSet)@1|");
  CHECK(names(e.touched) == std::vector<std::string>{"contains(idSet,id)", "empty(idSet)"});
}

TEST_CASE("expand add leaves no frame in the tiny universe") {
  Context ctx = ctx_of({"idSet"}, {"id"});
  auto P = predicate_universe(ctx, false);
  auto e = expand(SemanticsCatalog::builtin().lookup("add", "HashSet"), call("idSet", "add", {"id"}), ctx, P);
  CHECK(to_smt(e.formula) == "(and |contains(idSet,id)@1| (not |empty(idSet)@1|))");
  CHECK(e.touched.size() == 2);
}

TEST_CASE("expand remove frames the other value") {
  Context ctx = ctx_of({"idSet"}, {"idMain", "idOpt"});
  auto P = predicate_universe(ctx, false);
  auto e = expand(SemanticsCatalog::builtin().lookup("remove", "HashSet"), call("idSet", "remove", {"idMain"}), ctx, P);
  CHECK(names(e.touched) == std::vector<std::string>{"contains(idSet,idMain)", "empty(idSet)"});
  auto smt = to_smt(e.formula);
  CHECK(smt.find("(= |contains(idSet,idOpt)@1| |contains(idSet,idOpt)@0|)") != std::string::npos);
  CHECK(smt.find("(= |eq(idMain,idOpt)@1| |eq(idMain,idOpt)@0|)") != std::string::npos);
}

TEST_CASE("clear still constrains when no values exist") {
  Context ctx = ctx_of({"c"}, {});
  auto P = predicate_universe(ctx, false);
  auto e = expand(SemanticsCatalog::builtin().lookup("clear", "HashSet"), call("c", "clear"), ctx, P);
  CHECK(to_smt(e.formula) == "|empty(c)@1|");
}

TEST_CASE("arity and symbol errors") {
  Context ctx = ctx_of({"c"}, {"v"});
  auto P = predicate_universe(ctx, false);
  const auto& add = SemanticsCatalog::builtin().lookup("add", "HashSet");
  CHECK_THROWS_AS(expand(add, call("c", "add"), ctx, P), ArityError);
  CHECK_THROWS_AS(expand(add, call("c", "add", {"v", "v"}), ctx, P), ArityError);
  CHECK_THROWS_AS(expand(add, call("v", "add", {"v"}), ctx, P), ArityError);
  CHECK_THROWS_AS(expand(add, call("c", "add", {"nope"}), ctx, P), UnknownSymbol);
  CHECK_THROWS_AS(expand(SemanticsCatalog::builtin().lookup("add", "TreeSet"), call("c", "add", {"v"}), ctx, P),
                  UnknownSymbol);
}

TEST_CASE("frame soundness for every builtin entry") {
  const auto& cat = SemanticsCatalog::builtin();
  for (const char* kind : {"HashSet", "TreeSet"}) {
    for (const char* op : {"add", "remove", "clear", "construct"}) {
      const auto& sem = cat.lookup(op, kind);
      Context ctx = ctx_of({"c", "d"}, {"v", "null"});
      auto P = predicate_universe(ctx, true);
      std::vector<std::string> args;
      if (sem.arguments == 1) args.push_back("v");
      auto e = expand(sem, call("c", op, args), ctx, P);
      for (const auto& p : P) {
        if (std::find(e.touched.begin(), e.touched.end(), p) != e.touched.end()) continue;
        // p' = p is a conjunct, so p'≠p is unsatisfiable.
        auto f = conjunction({e.formula, negate(iff(var(p, 0), var(p, 1)))});
        const std::string what = std::string(kind) + "." + op + " frames " + p.to_string();
        CHECK_MESSAGE(brute_force_projections(f, {}).empty(), what);
      }
    }
  }
}

TEST_CASE("remove may or may not empty the set") {
  Context ctx = ctx_of({"c"}, {"v", "w"});
  auto P = predicate_universe(ctx, false);
  auto e = expand(SemanticsCatalog::builtin().lookup("remove", "HashSet"), call("c", "remove", {"v"}), ctx, P);
  auto pinned = conjunction({e.formula, negate(var(Predicate::empty("c"), 0))});
  auto models = brute_force_projections(pinned, {{Predicate::empty("c"), 1}});
  CHECK(models == std::set<std::vector<bool>>{{false}, {true}});
}

TEST_CASE("TreeSet exceptions: non-null keeps exc, null sets it") {
  const auto& cat = SemanticsCatalog::builtin();
  for (const char* op : {"add", "remove"}) {
    Context ctx = ctx_of({"c"}, {"v", "null"});
    auto P = predicate_universe(ctx, true);
    auto e = expand(cat.lookup(op, "TreeSet"), call("c", op, {"v"}), ctx, P);
    IndexedVariable isnull{Predicate::eq("v", "null"), 0}, exc0{Predicate::exc(), 0}, exc1{Predicate::exc(), 1};
    auto models = project(e, {isnull, exc0, exc1});
    for (const auto& m : models) {
      if (!m[0]) CHECK(m[1] == m[2]);
      else CHECK(m[2]);
    }
    CHECK(models.count({false, false, false}) == 1);
    CHECK(models.count({true, false, true}) == 1);
  }
}

TEST_CASE("catalog extension files") {
  auto ext = SemanticsCatalog::from_json(R"j({
    "aliases": {"ConcurrentSkipListSet": "TreeSet"},
    "entries": [{"operation": "retain", "kind": "HashSet", "collections": ["c"], "values": ["v", "u"],
                 "arguments": 1, "affects": ["contains(c,u)"], "formula": "contains(c,v) <-> contains(c,v)'"}]
  })j");
  SemanticsCatalog cat = SemanticsCatalog::builtin();
  cat.merge(ext);
  CHECK(cat.has("retain", "HashSet"));
  CHECK(cat.has("add", "ConcurrentSkipListSet"));
  CHECK(cat.parse_options().collection_kinds.count("ConcurrentSkipListSet") == 1);

  Context ctx = ctx_of({"c"}, {"a", "b"});
  auto P = predicate_universe(ctx, false);
  auto e = expand(cat.lookup("retain", "HashSet"), call("c", "retain", {"a"}), ctx, P);
  CHECK(names(e.touched) == std::vector<std::string>{"contains(c,a)", "contains(c,b)"});

  CHECK_THROWS_AS(SemanticsCatalog::from_json(R"j({"entries": [{"operation": "x"}]})j"), ConfigError);
  CHECK_THROWS_AS(SemanticsCatalog::from_json(R"j({"bogus": 1})j"), ConfigError);
  CHECK_THROWS_AS(SemanticsCatalog::from_json(R"j({"entries": [{"operation": "x", "kind": "K", "collections": ["c"],
                   "formula": "contains(c,z)'"}]})j"),
                  ConfigError);
  CHECK_THROWS_AS(SemanticsCatalog::from_json(R"j({"entries": [{"operation": "x", "kind": "K", "collections": ["c"],
                   "formula": "contains(c,"}]})j"),
                  ConfigError);
}
