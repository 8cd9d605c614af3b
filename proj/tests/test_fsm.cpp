#include <doctest.h>

#include <algorithm>
#include <random>

#include "apifsm/brute_force.hpp"
#include "apifsm/error.hpp"
#include "apifsm/fsm.hpp"
#include "support.hpp"

using namespace apifsm;

namespace {

const Predicate kEmpty = Predicate::empty("idSet");

AbstractState state(std::initializer_list<std::pair<Predicate, bool>> lits) {
  AbstractState s;
  for (const auto& [p, v] : lits) s.valuation[p] = v;
  return s;
}

PreparedMethod prepared(const ApiUnitModel& unit, const std::string& name) {
  const auto& cat = SemanticsCatalog::builtin();
  for (const auto& [label, m] : fsm_methods(unit))
    if (label == name) return prepare_method(unit, m, label, cat, {}, unit_uses_exc(unit, cat));
  throw std::runtime_error("no method " + name);
}

std::string wrap(const std::string& body, const std::string& params = "String v") {
  return "class U {\n    private Set<String> c;\n\n    public U() {\n        c = new HashSet<>();\n    }\n\n"
         "    public void m(" +
         params + ") {\n" + body + "    }\n}\n";
}

}  // namespace

TEST_CASE("state space enumerates valuations after the initial state") {
  PredicateSet pst{Predicate::empty("a"), Predicate::empty("b")};
  auto space = state_space(pst);
  REQUIRE(space.states.size() == 5);
  CHECK(space.states[0].is_initial());
  CHECK(space.states[1].label() == "!empty(a), !empty(b)");
  CHECK(space.states[4].label() == "empty(a), empty(b)");
  auto chosen = state_space(pst, PredicateSet{Predicate::empty("b")});
  CHECK(chosen.states.size() == 3);
  CHECK_THROWS_AS(state_space(pst, PredicateSet{Predicate::exc()}), ConfigError);
}

TEST_CASE("custom states must partition the valuations") {
  PredicateSet pst{Predicate::empty("a"), Predicate::exc()};
  Valuation exc{{Predicate::exc(), true}};
  Valuation ok_empty{{Predicate::exc(), false}, {Predicate::empty("a"), true}};
  Valuation ok_full{{Predicate::exc(), false}, {Predicate::empty("a"), false}};
  auto space = custom_state_space(pst, {exc, ok_empty, ok_full});
  CHECK(space.mode == StateSpace::Mode::Custom);
  CHECK(space.states.size() == 4);
  CHECK_THROWS_AS(custom_state_space(pst, {exc, ok_empty}), ConfigError);
  CHECK_THROWS_AS(custom_state_space(pst, {exc, ok_empty, ok_full, ok_full}), ConfigError);
  CHECK_THROWS_AS(custom_state_space(pst, {Valuation{}, ok_empty}), ConfigError);
  CHECK_THROWS_AS(custom_state_space(pst, {Valuation{{Predicate::empty("z"), true}}}), ConfigError);
  CHECK(state({{Predicate::exc(), true}, {Predicate::empty("a"), true}}).refines(AbstractState{exc}));
}

TEST_CASE("removeId from a non-empty set") {
  auto unit = testing::example_unit("HashSet");
  auto pm = prepared(unit, "removeId");
  CHECK(pm.nd_predicates.size() == 3);
  auto to_empty = compute_transition(pm, state({{kEmpty, false}}), state({{kEmpty, true}}));
  CHECK(to_empty == brute_force_transition(pm, state({{kEmpty, false}}), state({{kEmpty, true}})));
  CHECK(simplify_guard(to_empty).to_string() == "idMain≠idOpt ∨ idOpt∉idSet");
  auto stay_empty = compute_transition(pm, state({{kEmpty, true}}), state({{kEmpty, true}}));
  CHECK(stay_empty.is_true());
  CHECK(simplify_guard(stay_empty).to_string() == "true");
  auto never = compute_transition(pm, state({{kEmpty, true}}), state({{kEmpty, false}}));
  CHECK(never.is_false());
  CHECK(simplify_guard(never).to_string() == "false");
}

TEST_CASE("guard printing") {
  Guard g;
  g.variables = {Predicate::eq("idMain", "idOpt"), Predicate::eq("idMain", "null"), Predicate::eq("idOpt", "null")};
  g.conjuncts = {{false, false, true}};
  CHECK(simplify_guard(g).to_string() == "idOpt=null ∧ idMain≠idOpt ∧ idMain≠null");
  g.conjuncts = {{false, false, true}, {true, true, true}};
  CHECK(simplify_guard(g).to_string() == "(idOpt=null ∧ idMain≠idOpt ∧ idMain≠null) ∨ (idMain=idOpt ∧ idMain=null ∧ idOpt=null)");
  g.care = std::vector<std::vector<bool>>{{false, false, true}, {false, false, false}};
  CHECK(simplify_guard(g).to_string() == "idOpt=null");
  CHECK(simplify_guard(g, false).cubes.size() == 2);

  Guard all;
  all.variables = {Predicate::exc()};
  all.conjuncts = {{false}, {true}};
  CHECK(all.is_true());
  CHECK(simplify_guard(all).to_string() == "true");
}

TEST_CASE("guard simplification keeps the truth table") {
  std::mt19937 rng(13);
  PredicateSet vars{Predicate::eq("a", "b"), Predicate::eq("a", "c"), Predicate::eq("b", "c"),
                    Predicate::contains("s", "a"), Predicate::contains("s", "b")};
  for (int round = 0; round < 100; ++round) {
    Guard g;
    g.variables = vars;
    for (std::uint32_t m = 0; m < 32; ++m)
      if (rng() % 3 == 0) {
        std::vector<bool> v;
        for (int k = 4; k >= 0; --k) v.push_back((m >> k) & 1);
        g.conjuncts.push_back(v);
      }
    auto expr = simplify_guard(g, false);
    for (std::uint32_t m = 0; m < 32; ++m) {
      std::vector<bool> v;
      Valuation point;
      for (int k = 4; k >= 0; --k) v.push_back((m >> k) & 1);
      for (std::size_t k = 0; k < 5; ++k) point[vars[k]] = v[k];
      CHECK(expr.evaluate(point) == g.holds(v));
    }
  }
}

TEST_CASE("an empty method keeps every state with guard true") {
  auto unit = parse_unit(wrap(""), SemanticsCatalog::builtin().parse_options());
  auto fsm = extract_fsm(unit);
  for (const auto& t : fsm.transitions) {
    if (t.method != "m") continue;
    CHECK(t.from == t.to);
    CHECK(t.guard.is_true());
  }
  std::size_t self_loops = std::count_if(fsm.transitions.begin(), fsm.transitions.end(),
                                         [](const Transition& t) { return t.method == "m"; });
  CHECK(self_loops == fsm.states.size() - 1);
}

TEST_CASE("HashSet example shape") {
  auto unit = testing::example_unit("HashSet");
  ExtractionReport report;
  auto fsm = extract_fsm(unit, testing::example_options("HashSet"), &report);
  REQUIRE(fsm.states.size() == 3);
  CHECK(fsm.alphabet == std::vector<std::string>{"ExampleImpl", "add", "removeId"});
  CHECK(fsm.transitions.size() == 6);
  CHECK(fsm.transitions.front().method == "ExampleImpl");
  CHECK(fsm.states[fsm.transitions.front().to].valuation.at(kEmpty));
  for (const auto& t : report.tasks) CHECK(t.solver_calls <= (std::size_t{1} << t.nd_predicates) + 1);
  CHECK(fsm == brute_force_fsm(unit, testing::example_options("HashSet")));
}

TEST_CASE("threaded extraction is deterministic") {
  auto unit = testing::example_unit("TreeSet");
  auto options = testing::example_options("TreeSet");
  auto serial = extract_fsm(unit, options);
  options.threads = 4;
  CHECK(extract_fsm(unit, options) == serial);
  options.blocking = BlockingMode::FullTrace;
  options.threads = 1;
  CHECK(extract_fsm(unit, options) == serial);
}

TEST_CASE("units without public methods only have the constructor") {
  auto unit = parse_unit("class Only {\n    private Set<String> s;\n\n    public Only() {\n        s = new "
                         "TreeSet<>();\n    }\n}\n",
                         SemanticsCatalog::builtin().parse_options());
  auto fsm = extract_fsm(unit);
  CHECK(fsm.alphabet == std::vector<std::string>{"Only"});
  for (const auto& t : fsm.transitions) CHECK(t.from == 0);
}

TEST_CASE("pruning drops unreachable states") {
  auto unit = testing::example_unit("TreeSet");
  auto fsm = extract_fsm(unit, testing::example_options("TreeSet"));
  auto pruned = prune_unreachable(fsm);
  CHECK(pruned.states.size() <= fsm.states.size());
  CHECK(pruned.initial == 0);
  for (const auto& t : pruned.transitions) {
    CHECK(t.from < pruned.states.size());
    CHECK(t.to < pruned.states.size());
  }
  Fsm island = fsm;
  island.transitions.erase(std::remove_if(island.transitions.begin(), island.transitions.end(),
                                          [](const Transition& t) { return t.from == 0; }),
                           island.transitions.end());
  CHECK(prune_unreachable(island).states.size() == 1);
}
