#include "apifsm/fsm.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "apifsm/error.hpp"

namespace apifsm {

std::string literal_text(const Predicate& p, bool value) { return (value ? "" : "!") + p.to_string(); }

bool AbstractState::refines(const AbstractState& other) const {
  for (const auto& [p, v] : other.valuation) {
    auto it = valuation.find(p);
    if (it == valuation.end() || it->second != v) return false;
  }
  return true;
}

std::string AbstractState::label(const std::string& separator) const {
  if (valuation.empty()) return "init";
  std::string out;
  for (const auto& [p, v] : valuation) {
    if (!out.empty()) out += separator;
    out += literal_text(p, v);
  }
  return out;
}

namespace {

std::vector<AbstractState> all_valuations(const PredicateSet& predicates) {
  std::vector<AbstractState> out;
  const std::size_t n = predicates.size();
  if (n > 20) throw ConfigError("state_predicates: too many state predicates (" + std::to_string(n) + ")");
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    AbstractState s;
    for (std::size_t k = 0; k < n; ++k) s.valuation[predicates[k]] = (bits >> (n - 1 - k)) & 1;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

StateSpace state_space(const PredicateSet& p_st, const std::optional<PredicateSet>& choice) {
  StateSpace space;
  space.mode = StateSpace::Mode::AllConcrete;
  if (choice) {
    for (const auto& p : *choice)
      if (!std::binary_search(p_st.begin(), p_st.end(), p))
        throw ConfigError("state_predicates: '" + p.to_string() + "' is not a state predicate");
    space.predicates = *choice;
    std::sort(space.predicates.begin(), space.predicates.end());
    space.predicates.erase(std::unique(space.predicates.begin(), space.predicates.end()), space.predicates.end());
  } else {
    space.predicates = p_st;
  }
  space.states.push_back(AbstractState{});
  for (auto& s : all_valuations(space.predicates)) space.states.push_back(std::move(s));
  return space;
}

StateSpace custom_state_space(const PredicateSet& p_st, const std::vector<Valuation>& states) {
  StateSpace space;
  space.mode = StateSpace::Mode::Custom;
  std::set<Predicate> used;
  space.states.push_back(AbstractState{});
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].empty()) throw ConfigError("states[" + std::to_string(k) + "]: empty valuation is the initial state");
    for (const auto& [p, _] : states[k]) {
      if (!std::binary_search(p_st.begin(), p_st.end(), p))
        throw ConfigError("states[" + std::to_string(k) + "]: '" + p.to_string() + "' is not a state predicate");
      used.insert(p);
    }
    space.states.push_back(AbstractState{states[k]});
  }
  for (std::size_t a = 1; a < space.states.size(); ++a)
    for (std::size_t b = 1; b < space.states.size(); ++b)
      if (a != b && space.states[a].refines(space.states[b]))
        throw ConfigError("states[" + std::to_string(a - 1) + "] refines states[" + std::to_string(b - 1) + "]");
  space.predicates.assign(used.begin(), used.end());
  for (const auto& total : all_valuations(space.predicates)) {
    bool covered = std::any_of(space.states.begin() + 1, space.states.end(),
                               [&](const AbstractState& s) { return total.refines(s); });
    if (!covered) throw ConfigError("states: valuation {" + total.label() + "} refines no state");
  }
  return space;
}

// ---------------------------------------------------------------------------
// Guards

bool Guard::holds(const std::vector<bool>& valuation) const {
  return std::binary_search(conjuncts.begin(), conjuncts.end(), valuation);
}

bool Guard::is_true() const {
  if (care) {
    return std::all_of(care->begin(), care->end(), [&](const std::vector<bool>& v) { return holds(v); });
  }
  return variables.size() < 63 && conjuncts.size() == (std::size_t{1} << variables.size());
}

void Guard::normalize() {
  auto tidy = [](std::vector<std::vector<bool>>& xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  };
  tidy(conjuncts);
  if (care) tidy(*care);
}

// ---------------------------------------------------------------------------
// Transitions

PreparedMethod prepare_method(const ApiUnitModel& unit, const MethodModel& method, const std::string& label,
                              const SemanticsCatalog& catalog, const ContextSelection& selection, bool include_exc) {
  PreparedMethod pm;
  pm.label = label;
  pm.context = build_context(unit, method, catalog, selection);
  pm.predicates = predicate_universe(pm.context, include_exc);
  pm.nd_predicates = indeterminacy_predicates(pm.context, pm.predicates);
  EncodingEnv env(pm.context, pm.predicates, catalog, collection_kinds(unit));
  pm.encoding = encode_method(method, env);
  pm.entry_axioms = index_formula(env.axioms, 0);

  // Register P@0 and P@last first so their numbering is stable.
  for (const auto& p : pm.predicates) pm.cnf.variable({p, 0});
  for (const auto& p : pm.predicates) pm.cnf.variable({p, pm.encoding.last});
  add_formula(pm.cnf, pm.encoding.formula);
  for (const auto& p : pm.nd_predicates) pm.projection.push_back(pm.cnf.find({p, 0}));
  for (const auto& [v, id] : pm.cnf.originals()) pm.trace.push_back(id);
  std::sort(pm.trace.begin(), pm.trace.end());
  return pm;
}

namespace {

Formula pins(const AbstractState& state, int step) {
  std::vector<Formula> parts;
  for (const auto& [p, v] : state.valuation) parts.push_back(v ? var(p, step) : negate(var(p, step)));
  return conjunction(std::move(parts));
}

std::vector<int> pin_literals(const CnfInstance& cnf, const AbstractState& state, int step) {
  std::vector<int> out;
  for (const auto& [p, v] : state.valuation) {
    int id = cnf.find({p, step});
    if (id == 0) throw Error("state predicate " + p.to_string() + " is outside the method's predicate universe");
    out.push_back(v ? id : -id);
  }
  return out;
}

}  // namespace

Formula transition_formula(const PreparedMethod& pm, const AbstractState& from, const AbstractState& to) {
  return conjunction({pins(from, 0), pm.encoding.formula, pins(to, pm.encoding.last)});
}

Guard compute_transition(const PreparedMethod& pm, const AbstractState& from, const AbstractState& to,
                         const SolverConfig& solver_config, BlockingMode blocking, TransitionStats* stats) {
  Guard guard;
  guard.variables = pm.nd_predicates;

  std::vector<int> assumptions = pin_literals(pm.cnf, from, 0);
  for (int lit : pin_literals(pm.cnf, to, pm.encoding.last)) assumptions.push_back(lit);
  auto solver = make_solver(solver_config);
  solver->load(pm.cnf);
  Enumeration models = enumerate_models(*solver, assumptions, pm.projection, blocking, pm.trace);
  guard.conjuncts = std::move(models.projections);
  if (stats) stats->solver_calls += models.solver_calls;

  CnfInstance entry;
  for (const auto& p : pm.predicates) entry.variable({p, 0});
  add_formula(entry, pm.entry_axioms);
  std::vector<int> entry_projection;
  for (const auto& p : pm.nd_predicates) entry_projection.push_back(entry.find({p, 0}));
  auto care_solver = make_solver(solver_config);
  care_solver->load(entry);
  guard.care = enumerate_models(*care_solver, pin_literals(entry, from, 0), entry_projection).projections;

  guard.normalize();
  return guard;
}

// ---------------------------------------------------------------------------
// Extraction

PredicateSet unit_state_predicates(const ApiUnitModel& unit, const SemanticsCatalog& catalog,
                                   const ContextSelection& selection) {
  Context common = common_context(unit, catalog, selection);
  return state_predicates(common, predicate_universe(common, unit_uses_exc(unit, catalog)));
}

StateSpace unit_state_space(const ApiUnitModel& unit, const ExtractionOptions& options) {
  const SemanticsCatalog& catalog = options.catalog ? *options.catalog : SemanticsCatalog::builtin();
  PredicateSet p_st = unit_state_predicates(unit, catalog, options.context);
  if (options.custom_states) return custom_state_space(p_st, *options.custom_states);
  std::optional<PredicateSet> choice;
  if (options.state_predicates) {
    choice.emplace();
    for (const auto& name : *options.state_predicates) {
      try {
        choice->push_back(Predicate::parse(name));
      } catch (const std::invalid_argument& ex) {
        throw ConfigError("state_predicates: " + std::string(ex.what()));
      }
    }
  }
  return state_space(p_st, choice);
}

std::vector<std::pair<std::string, MethodModel>> fsm_methods(const ApiUnitModel& unit) {
  std::vector<std::pair<std::string, MethodModel>> out;
  out.emplace_back(unit.name, unit.constructor_or_default());
  for (const auto& m : unit.methods)
    if (m.is_public) out.emplace_back(m.name, m);
  return out;
}

namespace {

struct Task {
  std::size_t method;
  std::size_t from;
  std::size_t to;
};

template <typename Fn>
void run_parallel(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k; (k = next++) < count;) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

Fsm extract_fsm(const ApiUnitModel& unit, const ExtractionOptions& options, ExtractionReport* report) {
  TransitionFunction compute = [&](const PreparedMethod& pm, const AbstractState& a, const AbstractState& b,
                                   TransitionStats* stats) {
    return compute_transition(pm, a, b, options.solver, options.blocking, stats);
  };
  return extract_fsm_with(unit, options, compute, report);
}

Fsm extract_fsm_with(const ApiUnitModel& unit, const ExtractionOptions& options, const TransitionFunction& compute,
                     ExtractionReport* report) {
  const SemanticsCatalog& catalog = options.catalog ? *options.catalog : SemanticsCatalog::builtin();
  const bool include_exc = unit_uses_exc(unit, catalog);
  StateSpace space = unit_state_space(unit, options);

  std::vector<PreparedMethod> prepared;
  for (const auto& [label, method] : fsm_methods(unit))
    prepared.push_back(prepare_method(unit, method, label, catalog, options.context, include_exc));

  std::vector<Task> tasks;
  for (std::size_t to = 1; to < space.states.size(); ++to) tasks.push_back({0, 0, to});
  for (std::size_t m = 1; m < prepared.size(); ++m)
    for (std::size_t from = 1; from < space.states.size(); ++from)
      for (std::size_t to = 1; to < space.states.size(); ++to) tasks.push_back({m, from, to});

  std::vector<Guard> guards(tasks.size());
  std::vector<TransitionStats> stats(tasks.size());
  run_parallel(tasks.size(), options.threads, [&](std::size_t k) {
    const Task& t = tasks[k];
    guards[k] = compute(prepared[t.method], space.states[t.from], space.states[t.to], &stats[k]);
  });

  Fsm fsm;
  fsm.states = space.states;
  fsm.initial = 0;
  for (const auto& pm : prepared) fsm.alphabet.push_back(pm.label);
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    if (guards[k].is_false()) continue;
    fsm.transitions.push_back(Transition{tasks[k].from, prepared[tasks[k].method].label, guards[k], tasks[k].to});
  }
  std::sort(fsm.transitions.begin(), fsm.transitions.end(), [](const Transition& a, const Transition& b) {
    return std::tie(a.from, a.method, a.to) < std::tie(b.from, b.method, b.to);
  });

  if (report) {
    report->state_predicates = unit_state_predicates(unit, catalog, options.context);
    report->space = space;
    report->tasks.clear();
    for (std::size_t k = 0; k < tasks.size(); ++k)
      report->tasks.push_back(TaskReport{tasks[k].from, prepared[tasks[k].method].label, tasks[k].to,
                                         prepared[tasks[k].method].nd_predicates.size(), stats[k].solver_calls});
  }
  return options.prune_unreachable ? prune_unreachable(fsm) : fsm;
}

Fsm prune_unreachable(const Fsm& fsm) {
  std::vector<bool> reached(fsm.states.size(), false);
  std::deque<std::size_t> queue{fsm.initial};
  reached[fsm.initial] = true;
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    for (const auto& t : fsm.transitions)
      if (t.from == s && !reached[t.to]) {
        reached[t.to] = true;
        queue.push_back(t.to);
      }
  }
  std::vector<std::size_t> renumber(fsm.states.size(), 0);
  Fsm out;
  out.alphabet = fsm.alphabet;
  for (std::size_t k = 0; k < fsm.states.size(); ++k) {
    if (!reached[k]) continue;
    renumber[k] = out.states.size();
    out.states.push_back(fsm.states[k]);
  }
  out.initial = renumber[fsm.initial];
  for (const auto& t : fsm.transitions)
    if (reached[t.from] && reached[t.to])
      out.transitions.push_back(Transition{renumber[t.from], t.method, t.guard, renumber[t.to]});
  return out;
}

}  // namespace apifsm
