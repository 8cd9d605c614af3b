#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "apifsm/error.hpp"
#include "apifsm/io.hpp"

namespace apifsm {

bool DiffReport::changed() const {
  return !(predicates_only_a.empty() && predicates_only_b.empty() && alphabet_only_a.empty() &&
           alphabet_only_b.empty() && states_only_a.empty() && states_only_b.empty() && transitions_only_a.empty() &&
           transitions_only_b.empty());
}

namespace {

constexpr std::size_t kMaxEquivalenceVariables = 22;

bool holds(const Guard& g, const std::map<Predicate, bool>& point) {
  std::vector<bool> row;
  row.reserve(g.variables.size());
  for (const auto& p : g.variables) row.push_back(point.at(p));
  return g.holds(row);
}

std::set<std::string> predicate_names(const Fsm& fsm) {
  std::set<std::string> out;
  for (const auto& s : fsm.states)
    for (const auto& [p, _] : s.valuation) out.insert(p.to_string());
  for (const auto& t : fsm.transitions)
    for (const auto& p : t.guard.variables) out.insert(p.to_string());
  return out;
}

template <typename T>
void split(const std::set<T>& a, const std::set<T>& b, std::vector<T>& only_a, std::vector<T>& only_b) {
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
}

std::string state_text(const AbstractState& s) { return "{" + s.label() + "}"; }

struct Keyed {
  std::string from, method, to;
  const Guard* guard;
};

std::vector<Keyed> keyed(const Fsm& fsm) {
  std::vector<Keyed> out;
  for (const auto& t : fsm.transitions)
    out.push_back({state_text(fsm.states[t.from]), t.method, state_text(fsm.states[t.to]), &t.guard});
  return out;
}

}  // namespace

bool guards_equivalent(const Guard& a, const Guard& b) {
  std::set<Predicate> vars(a.variables.begin(), a.variables.end());
  vars.insert(b.variables.begin(), b.variables.end());
  std::vector<Predicate> all(vars.begin(), vars.end());
  if (all.size() > kMaxEquivalenceVariables) return a.variables == b.variables && a.conjuncts == b.conjuncts;
  std::map<Predicate, bool> point;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << all.size()); ++bits) {
    for (std::size_t k = 0; k < all.size(); ++k) point[all[k]] = (bits >> k) & 1;
    if (holds(a, point) != holds(b, point)) return false;
  }
  return true;
}

DiffReport diff_fsm(const Fsm& a, const Fsm& b) {
  std::set<std::string> alpha_a(a.alphabet.begin(), a.alphabet.end());
  std::set<std::string> alpha_b(b.alphabet.begin(), b.alphabet.end());
  if (!alpha_a.empty() && !alpha_b.empty() &&
      std::none_of(alpha_a.begin(), alpha_a.end(), [&](const std::string& m) { return alpha_b.count(m) > 0; }))
    throw IncomparableModels("the models share no method names");

  DiffReport r;
  split(predicate_names(a), predicate_names(b), r.predicates_only_a, r.predicates_only_b);
  split(alpha_a, alpha_b, r.alphabet_only_a, r.alphabet_only_b);
  std::set<std::string> states_a, states_b;
  for (const auto& s : a.states) states_a.insert(state_text(s));
  for (const auto& s : b.states) states_b.insert(state_text(s));
  split(states_a, states_b, r.states_only_a, r.states_only_b);

  auto ka = keyed(a), kb = keyed(b);
  auto unmatched = [](const std::vector<Keyed>& mine, const std::vector<Keyed>& theirs) {
    std::vector<TransitionLabel> out;
    for (const auto& t : mine) {
      bool matched = std::any_of(theirs.begin(), theirs.end(), [&](const Keyed& u) {
        return u.from == t.from && u.method == t.method && u.to == t.to && guards_equivalent(*t.guard, *u.guard);
      });
      if (!matched) out.push_back({t.from, t.method, simplify_guard(*t.guard).to_string(), t.to});
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  r.transitions_only_a = unmatched(ka, kb);
  r.transitions_only_b = unmatched(kb, ka);
  return r;
}

std::string format_report(const DiffReport& r) {
  std::ostringstream out;
  out << (r.changed() ? "behavior changed" : "no behavioral change") << '\n';
  auto list = [&](const char* title, const std::vector<std::string>& items) {
    if (items.empty()) return;
    out << title << ":\n";
    for (const auto& i : items) out << "  " << i << '\n';
  };
  auto transitions = [&](const char* title, const std::vector<TransitionLabel>& items) {
    if (items.empty()) return;
    out << title << ":\n";
    for (const auto& t : items) out << "  " << t.from << " --" << t.method << " [" << t.guard << "]--> " << t.to << '\n';
  };
  list("predicates only in A", r.predicates_only_a);
  list("predicates only in B", r.predicates_only_b);
  list("methods only in A", r.alphabet_only_a);
  list("methods only in B", r.alphabet_only_b);
  list("states only in A", r.states_only_a);
  list("states only in B", r.states_only_b);
  transitions("transitions only in A", r.transitions_only_a);
  transitions("transitions only in B", r.transitions_only_b);
  return out.str();
}

std::string report_json(const DiffReport& r) {
  using Json = nlohmann::ordered_json;
  auto transitions = [](const std::vector<TransitionLabel>& items) {
    Json out = Json::array();
    for (const auto& t : items) out.push_back({{"from", t.from}, {"method", t.method}, {"guard", t.guard}, {"to", t.to}});
    return out;
  };
  Json root;
  root["changed"] = r.changed();
  root["predicates_only_a"] = r.predicates_only_a;
  root["predicates_only_b"] = r.predicates_only_b;
  root["alphabet_only_a"] = r.alphabet_only_a;
  root["alphabet_only_b"] = r.alphabet_only_b;
  root["states_only_a"] = r.states_only_a;
  root["states_only_b"] = r.states_only_b;
  root["transitions_only_a"] = transitions(r.transitions_only_a);
  root["transitions_only_b"] = transitions(r.transitions_only_b);
  return root.dump(2) + "\n";
}

}  // namespace apifsm
