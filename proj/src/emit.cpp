#include <fstream>
#include <sstream>

#include <json.hpp>

#include "apifsm/error.hpp"
#include "apifsm/io.hpp"

namespace apifsm {

namespace {

using Json = nlohmann::ordered_json;

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string node_label(const AbstractState& s) {
  if (s.is_initial()) return "init";
  std::string out;
  for (const auto& [p, v] : s.valuation) {
    if (!out.empty()) out += "\\n";
    out += dot_escape(literal_text(p, v));
  }
  return out;
}

}  // namespace

std::string emit_dot(const Fsm& fsm) {
  std::ostringstream out;
  out << "digraph fsm {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, style=rounded];\n";
  for (std::size_t k = 0; k < fsm.states.size(); ++k) {
    out << "  " << Fsm::state_id(k) << " [label=\"" << node_label(fsm.states[k]) << "\"";
    if (k == fsm.initial) out << ", shape=ellipse";
    out << "];\n";
  }
  for (const auto& t : fsm.transitions) {
    auto guard = simplify_guard(t.guard);
    std::string label = t.method;
    if (!guard.is_true()) label += " [" + guard.to_string() + "]";
    out << "  " << Fsm::state_id(t.from) << " -> " << Fsm::state_id(t.to) << " [label=\"" << dot_escape(label)
        << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

Json dnf_json(const PredicateSet& variables, const std::vector<std::vector<bool>>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json cube = Json::array();
    for (std::size_t k = 0; k < variables.size(); ++k)
      cube.push_back(Json{{"pred", variables[k].to_string()}, {"value", static_cast<bool>(row[k])}});
    out.push_back(std::move(cube));
  }
  return out;
}

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const Json& member(const Json& node, const char* key, const std::string& path) {
  if (!node.is_object() || !node.contains(key)) malformed(path + "." + key, "missing");
  return node[key];
}

std::string text_member(const Json& node, const char* key, const std::string& path) {
  const Json& v = member(node, key, path);
  if (!v.is_string()) malformed(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Predicate parse_pred(const std::string& text, const std::string& path) {
  try {
    return Predicate::parse(text);
  } catch (const std::invalid_argument& ex) {
    malformed(path, ex.what());
  }
}

// Reads a DNF; every cube must assign the same predicates in the same order.
void read_dnf(const Json& node, const std::string& path, std::optional<PredicateSet>& variables,
              std::vector<std::vector<bool>>& rows) {
  if (!node.is_array()) malformed(path, "expected an array of cubes");
  for (std::size_t r = 0; r < node.size(); ++r) {
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!node[r].is_array()) malformed(rpath, "expected an array of literals");
    PredicateSet vars;
    std::vector<bool> row;
    for (std::size_t k = 0; k < node[r].size(); ++k) {
      const std::string lpath = rpath + "[" + std::to_string(k) + "]";
      const Json& lit = node[r][k];
      vars.push_back(parse_pred(text_member(lit, "pred", lpath), lpath + ".pred"));
      const Json& value = member(lit, "value", lpath);
      if (!value.is_boolean()) malformed(lpath + ".value", "expected a boolean");
      row.push_back(value.get<bool>());
    }
    if (variables && *variables != vars) malformed(rpath, "cubes disagree on their predicates");
    variables = vars;
    rows.push_back(std::move(row));
  }
}

}  // namespace

std::string emit_json(const Fsm& fsm) {
  Json root;
  Json states = Json::array();
  for (std::size_t k = 0; k < fsm.states.size(); ++k) {
    Json valuation = Json::object();
    for (const auto& [p, v] : fsm.states[k].valuation) valuation[p.to_string()] = v;
    states.push_back(Json{{"id", Fsm::state_id(k)}, {"valuation", std::move(valuation)}});
  }
  root["states"] = std::move(states);
  root["initial"] = Fsm::state_id(fsm.initial);
  root["alphabet"] = fsm.alphabet;
  Json transitions = Json::array();
  for (const auto& t : fsm.transitions) {
    Json entry;
    entry["from"] = Fsm::state_id(t.from);
    entry["method"] = t.method;
    entry["guard_dnf"] = dnf_json(t.guard.variables, t.guard.conjuncts);
    entry["to"] = Fsm::state_id(t.to);
    if (t.guard.care) entry["guard_care"] = dnf_json(t.guard.variables, *t.guard.care);
    transitions.push_back(std::move(entry));
  }
  root["transitions"] = std::move(transitions);
  return root.dump() + "\n";
}

Fsm parse_fsm_json(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& ex) {
    throw ConfigError(std::string("fsm: ") + ex.what());
  }
  if (!root.is_object()) malformed("fsm", "expected an object");
  Fsm fsm;
  std::map<std::string, std::size_t> ids;
  const Json& states = member(root, "states", "fsm");
  if (!states.is_array()) malformed("states", "expected an array");
  for (std::size_t k = 0; k < states.size(); ++k) {
    const std::string path = "states[" + std::to_string(k) + "]";
    std::string id = text_member(states[k], "id", path);
    if (!ids.emplace(id, k).second) malformed(path + ".id", "duplicate state id '" + id + "'");
    const Json& valuation = member(states[k], "valuation", path);
    if (!valuation.is_object()) malformed(path + ".valuation", "expected an object");
    AbstractState s;
    for (const auto& [name, value] : valuation.items()) {
      if (!value.is_boolean()) malformed(path + ".valuation." + name, "expected a boolean");
      s.valuation[parse_pred(name, path + ".valuation." + name)] = value.get<bool>();
    }
    fsm.states.push_back(std::move(s));
  }
  auto state_ref = [&](const std::string& id, const std::string& path) {
    auto it = ids.find(id);
    if (it == ids.end()) malformed(path, "unknown state '" + id + "'");
    return it->second;
  };
  fsm.initial = state_ref(text_member(root, "initial", "fsm"), "initial");
  const Json& alphabet = member(root, "alphabet", "fsm");
  if (!alphabet.is_array()) malformed("alphabet", "expected an array");
  for (const auto& a : alphabet) {
    if (!a.is_string()) malformed("alphabet", "expected strings");
    fsm.alphabet.push_back(a.get<std::string>());
  }
  const Json& transitions = member(root, "transitions", "fsm");
  if (!transitions.is_array()) malformed("transitions", "expected an array");
  for (std::size_t k = 0; k < transitions.size(); ++k) {
    const std::string path = "transitions[" + std::to_string(k) + "]";
    const Json& t = transitions[k];
    Transition tr;
    tr.from = state_ref(text_member(t, "from", path), path + ".from");
    tr.to = state_ref(text_member(t, "to", path), path + ".to");
    tr.method = text_member(t, "method", path);
    std::optional<PredicateSet> variables;
    read_dnf(member(t, "guard_dnf", path), path + ".guard_dnf", variables, tr.guard.conjuncts);
    if (t.contains("guard_care")) {
      tr.guard.care.emplace();
      read_dnf(t["guard_care"], path + ".guard_care", variables, *tr.guard.care);
    }
    tr.guard.variables = variables.value_or(PredicateSet{});
    fsm.transitions.push_back(std::move(tr));
  }
  return fsm;
}

Fsm load_fsm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot read");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_fsm_json(buffer.str());
}

}  // namespace apifsm
