#include "apifsm/semantics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "apifsm/error.hpp"

namespace apifsm {

namespace {

// Shipped Set-family semantics. LinkedHashSet shares the HashSet entries
// since insertion order is not tracked.
constexpr std::string_view kBuiltinCatalog = R"json({
  "aliases": {"LinkedHashSet": "HashSet"},
  "interfaces": ["Set", "SortedSet", "NavigableSet", "Collection"],
  "entries": [
    {"operation": "construct", "kind": "HashSet", "collections": ["c"], "values": ["v"], "arguments": 0,
     "affects": ["contains(c,v)", "empty(c)"],
     "formula": "empty(c)'"},
    {"operation": "add", "kind": "HashSet", "collections": ["c"], "values": ["v"], "arguments": 1,
     "affects": ["contains(c,v)", "empty(c)"],
     "formula": "contains(c,v)' & !empty(c)'"},
    {"operation": "remove", "kind": "HashSet", "collections": ["c"], "values": ["v"], "arguments": 1,
     "affects": ["contains(c,v)", "empty(c)"],
     "formula": "!contains(c,v)' & (empty(c) -> empty(c)')"},
    {"operation": "clear", "kind": "HashSet", "collections": ["c"], "values": ["v"], "arguments": 0,
     "affects": ["contains(c,v)", "empty(c)"],
     "formula": "empty(c)'"},

    {"operation": "construct", "kind": "TreeSet", "collections": ["c"], "values": ["v"], "arguments": 0,
     "constants": ["null"],
     "affects": ["contains(c,v)", "empty(c)", "exc"],
     "formula": "empty(c)' & !exc'"},
    {"operation": "add", "kind": "TreeSet", "collections": ["c"], "values": ["v"], "arguments": 1,
     "constants": ["null"],
     "affects": ["contains(c,v)", "empty(c)", "eq(v,null)", "exc"],
     "formula": "(eq(v,null) <-> eq(v,null)') & (!eq(v,null) -> (contains(c,v)' & !empty(c)' & (exc' <-> exc))) & (eq(v,null) -> ((contains(c,v) <-> contains(c,v)') & (empty(c) <-> empty(c)') & exc'))"},
    {"operation": "remove", "kind": "TreeSet", "collections": ["c"], "values": ["v"], "arguments": 1,
     "constants": ["null"],
     "affects": ["contains(c,v)", "empty(c)", "eq(v,null)", "exc"],
     "formula": "(eq(v,null) <-> eq(v,null)') & (!eq(v,null) -> (!contains(c,v)' & (empty(c) -> empty(c)') & (exc' <-> exc))) & (eq(v,null) -> ((contains(c,v) <-> contains(c,v)') & (empty(c) <-> empty(c)') & exc'))"},
    {"operation": "clear", "kind": "TreeSet", "collections": ["c"], "values": ["v"], "arguments": 0,
     "constants": ["null"],
     "affects": ["contains(c,v)", "empty(c)"],
     "formula": "empty(c)'"}
  ]
})json";

using Json = nlohmann::json;

std::vector<std::string> string_list(const Json& node, const std::string& path) {
  if (!node.is_array()) throw ConfigError(path + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : node) {
    if (!item.is_string()) throw ConfigError(path + ": expected an array of strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

OpSemantics entry_from_json(const Json& node, const std::string& path) {
  static const std::set<std::string> kKeys{"operation", "kind",      "collections", "values",
                                           "arguments", "constants", "affects",     "formula"};
  if (!node.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, _] : node.items())
    if (!kKeys.count(key)) throw ConfigError(path + "." + key + ": unknown key");
  for (const char* key : {"operation", "kind", "collections", "formula"})
    if (!node.contains(key)) throw ConfigError(path + "." + key + ": missing");
  OpSemantics e;
  if (!node["operation"].is_string() || !node["kind"].is_string() || !node["formula"].is_string())
    throw ConfigError(path + ": operation, kind and formula must be strings");
  e.operation = node["operation"].get<std::string>();
  e.collection_kind = node["kind"].get<std::string>();
  e.collection_formals = string_list(node["collections"], path + ".collections");
  if (node.contains("values")) e.value_formals = string_list(node["values"], path + ".values");
  if (node.contains("constants")) e.constants = string_list(node["constants"], path + ".constants");
  if (node.contains("arguments")) {
    if (!node["arguments"].is_number_unsigned()) throw ConfigError(path + ".arguments: expected a count");
    e.arguments = node["arguments"].get<std::size_t>();
  }
  try {
    if (node.contains("affects"))
      for (const auto& text : string_list(node["affects"], path + ".affects")) e.affected.push_back(Predicate::parse(text));
    e.formula = parse_formula(node["formula"].get<std::string>());
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  return e;
}

void validate(const OpSemantics& e) {
  const std::string where = "semantics of " + e.collection_kind + "." + e.operation;
  if (e.collection_formals.empty()) throw ConfigError(where + ": needs a receiver collection formal");
  if (e.arguments > e.value_formals.size())
    throw ConfigError(where + ": more arguments than value formals");
  std::set<std::string> collections(e.collection_formals.begin(), e.collection_formals.end());
  std::set<std::string> values(e.value_formals.begin(), e.value_formals.end());
  if (collections.size() != e.collection_formals.size() || values.size() != e.value_formals.size())
    throw ConfigError(where + ": duplicate formal");
  for (const auto& c : e.constants) {
    if (!is_literal(c)) throw ConfigError(where + ": constant '" + c + "' must be null or a string literal");
    values.insert(c);
  }
  auto check = [&](const Predicate& p) {
    switch (p.kind()) {
      case PredicateKind::Eq:
        if (!(collections.count(p.first()) && collections.count(p.second())) &&
            !(values.count(p.first()) && values.count(p.second())))
          throw ConfigError(where + ": " + p.to_string() + " mixes sorts or uses undeclared formals");
        break;
      case PredicateKind::Contains:
        if (!collections.count(p.first()) || !values.count(p.second()))
          throw ConfigError(where + ": " + p.to_string() + " uses undeclared formals");
        break;
      case PredicateKind::Empty:
        if (!collections.count(p.first())) throw ConfigError(where + ": " + p.to_string() + " uses undeclared formals");
        break;
      case PredicateKind::Exc:
        break;
    }
  };
  for (const auto& p : e.affected) check(p);
  for (const auto& p : predicates(e.formula)) check(p);
  for (const auto& v : variables(e.formula))
    if (v.step != kCurrent && v.step != kPrimed) throw ConfigError(where + ": formula must be unindexed");
}

}  // namespace

bool OpSemantics::mentions_exc() const {
  if (std::find(affected.begin(), affected.end(), Predicate::exc()) != affected.end()) return true;
  return predicates(formula).count(Predicate::exc()) > 0;
}

const SemanticsCatalog& SemanticsCatalog::builtin() {
  static const SemanticsCatalog catalog = from_json(kBuiltinCatalog, "builtin catalog");
  return catalog;
}

SemanticsCatalog SemanticsCatalog::from_json(std::string_view text, const std::string& origin) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& ex) {
    throw ConfigError(origin + ": " + ex.what());
  }
  if (!root.is_object()) throw ConfigError(origin + ": expected an object");
  SemanticsCatalog catalog;
  for (const auto& [key, value] : root.items()) {
    if (key == "aliases") {
      if (!value.is_object()) throw ConfigError(origin + ".aliases: expected an object");
      for (const auto& [kind, target] : value.items()) {
        if (!target.is_string()) throw ConfigError(origin + ".aliases." + kind + ": expected a string");
        catalog.aliases_[kind] = target.get<std::string>();
      }
    } else if (key == "interfaces") {
      for (const auto& t : string_list(value, origin + ".interfaces")) catalog.interfaces_.insert(t);
    } else if (key == "entries") {
      if (!value.is_array()) throw ConfigError(origin + ".entries: expected an array");
      for (std::size_t i = 0; i < value.size(); ++i)
        catalog.add(entry_from_json(value[i], origin + ".entries[" + std::to_string(i) + "]"));
    } else {
      throw ConfigError(origin + "." + key + ": unknown key");
    }
  }
  return catalog;
}

SemanticsCatalog SemanticsCatalog::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("catalog: cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str(), path.filename().string());
}

void SemanticsCatalog::add(OpSemantics entry) {
  validate(entry);
  auto key = std::make_pair(entry.operation, entry.collection_kind);
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

void SemanticsCatalog::add_alias(const std::string& kind, const std::string& target) { aliases_[kind] = target; }

void SemanticsCatalog::merge(const SemanticsCatalog& other) {
  for (const auto& [key, entry] : other.entries_) entries_.insert_or_assign(key, entry);
  for (const auto& [kind, target] : other.aliases_) aliases_[kind] = target;
  interfaces_.insert(other.interfaces_.begin(), other.interfaces_.end());
}

std::string SemanticsCatalog::resolve_kind(std::string_view kind) const {
  std::string k(kind);
  for (int hops = 0; hops < 16; ++hops) {
    auto it = aliases_.find(k);
    if (it == aliases_.end()) return k;
    k = it->second;
  }
  throw ConfigError("catalog: alias cycle through '" + std::string(kind) + "'");
}

bool SemanticsCatalog::has(std::string_view operation, std::string_view kind) const {
  return entries_.count({std::string(operation), resolve_kind(kind)}) > 0;
}

const OpSemantics& SemanticsCatalog::lookup(std::string_view operation, std::string_view kind) const {
  auto it = entries_.find({std::string(operation), resolve_kind(kind)});
  if (it == entries_.end()) throw UnknownOperation(std::string(operation), std::string(kind));
  return it->second;
}

std::set<std::string> SemanticsCatalog::kinds() const {
  std::set<std::string> out;
  for (const auto& [key, _] : entries_) out.insert(key.second);
  for (const auto& [alias, _] : aliases_) out.insert(alias);
  return out;
}

ParseOptions SemanticsCatalog::parse_options() const {
  ParseOptions options;
  options.collection_kinds = kinds();
  options.collection_interfaces = interfaces_;
  return options;
}

// ---------------------------------------------------------------------------
// Expansion

namespace {

using Binding = std::map<std::string, std::string>;

std::optional<Predicate> substitute(const Predicate& p, const Binding& binding) {
  auto map = [&](const std::string& s) {
    auto it = binding.find(s);
    return it == binding.end() ? s : it->second;
  };
  switch (p.kind()) {
    case PredicateKind::Eq: {
      auto a = map(p.first()), b = map(p.second());
      if (a == b) return std::nullopt;  // trivially true
      return Predicate::eq(a, b);
    }
    case PredicateKind::Contains:
      return Predicate::contains(map(p.first()), map(p.second()));
    case PredicateKind::Empty:
      return Predicate::empty(map(p.first()));
    case PredicateKind::Exc:
      return p;
  }
  return p;
}

Formula substitute(const Formula& f, const Binding& binding) {
  switch (f.kind()) {
    case Formula::Kind::Const:
      return f;
    case Formula::Kind::Var: {
      auto p = substitute(f.variable().predicate, binding);
      return p ? var(*p, f.variable().step) : constant(true);
    }
    case Formula::Kind::Not:
      return negate(substitute(f.children()[0], binding));
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> ops;
      for (const auto& c : f.children()) ops.push_back(substitute(c, binding));
      return f.kind() == Formula::Kind::And ? conjunction(std::move(ops)) : disjunction(std::move(ops));
    }
    case Formula::Kind::Implies:
      return implies(substitute(f.children()[0], binding), substitute(f.children()[1], binding));
    case Formula::Kind::Iff:
      return iff(substitute(f.children()[0], binding), substitute(f.children()[1], binding));
  }
  return f;
}

// Calls visit(binding) for every mapping of `formals` to symbols of their sort,
// extending `base`. No mappings exist when a needed sort has no symbols.
void for_each_mapping(const std::vector<std::pair<std::string, const std::vector<Symbol>*>>& formals,
                      Binding& binding, std::size_t k, const std::function<void(const Binding&)>& visit) {
  if (k == formals.size()) {
    visit(binding);
    return;
  }
  const auto& [formal, candidates] = formals[k];
  for (const auto& s : *candidates) {
    binding[formal] = s.name;
    for_each_mapping(formals, binding, k + 1, visit);
  }
  binding.erase(formal);
}

}  // namespace

Expansion expand(const OpSemantics& sem, const PlainOp& invocation, const Context& ctx,
                 const PredicateSet& universe) {
  if (invocation.arguments.size() != sem.arguments)
    throw ArityError(sem.collection_kind + "." + sem.operation + " expects " + std::to_string(sem.arguments) +
                     " argument(s), got " + std::to_string(invocation.arguments.size()));

  Binding matched;
  const Symbol* receiver = ctx.find(invocation.receiver);
  if (receiver == nullptr) throw UnknownSymbol(invocation.receiver);
  if (receiver->sort != Sort::Collection)
    throw ArityError("receiver '" + invocation.receiver + "' is not a collection");
  matched[sem.collection_formals.front()] = invocation.receiver;
  for (std::size_t k = 0; k < invocation.arguments.size(); ++k) {
    const Symbol* arg = ctx.find(invocation.arguments[k]);
    if (arg == nullptr) throw UnknownSymbol(invocation.arguments[k]);
    if (arg->sort != Sort::Value) throw ArityError("argument '" + arg->name + "' is not a value");
    matched[sem.value_formals[k]] = invocation.arguments[k];
  }
  for (const auto& c : sem.constants)
    if (!ctx.has(c)) throw UnknownSymbol(c);

  std::map<std::string, const std::vector<Symbol>*> unmatched;
  for (std::size_t k = 1; k < sem.collection_formals.size(); ++k)
    unmatched[sem.collection_formals[k]] = &ctx.collections();
  for (std::size_t k = sem.arguments; k < sem.value_formals.size(); ++k)
    unmatched[sem.value_formals[k]] = &ctx.values();

  auto occurring = [&](const std::set<std::string>& symbols) {
    std::vector<std::pair<std::string, const std::vector<Symbol>*>> out;
    for (const auto& [formal, candidates] : unmatched)
      if (symbols.count(formal)) out.emplace_back(formal, candidates);
    return out;
  };

  // Transition formula, instantiated over the unmatched formals it mentions.
  std::set<std::string> formula_symbols;
  for (const auto& p : predicates(sem.formula))
    for (auto& s : p.symbols()) formula_symbols.insert(std::move(s));
  std::vector<Formula> parts;
  Binding binding = matched;
  for_each_mapping(occurring(formula_symbols), binding, 0,
                   [&](const Binding& b) { parts.push_back(substitute(sem.formula, b)); });

  // Affected predicates, each template instantiated on its own formals.
  std::set<Predicate> touched;
  for (const auto& tmpl : sem.affected) {
    auto syms = tmpl.symbols();
    binding = matched;
    for_each_mapping(occurring({syms.begin(), syms.end()}), binding, 0, [&](const Binding& b) {
      auto p = substitute(tmpl, b);
      if (!p) return;
      if (!std::binary_search(universe.begin(), universe.end(), *p))
        throw Error("predicate " + p->to_string() + " affected by " + sem.operation + " is outside the universe");
      touched.insert(*p);
    });
  }

  Expansion out;
  for (const auto& p : universe) {
    if (touched.count(p)) {
      out.touched.push_back(p);
    } else {
      parts.push_back(iff(var(p, kPrimed), var(p, kCurrent)));
    }
  }
  out.formula = conjunction(std::move(parts));
  return out;
}

}  // namespace apifsm
