#include <algorithm>

#include "apifsm/encoder.hpp"
#include "apifsm/error.hpp"

namespace apifsm {

namespace {

void collect_symbols(const Condition& c, std::set<std::string>& out) {
  if (!c.left.empty()) out.insert(c.left);
  if (!c.right.empty()) out.insert(c.right);
  for (const auto& o : c.operands) collect_symbols(o, out);
}

void collect_symbols(const Block& block, std::set<std::string>& out) {
  for (const auto& s : block) {
    if (const auto* op = std::get_if<PlainOp>(&s.node)) {
      out.insert(op->receiver);
      out.insert(op->arguments.begin(), op->arguments.end());
    } else if (const auto* b = std::get_if<IfElse>(&s.node)) {
      collect_symbols(b->condition, out);
      collect_symbols(b->then_branch, out);
      collect_symbols(b->else_branch, out);
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      collect_symbols(w->condition, out);
      collect_symbols(w->body, out);
    }
  }
}

void collect_ops(const Block& block, std::vector<const PlainOp*>& out) {
  for (const auto& s : block) {
    if (const auto* op = std::get_if<PlainOp>(&s.node)) {
      out.push_back(op);
    } else if (const auto* b = std::get_if<IfElse>(&s.node)) {
      collect_ops(b->then_branch, out);
      collect_ops(b->else_branch, out);
    } else if (const auto* w = std::get_if<While>(&s.node)) {
      collect_ops(w->body, out);
    }
  }
}

std::vector<const MethodModel*> all_bodies(const ApiUnitModel& unit) {
  std::vector<const MethodModel*> out;
  if (unit.constructor) out.push_back(&*unit.constructor);
  for (const auto& m : unit.methods) out.push_back(&m);
  return out;
}

std::set<std::string> referenced(const ApiUnitModel& unit) {
  std::set<std::string> out;
  for (const auto* m : all_bodies(unit)) collect_symbols(m->body, out);
  return out;
}

void check_selection(const ApiUnitModel& unit, const ContextSelection& selection) {
  if (selection.automatic) return;
  for (const auto& name : selection.symbols) {
    if (is_literal(name) || unit.field(name)) continue;
    bool parameter = false;
    for (const auto* m : all_bodies(unit))
      for (const auto& p : m->parameters) parameter = parameter || p.name == name;
    if (!parameter) throw ConfigError("context: unknown symbol '" + name + "'");
  }
}

}  // namespace

std::map<std::string, std::string> collection_kinds(const ApiUnitModel& unit) {
  std::map<std::string, std::string> out;
  for (const auto& f : unit.fields)
    if (f.sort == Sort::Collection) out[f.name] = f.kind;
  return out;
}

std::vector<const OpSemantics*> used_semantics(const ApiUnitModel& unit, const SemanticsCatalog& catalog) {
  auto kinds = collection_kinds(unit);
  std::vector<const OpSemantics*> out;
  for (const auto* m : all_bodies(unit)) {
    std::vector<const PlainOp*> ops;
    collect_ops(m->body, ops);
    for (const auto* op : ops) {
      auto it = kinds.find(op->receiver);
      if (it == kinds.end())
        throw UnsupportedError("operation on '" + op->receiver + "' whose implementation kind is unknown", op->line, 1);
      const OpSemantics* sem = &catalog.lookup(op->operation, it->second);
      if (std::find(out.begin(), out.end(), sem) == out.end()) out.push_back(sem);
    }
  }
  return out;
}

bool unit_uses_exc(const ApiUnitModel& unit, const SemanticsCatalog& catalog) {
  auto used = used_semantics(unit, catalog);
  return std::any_of(used.begin(), used.end(), [](const OpSemantics* s) { return s->mentions_exc(); });
}

Context common_context(const ApiUnitModel& unit, const SemanticsCatalog& catalog, const ContextSelection& selection) {
  check_selection(unit, selection);
  std::set<std::string> keep = referenced(unit);
  keep.insert(selection.symbols.begin(), selection.symbols.end());
  auto wanted = [&](const std::string& name) { return selection.automatic || keep.count(name) > 0; };

  Context ctx;
  for (const auto& f : unit.fields)
    if (wanted(f.name)) ctx.add(Symbol{f.name, f.sort, Role::State});
  for (const auto& literal : unit.literals())
    if (wanted(literal)) ctx.add(Symbol{literal, Sort::Value, Role::State});
  for (const auto* sem : used_semantics(unit, catalog))
    for (const auto& c : sem->constants) ctx.add(Symbol{c, Sort::Value, Role::State});
  if (!selection.automatic)
    for (const auto& name : selection.symbols)
      if (is_literal(name)) ctx.add(Symbol{name, Sort::Value, Role::State});
  return ctx;
}

Context build_context(const ApiUnitModel& unit, const MethodModel& method, const SemanticsCatalog& catalog,
                      const ContextSelection& selection) {
  Context ctx = common_context(unit, catalog, selection);
  std::set<std::string> keep;
  collect_symbols(method.body, keep);
  keep.insert(selection.symbols.begin(), selection.symbols.end());
  for (const auto& p : method.parameters)
    if (selection.automatic || keep.count(p.name)) ctx.add(Symbol{p.name, p.sort, Role::Indeterminacy});
  return ctx;
}

}  // namespace apifsm
