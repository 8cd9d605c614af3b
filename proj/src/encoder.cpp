#include "apifsm/encoder.hpp"

#include "apifsm/error.hpp"

namespace apifsm {

EncodingEnv::EncodingEnv(const Context& c, PredicateSet p, const SemanticsCatalog& cat,
                         std::map<std::string, std::string> k)
    : ctx(c), predicates(std::move(p)), catalog(cat), kinds(std::move(k)), axioms(instantiate_axioms(c, predicates)) {}

namespace {

// ⋀_p p^a = p^b
Formula copy_all(const PredicateSet& predicates, int a, int b) {
  if (a == b) return constant(true);
  std::vector<Formula> parts;
  parts.reserve(predicates.size());
  for (const auto& p : predicates) parts.push_back(iff(var(p, a), var(p, b)));
  return conjunction(std::move(parts));
}

Formula encode_op(const PlainOp& op, int i, int j, const EncodingEnv& env) {
  auto kind = env.kinds.find(op.receiver);
  if (kind == env.kinds.end())
    throw UnsupportedError("operation on '" + op.receiver + "' whose implementation kind is unknown", op.line, 1);
  const OpSemantics& sem = env.catalog.lookup(op.operation, kind->second);
  Expansion e = expand(sem, op, env.ctx, env.predicates);
  return conjunction({index_formula(e.formula, i, j), index_formula(env.axioms, j)});
}

}  // namespace

Formula encode_statement(const Statement& s, int i, int j, const EncodingEnv& env) {
  if (const auto* op = std::get_if<PlainOp>(&s.node)) return encode_op(*op, i, j, env);
  if (const auto* w = std::get_if<While>(&s.node)) {
    Formula cnd = lower_condition(w->condition, env.ctx);
    return conjunction({negate(index_formula(cnd, j)), index_formula(env.axioms, j)});
  }
  const auto& b = std::get<IfElse>(s.node);
  int last_then = last_index(b.then_branch, i);
  int last_else = last_index(b.else_branch, i);
  Formula cnd = index_formula(lower_condition(b.condition, env.ctx), i);
  return conjunction({
      encode_block(b.then_branch, i, last_then, env),
      encode_block(b.else_branch, i, last_else, env),
      implies(cnd, copy_all(env.predicates, j, last_then)),
      implies(negate(cnd), copy_all(env.predicates, j, last_else)),
  });
}

Formula encode_block(const Block& block, int i, int j, const EncodingEnv& env) {
  if (block.empty()) {
    if (i != j) throw std::invalid_argument("empty block encoded across distinct steps");
    return constant(true);
  }
  std::vector<Formula> parts;
  int at = i;
  for (const auto& s : block) {
    int next = s.index();
    parts.push_back(encode_statement(s, at, next, env));
    at = next;
  }
  if (at != j) throw std::invalid_argument("block ends at step " + std::to_string(at) + ", not " + std::to_string(j));
  return conjunction(std::move(parts));
}

MethodEncoding encode_method(const MethodModel& method, const EncodingEnv& env) {
  MethodEncoding out;
  out.last = last_index(method.body, 0);
  out.formula = conjunction({index_formula(env.axioms, 0), encode_block(method.body, 0, out.last, env)});
  return out;
}

}  // namespace apifsm
