#include "apifsm/brute_force.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace apifsm {

namespace {

class Search {
 public:
  Search(const Formula& f, const std::vector<IndexedVariable>& projection, std::size_t limit) : f_(f) {
    auto vars = variables(f);
    vars.insert(projection.begin(), projection.end());
    order_.assign(vars.begin(), vars.end());
    std::stable_sort(order_.begin(), order_.end(),
                     [](const IndexedVariable& a, const IndexedVariable& b) { return a.step < b.step; });
    for (std::size_t k = 0; k < order_.size(); ++k) index_[order_[k]] = k;
    if (order_.size() > limit)
      throw std::length_error("oracle: " + std::to_string(order_.size()) + " variables exceed the limit of " +
                              std::to_string(limit));
    for (const auto& v : projection) slots_.push_back(index_.at(v));
    values_.assign(order_.size(), std::nullopt);
  }

  std::set<std::vector<bool>> run() {
    descend(0);
    return found_;
  }

 private:
  std::optional<bool> lookup(const IndexedVariable& v) const {
    return values_[index_.at(v)];
  }

  void descend(std::size_t depth) {
    auto verdict = evaluate_partial(f_, [this](const IndexedVariable& v) { return lookup(v); });
    if (verdict == false) return;
    if (verdict == true || depth == order_.size()) {
      if (verdict == true) record(0);
      return;
    }
    for (bool b : {false, true}) {
      values_[depth] = b;
      descend(depth + 1);
    }
    values_[depth] = std::nullopt;
  }

  // Every completion of the unassigned projection slots.
  void record(std::size_t k) {
    if (k == slots_.size()) {
      std::vector<bool> key;
      for (auto s : slots_) key.push_back(*values_[s]);
      found_.insert(std::move(key));
      return;
    }
    auto& slot = values_[slots_[k]];
    if (slot) {
      record(k + 1);
      return;
    }
    for (bool b : {false, true}) {
      slot = b;
      record(k + 1);
    }
    slot = std::nullopt;
  }

  const Formula& f_;
  std::vector<IndexedVariable> order_;
  std::map<IndexedVariable, std::size_t> index_;
  std::vector<std::size_t> slots_;
  std::vector<std::optional<bool>> values_;
  std::set<std::vector<bool>> found_;
};

std::vector<IndexedVariable> at_entry(const PredicateSet& predicates) {
  std::vector<IndexedVariable> out;
  for (const auto& p : predicates) out.push_back({p, 0});
  return out;
}

Formula pins_at_entry(const AbstractState& state) {
  std::vector<Formula> parts;
  for (const auto& [p, v] : state.valuation) parts.push_back(v ? var(p, 0) : negate(var(p, 0)));
  return conjunction(std::move(parts));
}

}  // namespace

std::set<std::vector<bool>> brute_force_projections(const Formula& f, const std::vector<IndexedVariable>& projection,
                                                    std::size_t limit) {
  return Search(f, projection, limit).run();
}

Guard brute_force_transition(const PreparedMethod& pm, const AbstractState& from, const AbstractState& to,
                             std::size_t limit) {
  Guard g;
  g.variables = pm.nd_predicates;
  auto projection = at_entry(pm.nd_predicates);
  auto models = brute_force_projections(transition_formula(pm, from, to), projection, limit);
  g.conjuncts.assign(models.begin(), models.end());
  auto care = brute_force_projections(conjunction({pins_at_entry(from), pm.entry_axioms}), projection, limit);
  g.care.emplace(care.begin(), care.end());
  g.normalize();
  return g;
}

std::size_t oracle_size(const PreparedMethod& pm) {
  return pm.predicates.size() * static_cast<std::size_t>(pm.encoding.last + 1);
}

Fsm brute_force_fsm(const ApiUnitModel& unit, const ExtractionOptions& options, std::size_t limit) {
  TransitionFunction compute = [limit](const PreparedMethod& pm, const AbstractState& a, const AbstractState& b,
                                       TransitionStats*) { return brute_force_transition(pm, a, b, limit); };
  return extract_fsm_with(unit, options, compute);
}

}  // namespace apifsm
