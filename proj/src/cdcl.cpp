#include <algorithm>
#include <cstdlib>

#include "apifsm/sat.hpp"

namespace apifsm {

namespace {

// Internal literals: 2*v for the positive and 2*v+1 for the negative phase of
// 0-based variable v.
using Lit = int;
constexpr Lit kNoLit = -1;
constexpr int kNoReason = -1;

inline Lit to_lit(int dimacs) { return dimacs > 0 ? 2 * (dimacs - 1) : 2 * (-dimacs - 1) + 1; }
inline int var_of(Lit l) { return l >> 1; }
inline bool sign_of(Lit l) { return l & 1; }
inline Lit neg(Lit l) { return l ^ 1; }

enum : std::int8_t { kFalse = 0, kTrue = 1, kUndef = 2 };

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

struct CdclSolver::Impl {
  struct Watcher {
    int clause;
    Lit blocker;
  };

  CdclOptions options;
  bool ok = true;
  std::vector<std::vector<Lit>> clauses;
  std::vector<std::vector<Watcher>> watches;  // by literal
  std::vector<std::int8_t> assigns;
  std::vector<int> level;
  std::vector<int> reason;
  std::vector<bool> polarity;
  std::vector<double> activity;
  std::vector<char> seen;
  std::vector<Lit> trail;
  std::vector<int> trail_lim;
  std::size_t qhead = 0;
  double var_inc = 1.0;
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;

  std::vector<int> heap;
  std::vector<int> heap_pos;

  int num_vars() const { return static_cast<int>(assigns.size()); }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  std::int8_t value(Lit l) const {
    std::int8_t a = assigns[var_of(l)];
    if (a == kUndef) return kUndef;
    return static_cast<std::int8_t>(a ^ static_cast<std::int8_t>(sign_of(l)));
  }

  void reserve(int n) {
    while (num_vars() < n) {
      int v = num_vars();
      assigns.push_back(kUndef);
      level.push_back(0);
      reason.push_back(kNoReason);
      polarity.push_back(false);
      activity.push_back(0.0);
      seen.push_back(0);
      watches.emplace_back();
      watches.emplace_back();
      heap_pos.push_back(-1);
      heap_insert(v);
    }
  }

  // --- decision heap (max activity, ties to the lowest variable) ---
  bool before(int a, int b) const { return activity[a] > activity[b] || (activity[a] == activity[b] && a < b); }

  void heap_up(std::size_t i) {
    int v = heap[i];
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!before(v, heap[parent])) break;
      heap[i] = heap[parent];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = parent;
    }
    heap[i] = v;
    heap_pos[v] = static_cast<int>(i);
  }

  void heap_down(std::size_t i) {
    int v = heap[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap.size()) break;
      if (child + 1 < heap.size() && before(heap[child + 1], heap[child])) ++child;
      if (!before(heap[child], v)) break;
      heap[i] = heap[child];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = child;
    }
    heap[i] = v;
    heap_pos[v] = static_cast<int>(i);
  }

  void heap_insert(int v) {
    if (heap_pos[v] >= 0) return;
    heap.push_back(v);
    heap_up(heap.size() - 1);
  }

  int heap_pop() {
    int top = heap.front();
    heap_pos[top] = -1;
    heap.front() = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      heap_pos[heap.front()] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump(int v) {
    activity[v] += var_inc;
    if (activity[v] > 1e100) {
      for (auto& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    if (heap_pos[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos[v]));
  }

  // --- assignment ---
  void enqueue(Lit l, int from) {
    int v = var_of(l);
    assigns[v] = sign_of(l) ? kFalse : kTrue;
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(l);
  }

  void cancel_until(int target) {
    if (decision_level() <= target) return;
    for (std::size_t i = trail.size(); i-- > static_cast<std::size_t>(trail_lim[target]);) {
      int v = var_of(trail[i]);
      if (options.phase_saving) polarity[v] = !sign_of(trail[i]);
      assigns[v] = kUndef;
      reason[v] = kNoReason;
      heap_insert(v);
    }
    trail.resize(trail_lim[target]);
    trail_lim.resize(target);
    qhead = trail.size();
  }

  void attach(int ci) {
    const auto& c = clauses[ci];
    watches[c[0]].push_back({ci, c[1]});
    watches[c[1]].push_back({ci, c[0]});
  }

  // Returns the index of a conflicting clause or kNoReason.
  int propagate() {
    int conflict = kNoReason;
    while (qhead < trail.size()) {
      Lit p = trail[qhead++];
      Lit false_lit = neg(p);
      auto& ws = watches[false_lit];
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i++];
        if (value(w.blocker) == kTrue) {
          ws[j++] = w;
          continue;
        }
        auto& c = clauses[w.clause];
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        Lit first = c[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.clause, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches[c[1]].push_back({w.clause, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.clause, first};
        if (value(first) == kFalse) {
          conflict = w.clause;
          qhead = trail.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.clause);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void analyze(int conflict, std::vector<Lit>& learnt, int& backtrack) {
    learnt.assign(1, kNoLit);
    int pending = 0;
    Lit p = kNoLit;
    std::size_t index = trail.size();
    do {
      const auto& c = clauses[conflict];
      for (std::size_t k = (p == kNoLit ? 0 : 1); k < c.size(); ++k) {
        int v = var_of(c[k]);
        if (seen[v] || level[v] == 0) continue;
        bump(v);
        seen[v] = 1;
        if (level[v] >= decision_level()) ++pending;
        else learnt.push_back(c[k]);
      }
      while (!seen[var_of(trail[--index])]) {
      }
      p = trail[index];
      conflict = reason[var_of(p)];
      seen[var_of(p)] = 0;
      --pending;
    } while (pending > 0);
    learnt[0] = neg(p);

    backtrack = 0;
    if (learnt.size() > 1) {
      std::size_t best = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k)
        if (level[var_of(learnt[k])] > level[var_of(learnt[best])]) best = k;
      std::swap(learnt[1], learnt[best]);
      backtrack = level[var_of(learnt[1])];
    }
    for (std::size_t k = 1; k < learnt.size(); ++k) seen[var_of(learnt[k])] = 0;
  }

  void add_clause(const Clause& dimacs) {
    if (!ok) return;
    cancel_until(0);
    std::vector<Lit> c;
    for (int d : dimacs) {
      reserve(std::abs(d));
      c.push_back(to_lit(d));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::vector<Lit> kept;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (k + 1 < c.size() && c[k + 1] == neg(c[k])) return;  // tautology
      if (value(c[k]) == kTrue) return;
      if (value(c[k]) == kFalse) continue;
      kept.push_back(c[k]);
    }
    if (kept.empty()) {
      ok = false;
    } else if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      if (propagate() != kNoReason) ok = false;
    } else {
      clauses.push_back(std::move(kept));
      attach(static_cast<int>(clauses.size()) - 1);
    }
  }

  Lit pick_branch() {
    while (!heap.empty()) {
      int v = heap_pop();
      if (assigns[v] == kUndef) return polarity[v] ? 2 * v : 2 * v + 1;
    }
    return kNoLit;
  }

  SolveResult solve(const std::vector<int>& assumptions) {
    SolveResult result;
    if (!ok) return result;
    std::vector<Lit> assumed;
    for (int d : assumptions) {
      reserve(std::abs(d));
      assumed.push_back(to_lit(d));
    }
    cancel_until(0);

    int restarts = 0;
    std::uint64_t budget = static_cast<std::uint64_t>(luby(2, restarts) * options.restart_base);
    std::uint64_t since_restart = 0;
    std::vector<Lit> learnt;
    for (;;) {
      int conflict = propagate();
      if (conflict != kNoReason) {
        ++conflicts;
        ++since_restart;
        if (decision_level() == 0) {
          ok = false;
          return result;
        }
        int backtrack = 0;
        analyze(conflict, learnt, backtrack);
        cancel_until(backtrack);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          clauses.push_back(learnt);
          int ci = static_cast<int>(clauses.size()) - 1;
          attach(ci);
          enqueue(learnt[0], ci);
        }
        var_inc /= options.var_decay;
        continue;
      }
      if (since_restart >= budget) {
        cancel_until(0);
        since_restart = 0;
        budget = static_cast<std::uint64_t>(luby(2, ++restarts) * options.restart_base);
        continue;
      }
      Lit next = kNoLit;
      while (decision_level() < static_cast<int>(assumed.size())) {
        Lit a = assumed[decision_level()];
        if (value(a) == kTrue) {
          trail_lim.push_back(static_cast<int>(trail.size()));
        } else if (value(a) == kFalse) {
          cancel_until(0);
          return result;
        } else {
          next = a;
          break;
        }
      }
      if (next == kNoLit) {
        next = pick_branch();
        if (next == kNoLit) {
          result.satisfiable = true;
          result.model.values.assign(num_vars() + 1, false);
          for (int v = 0; v < num_vars(); ++v) result.model.values[v + 1] = assigns[v] == kTrue;
          cancel_until(0);
          return result;
        }
        ++decisions;
      }
      trail_lim.push_back(static_cast<int>(trail.size()));
      enqueue(next, kNoReason);
    }
  }
};

CdclSolver::CdclSolver(CdclOptions options) : impl_(std::make_unique<Impl>()) { impl_->options = options; }
CdclSolver::~CdclSolver() = default;

void CdclSolver::add_clause(const Clause& clause) { impl_->add_clause(clause); }
SolveResult CdclSolver::solve(const std::vector<int>& assumptions) { return impl_->solve(assumptions); }
void CdclSolver::reserve_vars(int n) { impl_->reserve(n); }
std::uint64_t CdclSolver::conflicts() const { return impl_->conflicts; }
std::uint64_t CdclSolver::decisions() const { return impl_->decisions; }

void Solver::load(const CnfInstance& inst) {
  reserve_vars(inst.num_vars());
  for (const auto& c : inst.clauses()) add_clause(c);
}

}  // namespace apifsm
