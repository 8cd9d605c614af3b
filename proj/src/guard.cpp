#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>

#include "apifsm/fsm.hpp"

namespace apifsm {

std::string guard_literal(const Predicate& p, bool value) {
  switch (p.kind()) {
    case PredicateKind::Eq:
      return p.first() + (value ? "=" : "≠") + p.second();
    case PredicateKind::Contains:
      return p.second() + (value ? "∈" : "∉") + p.first();
    case PredicateKind::Empty:
      return (value ? "" : "¬") + p.to_string();
    case PredicateKind::Exc:
      return value ? "exc" : "¬exc";
  }
  return p.to_string();
}

bool GuardExpression::evaluate(const Valuation& valuation) const {
  return std::any_of(cubes.begin(), cubes.end(), [&](const Valuation& cube) {
    return std::all_of(cube.begin(), cube.end(), [&](const auto& lit) {
      auto it = valuation.find(lit.first);
      return it != valuation.end() && it->second == lit.second;
    });
  });
}

namespace {

std::string cube_text(const Valuation& cube) {
  std::string out;
  for (bool polarity : {true, false}) {
    for (const auto& [p, v] : cube) {
      if (v != polarity) continue;
      if (!out.empty()) out += " ∧ ";
      out += guard_literal(p, v);
    }
  }
  return out;
}

// A cube over n variables: `mask` marks the fixed positions, `bits` their values.
struct Implicant {
  std::uint32_t bits = 0;
  std::uint32_t mask = 0;

  bool covers(std::uint32_t m) const { return (m & mask) == bits; }
  int literals() const { return __builtin_popcount(mask); }
  auto operator<=>(const Implicant&) const = default;
};

std::uint32_t encode(const std::vector<bool>& valuation) {
  std::uint32_t m = 0;
  const std::size_t n = valuation.size();
  for (std::size_t k = 0; k < n; ++k)
    if (valuation[k]) m |= std::uint32_t{1} << (n - 1 - k);
  return m;
}

std::vector<Implicant> prime_implicants(std::size_t n, const std::set<std::uint32_t>& ones) {
  const std::uint32_t full = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
  std::set<Implicant> level;
  for (auto m : ones) level.insert({m, full});
  std::set<Implicant> primes;
  while (!level.empty()) {
    std::set<Implicant> next;
    std::set<Implicant> merged;
    for (auto a = level.begin(); a != level.end(); ++a) {
      for (auto b = std::next(a); b != level.end(); ++b) {
        if (a->mask != b->mask) continue;
        std::uint32_t diff = a->bits ^ b->bits;
        if (__builtin_popcount(diff) != 1) continue;
        next.insert({a->bits & ~diff, a->mask & ~diff});
        merged.insert(*a);
        merged.insert(*b);
      }
    }
    for (const auto& i : level)
      if (!merged.count(i)) primes.insert(i);
    level = std::move(next);
  }
  return {primes.begin(), primes.end()};
}

std::vector<Implicant> cover(const std::vector<Implicant>& primes, const std::set<std::uint32_t>& required) {
  std::vector<Implicant> chosen;
  std::set<std::uint32_t> left = required;
  for (auto m : required) {
    const Implicant* only = nullptr;
    int count = 0;
    for (const auto& p : primes)
      if (p.covers(m)) {
        only = &p;
        ++count;
      }
    if (count == 1 && std::find(chosen.begin(), chosen.end(), *only) == chosen.end()) chosen.push_back(*only);
  }
  for (const auto& c : chosen)
    for (auto it = left.begin(); it != left.end();) it = c.covers(*it) ? left.erase(it) : std::next(it);
  while (!left.empty()) {
    const Implicant* best = nullptr;
    std::size_t best_gain = 0;
    for (const auto& p : primes) {
      std::size_t gain = 0;
      for (auto m : left) gain += p.covers(m);
      if (gain > best_gain || (gain == best_gain && gain > 0 && best && p.literals() < best->literals())) {
        best = &p;
        best_gain = gain;
      }
    }
    chosen.push_back(*best);
    for (auto it = left.begin(); it != left.end();) it = best->covers(*it) ? left.erase(it) : std::next(it);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

constexpr std::size_t kMaxMinimisedVariables = 14;

}  // namespace

std::string GuardExpression::to_string() const {
  if (cubes.empty()) return "false";
  if (is_true()) return "true";
  std::string out;
  for (const auto& cube : cubes) {
    if (!out.empty()) out += " ∨ ";
    bool wrap = cubes.size() > 1 && cube.size() > 1;
    out += wrap ? "(" + cube_text(cube) + ")" : cube_text(cube);
  }
  return out;
}

GuardExpression simplify_guard(const Guard& guard, bool use_care) {
  GuardExpression out;
  const std::size_t n = guard.variables.size();
  if (guard.is_false()) return out;
  if (n > kMaxMinimisedVariables) {
    for (const auto& c : guard.conjuncts) {
      Valuation cube;
      for (std::size_t k = 0; k < n; ++k) cube[guard.variables[k]] = c[k];
      out.cubes.push_back(std::move(cube));
    }
    return out;
  }

  std::set<std::uint32_t> ones;
  for (const auto& c : guard.conjuncts) ones.insert(encode(c));
  std::set<std::uint32_t> dont_care;
  if (use_care && guard.care) {
    std::set<std::uint32_t> care;
    for (const auto& c : *guard.care) care.insert(encode(c));
    for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m)
      if (!care.count(m) && !ones.count(m)) dont_care.insert(m);
  }
  std::set<std::uint32_t> all = ones;
  all.insert(dont_care.begin(), dont_care.end());
  auto primes = prime_implicants(n, all);
  auto chosen = cover(primes, ones);

  for (const auto& imp : chosen) {
    Valuation cube;
    for (std::size_t k = 0; k < n; ++k) {
      std::uint32_t bit = std::uint32_t{1} << (n - 1 - k);
      if (imp.mask & bit) cube[guard.variables[k]] = (imp.bits & bit) != 0;
    }
    out.cubes.push_back(std::move(cube));
  }
  std::sort(out.cubes.begin(), out.cubes.end());

  for (std::uint32_t m = 0; m < (std::uint32_t{1} << n); ++m) {
    if (dont_care.count(m)) continue;
    Valuation point;
    for (std::size_t k = 0; k < n; ++k) point[guard.variables[k]] = (m >> (n - 1 - k)) & 1;
    if (out.evaluate(point) != (ones.count(m) > 0))
      throw std::logic_error("guard minimisation changed the guard's truth table");
  }
  return out;
}

}  // namespace apifsm
