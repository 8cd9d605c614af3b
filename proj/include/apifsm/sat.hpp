#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apifsm/predicate.hpp"

namespace apifsm {

/// Clauses over DIMACS literals: variable k is k > 0, its negation -k.
using Clause = std::vector<int>;

class CnfInstance {
 public:
  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::vector<Clause>& clauses() const { return clauses_; }

  /// The DIMACS variable of an original variable, created on first use.
  int variable(const IndexedVariable& v);
  /// Existing mapping or 0.
  int find(const IndexedVariable& v) const;
  /// A fresh auxiliary (definition) variable.
  int fresh();
  /// Grows the table so variables 1..n exist (auxiliary ones are unnamed).
  void reserve_vars(int n);

  bool is_original(int var) const { return names_.at(var - 1).has_value(); }
  const std::optional<IndexedVariable>& name(int var) const { return names_.at(var - 1); }
  const std::map<IndexedVariable, int>& originals() const { return index_; }

  void add_clause(Clause clause) { clauses_.push_back(std::move(clause)); }

 private:
  std::vector<std::optional<IndexedVariable>> names_;
  std::map<IndexedVariable, int> index_;
  std::vector<Clause> clauses_;
};

/// Definitional (Tseitin) transformation: every connective node gets a fresh
/// variable constrained by a full biconditional, so models over the original
/// variables are exactly the models of the formula.
CnfInstance to_cnf(const Formula& f);
/// Asserts f in an existing instance, sharing its variable table.
void add_formula(CnfInstance& inst, const Formula& f);

/// DIMACS text; original variables are listed in "c var" comment lines.
std::string write_dimacs(const CnfInstance& inst, const std::vector<int>& unit_assumptions = {});
/// Parses DIMACS; "c var" comments restore original-variable names.
CnfInstance read_dimacs(std::string_view text);

/// Total assignment, indexed by DIMACS variable (slot 0 unused).
struct Model {
  std::vector<bool> values;

  bool value(int var) const { return values.at(var); }
  bool satisfies(int literal) const { return literal > 0 ? value(literal) : !value(-literal); }
  std::vector<bool> project(const std::vector<int>& vars) const;
};

struct SolveResult {
  bool satisfiable = false;
  Model model;  // only when satisfiable
};

/// Incremental interface: clauses may be added between solve calls.
class Solver {
 public:
  virtual ~Solver() = default;
  virtual void add_clause(const Clause& clause) = 0;
  virtual SolveResult solve(const std::vector<int>& assumptions) = 0;
  void load(const CnfInstance& inst);

 protected:
  virtual void reserve_vars(int n) = 0;
};

struct CdclOptions {
  bool phase_saving = false;
  int restart_base = 100;  // conflicts per Luby unit
  double var_decay = 0.95;
};

/// Conflict-driven clause learning with two watched literals, first-UIP
/// learning, activity-ordered decisions (ties to the lowest variable) and Luby
/// restarts. Fully deterministic.
class CdclSolver final : public Solver {
 public:
  explicit CdclSolver(CdclOptions options = {});
  ~CdclSolver() override;

  void add_clause(const Clause& clause) override;
  SolveResult solve(const std::vector<int>& assumptions) override;

  std::uint64_t conflicts() const;
  std::uint64_t decisions() const;

 protected:
  void reserve_vars(int n) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Runs `command <file.cnf>` per solve call and reads "s SATISFIABLE" /
/// "s UNSATISFIABLE" and "v" lines from its standard output. Assumptions are
/// written as unit clauses.
class ExternalSolver final : public Solver {
 public:
  explicit ExternalSolver(std::string command);

  void add_clause(const Clause& clause) override;
  SolveResult solve(const std::vector<int>& assumptions) override;

 protected:
  void reserve_vars(int n) override;

 private:
  std::string command_;
  CnfInstance cnf_;
};

/// Empty command selects the embedded solver.
struct SolverConfig {
  std::string command;
};

std::unique_ptr<Solver> make_solver(const SolverConfig& config);

/// One-shot decision of an instance under assumptions.
SolveResult solve(const CnfInstance& inst, const std::vector<int>& assumptions = {});

enum class BlockingMode {
  Projection,    // block each model's projection
  FullTrace,  // block each model on every original variable
};

struct Enumeration {
  /// Distinct projections in discovery order.
  std::vector<std::vector<bool>> projections;
  std::size_t solver_calls = 0;
};

/// All distinct projections of models onto `projection`. In full-trace
/// mode the blocking clauses range over `trace` instead.
Enumeration enumerate_models(Solver& solver, const std::vector<int>& assumptions, const std::vector<int>& projection,
                             BlockingMode mode = BlockingMode::Projection, const std::vector<int>& trace = {});

}  // namespace apifsm
