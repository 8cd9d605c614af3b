#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <unistd.h>

#include "apifsm/error.hpp"
#include "apifsm/sat.hpp"

namespace apifsm {

ExternalSolver::ExternalSolver(std::string command) : command_(std::move(command)) {
  if (command_.empty()) throw ConfigError("solver.command: must not be empty");
}

void ExternalSolver::add_clause(const Clause& clause) {
  for (int lit : clause) cnf_.reserve_vars(std::abs(lit));
  cnf_.add_clause(clause);
}

void ExternalSolver::reserve_vars(int n) { cnf_.reserve_vars(n); }

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

std::filesystem::path scratch_file() {
  static std::atomic<unsigned> counter{0};
  auto name = "apifsm-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".cnf";
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

SolveResult ExternalSolver::solve(const std::vector<int>& assumptions) {
  for (int lit : assumptions) cnf_.reserve_vars(std::abs(lit));
  auto path = scratch_file();
  {
    std::ofstream out(path);
    if (!out) throw SolverError("cannot write " + path.string());
    out << write_dimacs(cnf_, assumptions);
  }
  std::string command = command_ + " " + shell_quote(path.string());
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) {
    std::filesystem::remove(path);
    throw SolverError("cannot run solver command '" + command_ + "'");
  }
  std::string output;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, n);
  ::pclose(pipe);
  std::filesystem::remove(path);

  std::istringstream in(output);
  std::string line;
  int status = -1;
  SolveResult result;
  result.model.values.assign(cnf_.num_vars() + 1, false);
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos) status = 0;
      else if (line.find("SATISFIABLE") != std::string::npos) status = 1;
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      long lit = 0;
      while (vs >> lit) {
        if (lit == 0) break;
        if (std::labs(lit) <= cnf_.num_vars()) result.model.values[std::labs(lit)] = lit > 0;
      }
    }
  }
  if (status < 0) throw SolverError("solver command '" + command_ + "' printed no 's' status line");
  if (status == 0) return SolveResult{};
  for (const auto& c : cnf_.clauses()) {
    bool sat = false;
    for (int lit : c) sat = sat || result.model.satisfies(lit);
    if (!sat) throw SolverError("solver command '" + command_ + "' returned a model violating a clause");
  }
  for (int lit : assumptions)
    if (!result.model.satisfies(lit)) throw SolverError("solver command '" + command_ + "' ignored an assumption");
  result.satisfiable = true;
  return result;
}

std::unique_ptr<Solver> make_solver(const SolverConfig& config) {
  if (config.command.empty()) return std::make_unique<CdclSolver>();
  return std::make_unique<ExternalSolver>(config.command);
}

SolveResult solve(const CnfInstance& inst, const std::vector<int>& assumptions) {
  CdclSolver solver;
  solver.load(inst);
  return solver.solve(assumptions);
}

Enumeration enumerate_models(Solver& solver, const std::vector<int>& assumptions, const std::vector<int>& projection,
                             BlockingMode mode, const std::vector<int>& trace) {
  Enumeration out;
  std::set<std::vector<bool>> found;
  const std::vector<int>& blocked = mode == BlockingMode::Projection ? projection : trace;
  for (;;) {
    ++out.solver_calls;
    SolveResult r = solver.solve(assumptions);
    if (!r.satisfiable) break;
    auto key = r.model.project(projection);
    if (found.insert(key).second) out.projections.push_back(key);
    if (blocked.empty()) break;
    Clause block;
    block.reserve(blocked.size());
    for (int v : blocked) block.push_back(r.model.value(v) ? -v : v);
    solver.add_clause(block);
  }
  return out;
}

}  // namespace apifsm
