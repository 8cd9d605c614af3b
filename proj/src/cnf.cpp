#include <cstdlib>
#include <sstream>
#include <unordered_map>

#include "apifsm/error.hpp"
#include "apifsm/sat.hpp"

namespace apifsm {

int CnfInstance::variable(const IndexedVariable& v) {
  auto it = index_.find(v);
  if (it != index_.end()) return it->second;
  names_.emplace_back(v);
  int id = num_vars();
  index_.emplace(v, id);
  return id;
}

int CnfInstance::find(const IndexedVariable& v) const {
  auto it = index_.find(v);
  return it == index_.end() ? 0 : it->second;
}

int CnfInstance::fresh() {
  names_.emplace_back(std::nullopt);
  return num_vars();
}

void CnfInstance::reserve_vars(int n) {
  while (num_vars() < n) names_.emplace_back(std::nullopt);
}

namespace {

class Tseitin {
 public:
  explicit Tseitin(CnfInstance& inst) : inst_(inst) {}

  void assert_root(const Formula& f) {
    if (f.kind() == Formula::Kind::And) {
      for (const auto& c : f.children()) assert_root(c);
      return;
    }
    if (f.kind() == Formula::Kind::Const) {
      if (!f.value()) inst_.add_clause({});
      return;
    }
    inst_.add_clause({literal(f)});
  }

 private:
  int literal(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Var:
        return inst_.variable(f.variable());
      case Formula::Kind::Not:
        return -literal(f.children()[0]);
      case Formula::Kind::Const:
        return f.value() ? truth() : -truth();
      default:
        break;
    }
    auto cached = defined_.find(f.identity());
    if (cached != defined_.end()) return cached->second;

    std::vector<int> ops;
    for (const auto& c : f.children()) ops.push_back(literal(c));
    int d = inst_.fresh();
    switch (f.kind()) {
      case Formula::Kind::And: {
        Clause back{d};
        for (int x : ops) {
          inst_.add_clause({-d, x});
          back.push_back(-x);
        }
        inst_.add_clause(std::move(back));
        break;
      }
      case Formula::Kind::Or: {
        Clause fwd{-d};
        for (int x : ops) {
          inst_.add_clause({d, -x});
          fwd.push_back(x);
        }
        inst_.add_clause(std::move(fwd));
        break;
      }
      case Formula::Kind::Implies: {
        int a = ops[0], b = ops[1];
        inst_.add_clause({-d, -a, b});
        inst_.add_clause({d, a});
        inst_.add_clause({d, -b});
        break;
      }
      case Formula::Kind::Iff: {
        int a = ops[0], b = ops[1];
        inst_.add_clause({-d, -a, b});
        inst_.add_clause({-d, a, -b});
        inst_.add_clause({d, a, b});
        inst_.add_clause({d, -a, -b});
        break;
      }
      default:
        break;
    }
    keep_.push_back(f);
    defined_.emplace(f.identity(), d);
    return d;
  }

  int truth() {
    if (truth_ == 0) {
      truth_ = inst_.fresh();
      inst_.add_clause({truth_});
    }
    return truth_;
  }

  CnfInstance& inst_;
  std::unordered_map<const void*, int> defined_;
  std::vector<Formula> keep_;
  int truth_ = 0;
};

}  // namespace

void add_formula(CnfInstance& inst, const Formula& f) { Tseitin(inst).assert_root(f); }

CnfInstance to_cnf(const Formula& f) {
  CnfInstance inst;
  add_formula(inst, f);
  return inst;
}

std::string write_dimacs(const CnfInstance& inst, const std::vector<int>& units) {
  std::ostringstream out;
  for (int v = 1; v <= inst.num_vars(); ++v)
    if (inst.is_original(v)) out << "c var " << v << ' ' << inst.name(v)->to_string() << '\n';
  out << "p cnf " << inst.num_vars() << ' ' << inst.clauses().size() + units.size() << '\n';
  for (const auto& c : inst.clauses()) {
    for (int lit : c) out << lit << ' ';
    out << "0\n";
  }
  for (int lit : units) out << lit << " 0\n";
  return out.str();
}

namespace {

IndexedVariable parse_indexed(const std::string& text) {
  auto at = text.rfind('@');
  if (at == std::string::npos) throw std::invalid_argument("expected p@i");
  return IndexedVariable{Predicate::parse(text.substr(0, at)), std::stoi(text.substr(at + 1))};
}

}  // namespace

CnfInstance read_dimacs(std::string_view text) {
  CnfInstance inst;
  std::map<int, IndexedVariable> named;
  std::istringstream in{std::string(text)};
  std::string line;
  int declared_vars = -1;
  Clause current;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "c") {
      std::string tag, name;
      int v = 0;
      if (ls >> tag && tag == "var" && ls >> v >> name) {
        try {
          named.emplace(v, parse_indexed(name));
        } catch (const std::exception&) {
          throw SolverError("dimacs line " + std::to_string(line_no) + ": bad variable name '" + name + "'");
        }
      }
      continue;
    }
    if (head == "p") {
      std::string fmt;
      std::size_t nclauses = 0;
      if (!(ls >> fmt >> declared_vars >> nclauses) || fmt != "cnf" || declared_vars < 0)
        throw SolverError("dimacs line " + std::to_string(line_no) + ": malformed header");
      for (int v = 1; v <= declared_vars; ++v) {
        auto it = named.find(v);
        if (it != named.end()) {
          if (inst.variable(it->second) != v) throw SolverError("dimacs: variable names out of order");
        } else {
          inst.fresh();
        }
      }
      continue;
    }
    if (declared_vars < 0) throw SolverError("dimacs line " + std::to_string(line_no) + ": clause before header");
    std::istringstream cs(line);
    long lit = 0;
    while (cs >> lit) {
      if (lit == 0) {
        inst.add_clause(std::move(current));
        current.clear();
        continue;
      }
      if (std::labs(lit) > declared_vars)
        throw SolverError("dimacs line " + std::to_string(line_no) + ": literal out of range");
      current.push_back(static_cast<int>(lit));
    }
    if (!cs.eof()) throw SolverError("dimacs line " + std::to_string(line_no) + ": unexpected token");
  }
  if (declared_vars < 0) throw SolverError("dimacs: missing header");
  if (!current.empty()) inst.add_clause(std::move(current));
  return inst;
}

std::vector<bool> Model::project(const std::vector<int>& vars) const {
  std::vector<bool> out;
  out.reserve(vars.size());
  for (int v : vars) out.push_back(value(v));
  return out;
}

}  // namespace apifsm
