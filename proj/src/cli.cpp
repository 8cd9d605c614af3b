#include <algorithm>
#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>

#include <CLI11.hpp>

#include "apifsm/brute_force.hpp"
#include "apifsm/error.hpp"
#include "apifsm/io.hpp"

namespace apifsm {

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kAnalysis = 2;
constexpr int kChanged = 3;

std::string expand_unit(std::string pattern, const std::string& unit) {
  for (std::size_t at; (at = pattern.find("{unit}")) != std::string::npos;) pattern.replace(at, 6, unit);
  return pattern;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("outputs: cannot write " + path.string());
  out << text;
}

std::string file_safe(std::string name) {
  std::replace_if(name.begin(), name.end(), [](char c) { return c == '/' || c == '\\'; }, '_');
  return name;
}

void dump_encodings(const ApiUnitModel& unit, const ExtractionOptions& options, const std::filesystem::path& dir) {
  const SemanticsCatalog& catalog = *options.catalog;
  bool include_exc = unit_uses_exc(unit, catalog);
  for (const auto& [label, method] : fsm_methods(unit)) {
    auto pm = prepare_method(unit, method, label, catalog, options.context, include_exc);
    auto stem = dir / file_safe(unit.name + "." + label);
    write_file(stem.string() + ".smt", to_smt(pm.encoding.formula) + "\n");
    write_file(stem.string() + ".cnf", write_dimacs(pm.cnf));
  }
}

int run_extract(const std::string& config_path, const std::string& out_dir, const std::string& dump_dir,
                std::ostream& out) {
  auto config = load_config(config_path);
  auto catalog = config_catalog(config);
  auto options = extraction_options(config, catalog);
  auto parse_options = config_parse_options(config, catalog);
  std::filesystem::path target_dir = out_dir.empty() ? config.base_dir : std::filesystem::path(out_dir);
  for (const auto& source : config.sources) {
    auto unit = load_unit(source, parse_options);
    if (!dump_dir.empty()) dump_encodings(unit, options, dump_dir);
    auto start = std::chrono::steady_clock::now();
    Fsm fsm = extract_fsm(unit, options);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    out << unit.name << ": " << fsm.states.size() << " states, " << fsm.transitions.size() << " transitions in "
        << ms.count() << " ms\n";
    if (!config.dot_output.empty()) {
      auto path = target_dir / expand_unit(config.dot_output, unit.name);
      write_file(path, emit_dot(fsm));
      out << "  wrote " << path.string() << '\n';
    }
    if (!config.json_output.empty()) {
      auto path = target_dir / expand_unit(config.json_output, unit.name);
      write_file(path, emit_json(fsm));
      out << "  wrote " << path.string() << '\n';
    }
  }
  return kOk;
}

int run_diff(const std::string& a_path, const std::string& b_path, bool as_json, std::ostream& out) {
  auto report = diff_fsm(load_fsm(a_path), load_fsm(b_path));
  out << (as_json ? report_json(report) : format_report(report));
  return report.changed() ? kChanged : kOk;
}

int run_oracle_check(const std::string& config_path, std::ostream& out) {
  auto config = load_config(config_path);
  auto catalog = config_catalog(config);
  auto options = extraction_options(config, catalog);
  auto parse_options = config_parse_options(config, catalog);
  bool all_match = true;
  for (const auto& source : config.sources) {
    auto unit = load_unit(source, parse_options);
    std::mutex mutex;
    std::map<std::string, std::size_t> compared, mismatched;
    std::map<std::string, std::size_t> sizes;
    TransitionFunction compute = [&](const PreparedMethod& pm, const AbstractState& a, const AbstractState& b,
                                     TransitionStats* stats) {
      Guard solved = compute_transition(pm, a, b, options.solver, options.blocking, stats);
      std::size_t size = oracle_size(pm);
      bool checked = size <= kOracleVariableLimit;
      bool same = !checked || brute_force_transition(pm, a, b) == solved;
      std::lock_guard lock(mutex);
      sizes[pm.label] = size;
      if (checked) ++compared[pm.label];
      if (!same) ++mismatched[pm.label];
      return solved;
    };
    extract_fsm_with(unit, options, compute);
    for (const auto& [label, size] : sizes) {
      out << unit.name << "." << label << ": ";
      if (size > kOracleVariableLimit) {
        out << "skipped (|P|*(last+1) = " << size << ")\n";
      } else if (mismatched[label] > 0) {
        all_match = false;
        out << "MISMATCH in " << mismatched[label] << " of " << compared[label] << " transitions\n";
      } else {
        out << "ok (" << compared[label] << " transitions)\n";
      }
    }
  }
  out << (all_match ? "oracle check passed" : "oracle check FAILED") << '\n';
  return all_match ? kOk : kAnalysis;
}

int run_solve(const std::string& path, std::ostream& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot read");
  std::stringstream buffer;
  buffer << in.rdbuf();
  auto inst = read_dimacs(buffer.str());
  auto result = solve(inst);
  if (!result.satisfiable) {
    out << "s UNSATISFIABLE\n";
    return 20;
  }
  out << "s SATISFIABLE\nv";
  for (int v = 1; v <= inst.num_vars(); ++v) out << ' ' << (result.model.value(v) ? v : -v);
  out << " 0\n";
  return 10;
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extract guarded state machines from collection-backed APIs and compare them.", "apifsm"};
  app.require_subcommand(1);

  std::string config_path, out_dir, dump_dir;
  auto* extract = app.add_subcommand("extract", "Extract FSMs as configured and write DOT/JSON");
  extract->add_option("config", config_path, "Configuration file")->required();
  extract->add_option("--out-dir", out_dir, "Directory for outputs (default: the config's directory)");
  extract->add_option("--dump-encoding", dump_dir, "Write each method encoding as .smt and .cnf into DIR");

  std::string fsm_a, fsm_b;
  bool as_json = false;
  auto* diff = app.add_subcommand("diff", "Compare two extracted FSMs (exit 3 when behaviour changed)");
  diff->add_option("a", fsm_a, "Old model JSON")->required();
  diff->add_option("b", fsm_b, "New model JSON")->required();
  diff->add_flag("--json", as_json, "Print the report as JSON");

  std::string oracle_config;
  auto* oracle = app.add_subcommand("oracle-check", "Compare SAT guards with exhaustive enumeration");
  oracle->add_option("config", oracle_config, "Configuration file")->required();

  std::string cnf_path;
  auto* solve_cmd = app.add_subcommand("solve", "Decide a DIMACS CNF file (exit 10 SAT, 20 UNSAT)");
  solve_cmd->add_option("file", cnf_path, "DIMACS file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*extract) return run_extract(config_path, out_dir, dump_dir, out);
    if (*diff) return run_diff(fsm_a, fsm_b, as_json, out);
    if (*oracle) return run_oracle_check(oracle_config, out);
    if (*solve_cmd) return run_solve(cnf_path, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kAnalysis;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAnalysis;
  }
  return kUsage;
}

}  // namespace apifsm
